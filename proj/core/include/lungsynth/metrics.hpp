#pragma once

#include <span>
#include <string>

#include "lungsynth/image.hpp"

namespace lungsynth::metrics {

struct ScoreSample {
  double score = 0.0;
  int label = 0;  // 0 normal, 1 abnormal
};

/// Mann-Whitney estimate: fraction of (positive, negative) pairs where the
/// positive scores higher, ties counted as one half. Throws SingleClass.
double auc(std::span<const ScoreSample> samples);

/// Step-wise AP: sum over descending distinct score thresholds of
/// (R_n - R_{n-1}) * P_n, tied scores forming one threshold. No
/// interpolation. Throws NoPositives.
double average_precision(std::span<const ScoreSample> samples);

/// 2|A∩B| / (|A|+|B|); 1 when both masks are empty.
double dice_score(const BinaryMask& pred, const BinaryMask& gt);

enum class Reducer { Max, Mean, TopKMean };

Reducer parse_reducer(const std::string& name);
const char* to_string(Reducer reducer);

/// Collapses an anomaly map to an image-level score. TopKMean averages the
/// largest max(1, ceil(top_k_fraction * N)) pixels.
double image_score_from_map(const GrayImage& map, Reducer reducer = Reducer::TopKMean,
                            double top_k_fraction = 0.01);

}  // namespace lungsynth::metrics
