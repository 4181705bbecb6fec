#include "lungsynth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lungsynth/errors.hpp"

namespace lungsynth::metrics {

namespace {

void check_samples(std::span<const ScoreSample> samples) {
  for (const ScoreSample& s : samples) {
    if (!std::isfinite(s.score)) throw std::invalid_argument("score must be finite");
    if (s.label != 0 && s.label != 1) throw std::invalid_argument("label must be 0 or 1");
  }
}

std::vector<std::size_t> order_by_score(std::span<const ScoreSample> samples,
                                        bool descending) {
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return descending ? samples[a].score > samples[b].score
                      : samples[a].score < samples[b].score;
  });
  return order;
}

}  // namespace

double auc(std::span<const ScoreSample> samples) {
  check_samples(samples);
  std::size_t positives = 0;
  for (const ScoreSample& s : samples) positives += static_cast<std::size_t>(s.label);
  const std::size_t negatives = samples.size() - positives;
  if (positives == 0 || negatives == 0) throw SingleClass();

  const std::vector<std::size_t> order = order_by_score(samples, false);
  // Sum of 1-based ranks of positives; ties share their average rank.
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && samples[order[j + 1]].score == samples[order[i]].score) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (samples[order[k]].label == 1) positive_rank_sum += rank;
    }
    i = j + 1;
  }
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

double average_precision(std::span<const ScoreSample> samples) {
  check_samples(samples);
  std::size_t positives = 0;
  for (const ScoreSample& s : samples) positives += static_cast<std::size_t>(s.label);
  if (positives == 0) throw NoPositives();

  const std::vector<std::size_t> order = order_by_score(samples, true);
  const double total_pos = static_cast<double>(positives);
  std::size_t tp = 0;
  std::size_t fp = 0;
  double prev_recall = 0.0;
  double ap = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && samples[order[j]].score == samples[order[i]].score) {
      if (samples[order[j]].label == 1) ++tp;
      else ++fp;
      ++j;
    }
    const double recall = static_cast<double>(tp) / total_pos;
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

double dice_score(const BinaryMask& pred, const BinaryMask& gt) {
  require_same_size("dice_score", pred.size(), gt.size());
  const std::size_t a = pred.count();
  const std::size_t b = gt.count();
  if (a + b == 0) return 1.0;
  return 2.0 * static_cast<double>(overlap_count(pred, gt)) / static_cast<double>(a + b);
}

Reducer parse_reducer(const std::string& name) {
  if (name == "max") return Reducer::Max;
  if (name == "mean") return Reducer::Mean;
  if (name == "top-k-mean" || name == "topk") return Reducer::TopKMean;
  throw std::invalid_argument("unknown reducer '" + name + "' (max|mean|top-k-mean)");
}

const char* to_string(Reducer reducer) {
  switch (reducer) {
    case Reducer::Max: return "max";
    case Reducer::Mean: return "mean";
    case Reducer::TopKMean: return "top-k-mean";
  }
  return "unknown";
}

double image_score_from_map(const GrayImage& map, Reducer reducer,
                            double top_k_fraction) {
  const auto px = map.pixels();
  if (px.empty()) return 0.0;
  switch (reducer) {
    case Reducer::Max:
      return *std::max_element(px.begin(), px.end());
    case Reducer::Mean:
      return std::accumulate(px.begin(), px.end(), 0.0) / static_cast<double>(px.size());
    case Reducer::TopKMean: {
      if (!(top_k_fraction > 0.0 && top_k_fraction <= 1.0)) {
        throw std::invalid_argument("top_k_fraction must lie in (0,1]");
      }
      const auto k = std::clamp<std::size_t>(
          static_cast<std::size_t>(std::ceil(top_k_fraction * static_cast<double>(px.size()))),
          1, px.size());
      std::vector<double> values(px.begin(), px.end());
      std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k - 1),
                       values.end(), std::greater<>());
      std::sort(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k),
                std::greater<>());
      return std::accumulate(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), 0.0) /
             static_cast<double>(k);
    }
  }
  return 0.0;
}

}  // namespace lungsynth::metrics
