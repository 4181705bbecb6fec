#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lungsynth/brush.hpp"
#include "lungsynth/dataset.hpp"
#include "lungsynth/image.hpp"
#include "lungsynth/pbtseg.hpp"
#include "lungsynth/transforms.hpp"

namespace lungsynth::synth {

struct Config {
  brush::Config brush;
  transforms::Config transform;
  pbtseg::Config pbtseg;
  double mask_threshold = 0.05;  // t_bin
  double normalize_lo = 0.005;
  double normalize_hi = 0.995;
  std::uint64_t master_seed = 0;

  void validate() const;
};

/// Every random choice realized while building one triplet.
struct Provenance {
  std::vector<Point> anchors;
  std::vector<brush::StampRecord> stamps;
  std::vector<transforms::Stage> stages;
};

struct Triplet {
  GrayImage i_norm;
  GrayImage i_syn;
  BinaryMask m_anomaly;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  GrayImage a_base;
  GrayImage a_final;  // after lung clipping; m_anomaly == (a_final >= t_bin)
  std::vector<std::pair<transforms::Stage, GrayImage>> intermediates;
  Provenance provenance;
};

/// Paints A_base inside the combined lung mask, composes A_final, clips it
/// to the lung, and derives i_syn = clamp(i_norm + A_final) and
/// m_anomaly = A_final >= t_bin. Throws EmptyLungMask.
Triplet synthesize(const GrayImage& i_norm, const pbtseg::LungMasks& lungs,
                   const Config& config, std::uint64_t stream_id);

struct BatchOptions {
  int jobs = 1;
  int per_image_triplets = 1;
  bool dump_stages = false;
  std::vector<std::string> patterns = {"*.png", "*.pgm"};
  /// Receives one human-readable line per skipped or failed input.
  std::function<void(const std::string&)> log;
};

/// Runs normalize -> PBTSeg -> synthesize over every input (sorted), writes
/// the triplet files and manifest.jsonl into output_dir, and returns the
/// manifest records in input order. The k-th input's v-th variant uses
/// stream_id k * per_image_triplets + v. Per-file failures become error
/// records. Throws DirNotFound for a missing input directory.
std::vector<dataio::ManifestRecord> generate_dataset(
    const std::filesystem::path& input_dir, const std::filesystem::path& output_dir,
    const Config& config, const BatchOptions& options = {});

}  // namespace lungsynth::synth
