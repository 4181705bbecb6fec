#include "lungsynth/synth.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "lungsynth/errors.hpp"
#include "lungsynth/filters.hpp"
#include "lungsynth/image_io.hpp"
#include "lungsynth/random.hpp"

namespace lungsynth::synth {

namespace fs = std::filesystem;

void Config::validate() const {
  brush.validate();
  transform.validate();
  pbtseg.validate();
  if (!(mask_threshold > 0.0 && mask_threshold < 1.0)) {
    throw ConfigError("mask_threshold must lie in (0,1)");
  }
  if (!(normalize_lo >= 0.0 && normalize_lo < normalize_hi && normalize_hi <= 1.0)) {
    throw ConfigError("normalize: need 0 <= lo_percentile < hi_percentile <= 1");
  }
}

Triplet synthesize(const GrayImage& i_norm, const pbtseg::LungMasks& lungs,
                   const Config& config, std::uint64_t stream_id) {
  config.validate();
  require_same_size("synthesize", i_norm.size(), lungs.combined.size());
  const BinaryMask& lung = lungs.combined;
  if (!lung.any()) throw EmptyLungMask();

  RandomStream rng(config.master_seed, stream_id);
  Triplet t;
  t.seed = config.master_seed;
  t.stream_id = stream_id;
  t.i_norm = i_norm;
  t.a_base = brush::paint_base(lung, config.brush, rng, &t.provenance.anchors,
                               &t.provenance.stamps);

  transforms::Composition composed =
      transforms::compose(t.a_base, i_norm, config.transform, rng);
  t.provenance.stages = composed.stages;
  t.intermediates = std::move(composed.intermediates);

  // Blur may spread the layer past the lung boundary.
  t.a_final = std::move(composed.layer);
  for (std::size_t i = 0; i < t.a_final.pixel_count(); ++i) {
    if (!lung[i]) t.a_final[i] = 0.0;
  }

  t.i_syn = GrayImage(i_norm.width(), i_norm.height(), 0.0);
  t.m_anomaly = BinaryMask(i_norm.width(), i_norm.height());
  for (std::size_t i = 0; i < i_norm.pixel_count(); ++i) {
    t.i_syn[i] = std::clamp(i_norm[i] + t.a_final[i], 0.0, 1.0);
    t.m_anomaly.set(i, t.a_final[i] >= config.mask_threshold);
  }
  return t;
}

namespace {

struct FileResult {
  std::vector<dataio::ManifestRecord> records;
  std::vector<std::string> messages;
};

dataio::ManifestRecord error_record(const std::string& source, const Config& config,
                                    std::uint64_t stream_id, const std::string& msg) {
  dataio::ManifestRecord r;
  r.source = source;
  r.seed = config.master_seed;
  r.stream_id = stream_id;
  r.status = "error";
  r.error_msg = msg;
  return r;
}

FileResult process_file(const fs::path& input, std::size_t index,
                        const fs::path& output_dir, const Config& config,
                        const BatchOptions& options, bool duplicate_stem) {
  FileResult result;
  const std::string source = input.filename().string();
  const std::string stem = input.stem().string();
  const auto variants = static_cast<std::uint64_t>(options.per_image_triplets);
  const std::uint64_t first_stream = static_cast<std::uint64_t>(index) * variants;

  auto fail = [&](const std::string& msg) {
    result.records.push_back(error_record(source, config, first_stream, msg));
    result.messages.push_back(source + ": " + msg);
    return result;
  };
  if (duplicate_stem) return fail("duplicate file stem '" + stem + "'");

  GrayImage i_norm;
  pbtseg::LungMasks lungs;
  try {
    i_norm = normalize(io::load_image(input), config.normalize_lo, config.normalize_hi);
    lungs = pbtseg::segment_lungs(i_norm, config.pbtseg);
  } catch (const Error& e) {
    return fail(e.what());
  } catch (const std::invalid_argument& e) {
    return fail(e.what());
  }

  const std::string lung_name = stem + "_lung.png";
  const std::string norm_name = stem + "_norm.png";
  try {
    io::save_mask(output_dir / lung_name, lungs.combined);
    io::save_image(output_dir / norm_name, i_norm, io::BitDepth::Sixteen);
  } catch (const Error& e) {
    return fail(e.what());
  }

  const double lung_area = static_cast<double>(lungs.combined.count());
  for (std::uint64_t v = 0; v < variants; ++v) {
    const std::uint64_t stream_id = first_stream + v;
    const std::string prefix =
        variants == 1 ? stem : stem + "_v" + std::to_string(v);
    try {
      const Triplet t = synthesize(i_norm, lungs, config, stream_id);
      dataio::ManifestRecord r;
      r.source = source;
      r.norm_path = norm_name;
      r.syn_path = prefix + "_syn.png";
      r.mask_path = prefix + "_mask.png";
      r.lung_path = lung_name;
      r.seed = config.master_seed;
      r.stream_id = stream_id;
      r.anomaly_area_fraction = static_cast<double>(t.m_anomaly.count()) / lung_area;
      for (transforms::Stage s : t.provenance.stages) {
        r.stages_applied.emplace_back(transforms::to_string(s));
      }
      io::save_image(output_dir / r.syn_path, t.i_syn, io::BitDepth::Sixteen);
      io::save_mask(output_dir / r.mask_path, t.m_anomaly);
      if (options.dump_stages) {
        io::save_image(output_dir / (prefix + "_abase.png"), t.a_base, io::BitDepth::Sixteen);
        for (const auto& [stage, layer] : t.intermediates) {
          io::save_image(output_dir / (prefix + "_" + transforms::to_string(stage) + ".png"),
                         layer, io::BitDepth::Sixteen);
        }
        io::save_image(output_dir / (prefix + "_afinal.png"), t.a_final, io::BitDepth::Sixteen);
      }
      result.records.push_back(std::move(r));
    } catch (const Error& e) {
      result.records.push_back(error_record(source, config, stream_id, e.what()));
      result.messages.push_back(source + ": " + e.what());
    }
  }
  return result;
}

}  // namespace

std::vector<dataio::ManifestRecord> generate_dataset(const fs::path& input_dir,
                                                     const fs::path& output_dir,
                                                     const Config& config,
                                                     const BatchOptions& options) {
  config.validate();
  if (options.per_image_triplets < 1) {
    throw std::invalid_argument("per_image_triplets must be >= 1");
  }
  const std::vector<fs::path> inputs = dataio::scan_inputs(input_dir, options.patterns);
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create " + output_dir.string() + ": " + ec.message());

  std::vector<bool> duplicate(inputs.size(), false);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (inputs[j].stem() == inputs[i].stem()) duplicate[i] = true;
    }
  }

  std::vector<FileResult> results(inputs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      results[i] = process_file(inputs[i], i, output_dir, config, options, duplicate[i]);
    }
  };
  const std::size_t threads =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, options.jobs)), 1,
                              std::max<std::size_t>(1, inputs.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<dataio::ManifestRecord> manifest;
  for (FileResult& r : results) {
    if (options.log) {
      for (const std::string& m : r.messages) options.log(m);
    }
    for (dataio::ManifestRecord& rec : r.records) manifest.push_back(std::move(rec));
  }
  dataio::write_manifest(output_dir / "manifest.jsonl", manifest);
  return manifest;
}

}  // namespace lungsynth::synth
