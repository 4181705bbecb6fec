#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "lungsynth/config.hpp"
#include "lungsynth/dataset.hpp"
#include "lungsynth/errors.hpp"
#include "lungsynth/filters.hpp"
#include "lungsynth/image_io.hpp"
#include "lungsynth/losses.hpp"
#include "lungsynth/metrics.hpp"
#include "lungsynth/pbtseg.hpp"
#include "lungsynth/synth.hpp"

namespace lungsynth::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  bool verbose = false;
  bool strict = false;
};

class Context {
 public:
  Context(const GlobalOptions& g, std::ostream& out, std::ostream& err)
      : globals_(g), out_(out), err_(err) {}

  dataio::FullConfig config() const {
    dataio::FullConfig cfg;
    std::string path = globals_.config_path;
    if (path.empty()) {
      if (const char* env = std::getenv(dataio::kConfigEnvVar)) path = env;
    }
    if (!path.empty()) cfg = dataio::load_config(path);
    if (globals_.seed) cfg.synthesis.master_seed = *globals_.seed;
    return cfg;
  }

  const GlobalOptions& globals() const { return globals_; }

  void emit(const json& j) const { out_ << j.dump(2) << '\n'; }

  void diag(const std::string& msg) const {
    std::lock_guard lock(mutex_);
    err_ << "lungsynth: " << msg << '\n';
  }

  void progress(const std::string& msg) const {
    if (globals_.verbose) diag(msg);
  }

  int per_file_status(std::size_t failures) const {
    return globals_.strict && failures > 0 ? kDataError : kSuccess;
  }

 private:
  GlobalOptions globals_;
  std::ostream& out_;
  std::ostream& err_;
  mutable std::mutex mutex_;
};

template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn fn) {
  const std::size_t threads =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, jobs)), 1, std::max<std::size_t>(1, n));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) fn(i);
  };
  if (threads == 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
}

// ---------------------------------------------------------------- segment

struct SegmentArgs {
  std::string input;
  std::string output;
  bool overlay = false;
  bool trace = false;
};

int run_segment(const Context& ctx, const SegmentArgs& a) {
  const dataio::FullConfig cfg = ctx.config();
  const auto inputs = dataio::scan_inputs(a.input);
  fs::create_directories(a.output);

  std::vector<std::string> errors(inputs.size());
  parallel_for(inputs.size(), ctx.globals().jobs, [&](std::size_t i) {
    const fs::path& path = inputs[i];
    const std::string stem = path.stem().string();
    try {
      const GrayImage norm = normalize(io::load_image(path), cfg.synthesis.normalize_lo,
                                       cfg.synthesis.normalize_hi);
      pbtseg::Trace trace;
      const pbtseg::LungMasks masks =
          pbtseg::segment_lungs(norm, cfg.synthesis.pbtseg, a.trace ? &trace : nullptr);
      io::save_mask(fs::path(a.output) / (stem + "_lung.png"), masks.combined);
      if (a.overlay) {
        io::save_png_rgb(fs::path(a.output) / (stem + "_overlay.png"),
                         io::overlay_boundaries(norm, masks.left, masks.right));
      }
      if (a.trace) {
        std::ofstream f(fs::path(a.output) / (stem + "_trace.json"), std::ios::binary);
        f << pbtseg::trace_to_json(trace) << '\n';
      }
      ctx.progress("segmented " + path.filename().string());
    } catch (const Error& e) {
      errors[i] = e.what();
    } catch (const std::invalid_argument& e) {
      errors[i] = e.what();
    }
  });

  json failed = json::array();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (errors[i].empty()) continue;
    ctx.diag(inputs[i].filename().string() + ": " + errors[i]);
    failed.push_back({{"source", inputs[i].filename().string()}, {"error", errors[i]}});
  }
  ctx.emit({{"processed", inputs.size()},
            {"ok", inputs.size() - failed.size()},
            {"errors", failed}});
  return ctx.per_file_status(failed.size());
}

// ------------------------------------------------------------- synthesize

struct SynthesizeArgs {
  std::string input;
  std::string output;
  bool dump_stages = false;
  int per_image_triplets = 1;
};

int run_synthesize(const Context& ctx, const SynthesizeArgs& a) {
  const dataio::FullConfig cfg = ctx.config();
  synth::BatchOptions options;
  options.jobs = ctx.globals().jobs;
  options.per_image_triplets = a.per_image_triplets;
  options.dump_stages = a.dump_stages;
  options.log = [&ctx](const std::string& m) { ctx.diag(m); };
  const auto records = synth::generate_dataset(a.input, a.output, cfg.synthesis, options);
  const auto failures = static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.ok(); }));
  ctx.emit({{"records", records.size()},
            {"ok", records.size() - failures},
            {"errors", failures},
            {"seed", cfg.synthesis.master_seed},
            {"manifest", (fs::path(a.output) / "manifest.jsonl").string()}});
  return ctx.per_file_status(failures);
}

// --------------------------------------------------------------- residual

struct ResidualArgs {
  std::string input;
  std::string recon;
  std::string output = ".";
  std::optional<double> tau;
};

int run_residual(const Context& ctx, const ResidualArgs& a) {
  const dataio::FullConfig cfg = ctx.config();
  const double tau = a.tau.value_or(cfg.loss.tau);
  const GrayImage image = io::load_image(a.input);
  const GrayImage recon = io::load_image(a.recon);
  const GrayImage map = losses::anomaly_map(image, recon);
  const BinaryMask mask = losses::threshold_anomaly_map(map, tau);

  fs::create_directories(a.output);
  const std::string stem = fs::path(a.input).stem().string();
  const fs::path map_path = fs::path(a.output) / (stem + "_amap.png");
  const fs::path mask_path = fs::path(a.output) / (stem + "_amask.png");
  io::save_image(map_path, map, io::BitDepth::Eight);
  io::save_mask(mask_path, mask);
  ctx.emit({{"map_path", map_path.string()},
            {"mask_path", mask_path.string()},
            {"tau", tau},
            {"anomalous_pixels", mask.count()},
            {"image_score", metrics::image_score_from_map(map, cfg.metrics.reducer,
                                                          cfg.metrics.top_k_fraction)},
            {"reducer", metrics::to_string(cfg.metrics.reducer)}});
  return kSuccess;
}

// ------------------------------------------------------------------- loss

std::vector<double> read_feature_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<double> values;
  std::string token;
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  for (char& c : content) {
    if (c == ',' || c == ';' || c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  std::istringstream ss(content);
  while (ss >> token) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw IoError(path + ": not a number: '" + token + "'");
    }
  }
  if (values.empty()) throw IoError(path + ": no feature values");
  return values;
}

struct LossArgs {
  std::string norm, syn, recon, mask;
  std::optional<double> tau, eps;
  std::string feat_a, feat_b;
};

int run_loss(const Context& ctx, const LossArgs& a) {
  const dataio::FullConfig cfg = ctx.config();
  const GrayImage norm = io::load_image(a.norm);
  const GrayImage syn = io::load_image(a.syn);
  const GrayImage recon = io::load_image(a.recon);
  const BinaryMask mask = io::load_mask(a.mask);

  std::vector<double> fa, fb;
  const bool have_features = !a.feat_a.empty() && !a.feat_b.empty();
  if (!a.feat_a.empty() != !a.feat_b.empty()) {
    throw CLI::ValidationError("--feat-a and --feat-b must be given together");
  }
  if (have_features) {
    fa = read_feature_csv(a.feat_a);
    fb = read_feature_csv(a.feat_b);
  }
  losses::LossInputs in{norm, syn, recon, mask};
  if (have_features) {
    in.f_syn = std::span<const double>(fa);
    in.f_norm = std::span<const double>(fb);
  }
  in.tau = a.tau.value_or(cfg.loss.tau);
  in.eps = a.eps.value_or(cfg.loss.eps);
  const losses::LossReport r = losses::total_loss(in, cfg.loss.weights);
  ctx.emit({{"feat", r.feat},
            {"feat_available", have_features},
            {"global", r.global},
            {"local", r.local},
            {"dice", r.dice},
            {"dice_coefficient", r.dice_coefficient},
            {"total", r.total},
            {"tau", in.tau},
            {"eps", in.eps}});
  return kSuccess;
}

// ------------------------------------------------------------- eval-image

std::vector<metrics::ScoreSample> read_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<metrics::ScoreSample> samples;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError(path + ":" + std::to_string(n) + ": expected 'score,label'");
    const std::string score = line.substr(0, comma);
    const std::string label = line.substr(comma + 1);
    try {
      std::size_t used = 0;
      const double s = std::stod(score, &used);
      const int l = std::stoi(label);
      if (l != 0 && l != 1) throw std::invalid_argument("label");
      samples.push_back({s, l});
    } catch (const std::exception&) {
      if (samples.empty() && n == 1) continue;  // header row
      throw IoError(path + ":" + std::to_string(n) + ": malformed row '" + line + "'");
    }
  }
  return samples;
}

int run_eval_image(const Context& ctx, const std::string& scores_path) {
  const auto samples = read_scores(scores_path);
  const auto positives = static_cast<std::size_t>(std::count_if(
      samples.begin(), samples.end(), [](const auto& s) { return s.label == 1; }));
  ctx.emit({{"auc", metrics::auc(samples)},
            {"ap", metrics::average_precision(samples)},
            {"samples", samples.size()},
            {"positives", positives}});
  return kSuccess;
}

// ------------------------------------------------------------- eval-pixel

int run_eval_pixel(const Context& ctx, const std::string& pred_dir, const std::string& gt_dir) {
  const auto preds = dataio::scan_inputs(pred_dir);
  const auto gts = dataio::scan_inputs(gt_dir);
  std::map<std::string, fs::path> gt_by_stem;
  for (const auto& p : gts) gt_by_stem[p.stem().string()] = p;

  json per_image = json::array();
  json errors = json::array();
  std::set<std::string> matched;
  double sum = 0.0;
  for (const auto& p : preds) {
    const std::string stem = p.stem().string();
    const auto it = gt_by_stem.find(stem);
    if (it == gt_by_stem.end()) {
      errors.push_back({{"stem", stem}, {"error", "no ground truth with this stem"}});
      continue;
    }
    matched.insert(stem);
    try {
      const double d = metrics::dice_score(io::load_mask(p), io::load_mask(it->second));
      per_image.push_back({{"stem", stem}, {"dice", d}});
      sum += d;
    } catch (const Error& e) {
      errors.push_back({{"stem", stem}, {"error", e.what()}});
    }
  }
  for (const auto& [stem, path] : gt_by_stem) {
    if (!matched.count(stem)) {
      errors.push_back({{"stem", stem}, {"error", "no prediction with this stem"}});
    }
  }
  for (const auto& e : errors) {
    ctx.diag(e["stem"].get<std::string>() + ": " + e["error"].get<std::string>());
  }
  json result = {{"per_image", per_image}, {"errors", errors}};
  result["mean_dice"] = per_image.empty() ? json(nullptr)
                                          : json(sum / static_cast<double>(per_image.size()));
  ctx.emit(result);
  return ctx.per_file_status(errors.size());
}

// ------------------------------------------------------ validate-manifest

int run_validate(const Context& ctx, const std::string& manifest) {
  if (!fs::exists(manifest)) throw IoError("manifest not found: " + manifest);
  const auto records = dataio::read_manifest(manifest);
  const auto issues = dataio::validate_manifest(manifest);
  json list = json::array();
  for (const auto& i : issues) {
    ctx.diag(manifest + ":" + std::to_string(i.line) + ": " + i.message);
    list.push_back({{"line", i.line}, {"message", i.message}});
  }
  const auto ok = std::count_if(records.begin(), records.end(), [](const auto& r) { return r.ok(); });
  ctx.emit({{"records", records.size()},
            {"ok", ok},
            {"error_records", records.size() - static_cast<std::size_t>(ok)},
            {"issues", list},
            {"valid", issues.empty()}});
  return issues.empty() ? kSuccess : kDataError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lung-field segmentation and synthetic lung-opacity triplet generation"};
  app.name("lungsynth");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path,
                 std::string("Configuration file (default: $") + dataio::kConfigEnvVar + ")");
  app.add_option("--seed", g.seed, "Master seed (overrides the config file)");
  app.add_option("--jobs", g.jobs, "Files processed in parallel")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", g.verbose, "Progress messages on stderr");
  app.add_flag("--strict", g.strict, "Exit 1 when any per-file error occurs");

  SegmentArgs seg;
  auto* segment = app.add_subcommand("segment", "Lung masks for every image in a directory");
  segment->add_option("--input", seg.input, "Input directory")->required();
  segment->add_option("--output", seg.output, "Output directory")->required();
  segment->add_flag("--overlay", seg.overlay, "Also write <stem>_overlay.png");
  segment->add_flag("--trace", seg.trace, "Also write <stem>_trace.json");

  SynthesizeArgs syn;
  auto* synthesize = app.add_subcommand("synthesize", "Generate (normal, synthetic, mask) triplets");
  synthesize->add_option("--input", syn.input, "Input directory")->required();
  synthesize->add_option("--output", syn.output, "Output directory")->required();
  synthesize->add_flag("--dump-stages", syn.dump_stages, "Write every intermediate anomaly layer");
  synthesize->add_option("--per-image-triplets", syn.per_image_triplets,
                         "Synthetic variants per input image")
      ->check(CLI::PositiveNumber);

  ResidualArgs res;
  auto* residual = app.add_subcommand("residual", "Anomaly map |I - recon| and its binary mask");
  residual->add_option("--input", res.input, "Input image")->required()->check(CLI::ExistingFile);
  residual->add_option("--recon", res.recon, "Reconstruction")->required()->check(CLI::ExistingFile);
  residual->add_option("--output", res.output, "Output directory");
  residual->add_option("--tau", res.tau, "Squared-error threshold");

  LossArgs los;
  auto* loss = app.add_subcommand("loss", "Evaluate the training loss terms as JSON");
  loss->add_option("--norm", los.norm, "Normal image")->required()->check(CLI::ExistingFile);
  loss->add_option("--syn", los.syn, "Synthetic-anomaly image")->required()->check(CLI::ExistingFile);
  loss->add_option("--recon", los.recon, "Reconstruction")->required()->check(CLI::ExistingFile);
  loss->add_option("--mask", los.mask, "Anomaly mask")->required()->check(CLI::ExistingFile);
  loss->add_option("--tau", los.tau, "Squared-error threshold");
  loss->add_option("--eps", los.eps, "Local-loss epsilon");
  loss->add_option("--feat-a", los.feat_a, "CSV of encoder features for the synthetic image");
  loss->add_option("--feat-b", los.feat_b, "CSV of encoder features for the normal image");

  std::string scores;
  auto* eval_image = app.add_subcommand("eval-image", "AUC and AP from score,label rows");
  eval_image->add_option("--scores", scores, "CSV file")->required();

  std::string pred_dir, gt_dir;
  auto* eval_pixel = app.add_subcommand("eval-pixel", "Per-image Dice between mask directories");
  eval_pixel->add_option("--pred", pred_dir, "Predicted masks")->required();
  eval_pixel->add_option("--gt", gt_dir, "Ground-truth masks")->required();

  std::string manifest;
  auto* validate = app.add_subcommand("validate-manifest", "Check a manifest.jsonl and its files");
  validate->add_option("--manifest", manifest, "Path to manifest.jsonl")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  Context ctx(g, out, err);
  try {
    if (*segment) return run_segment(ctx, seg);
    if (*synthesize) return run_synthesize(ctx, syn);
    if (*residual) return run_residual(ctx, res);
    if (*loss) return run_loss(ctx, los);
    if (*eval_image) return run_eval_image(ctx, scores);
    if (*eval_pixel) return run_eval_pixel(ctx, pred_dir, gt_dir);
    if (*validate) return run_validate(ctx, manifest);
  } catch (const CLI::ValidationError& e) {
    ctx.diag(e.what());
    return kUsageError;
  } catch (const ConfigError& e) {
    ctx.diag(e.what());
    return kUsageError;
  } catch (const Error& e) {
    ctx.diag(e.what());
    return kDataError;
  } catch (const std::exception& e) {
    ctx.diag(e.what());
    return kDataError;
  }
  return kUsageError;
}

}  // namespace lungsynth::cli
