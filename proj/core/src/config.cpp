#include "lungsynth/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lungsynth/errors.hpp"

namespace lungsynth::dataio {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("expected a number, got '" + v + "'");
  }
  return out;
}

template <typename Int>
Int parse_int(const std::string& v) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("expected an integer, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("expected true/false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("empty list element in '" + v + "'");
    out.push_back(item);
  }
  return out;
}

brush::IntRange parse_range(const std::string& v) {
  const auto parts = split_list(v);
  if (parts.size() == 1) {
    const int n = parse_int<int>(parts[0]);
    return {n, n};
  }
  if (parts.size() != 2) throw std::invalid_argument("expected 'min, max', got '" + v + "'");
  return {parse_int<int>(parts[0]), parse_int<int>(parts[1])};
}

using Setter = std::function<void(FullConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&t](const std::string& key, auto member) {
      t[key] = [member](FullConfig& c, const std::string& v) { member(c) = parse_double(v); };
    };
    num("mask_threshold", [](FullConfig& c) -> double& { return c.synthesis.mask_threshold; });
    t["seed"] = [](FullConfig& c, const std::string& v) {
      c.synthesis.master_seed = parse_int<std::uint64_t>(v);
    };
    num("normalize.lo_percentile", [](FullConfig& c) -> double& { return c.synthesis.normalize_lo; });
    num("normalize.hi_percentile", [](FullConfig& c) -> double& { return c.synthesis.normalize_hi; });

    t["pbtseg.thresholds"] = [](FullConfig& c, const std::string& v) {
      std::vector<double> values;
      for (const std::string& s : split_list(v)) values.push_back(parse_double(s));
      c.synthesis.pbtseg.thresholds = std::move(values);
    };
    num("pbtseg.circularity_min", [](FullConfig& c) -> double& { return c.synthesis.pbtseg.circularity_min; });
    num("pbtseg.border_contact_max", [](FullConfig& c) -> double& { return c.synthesis.pbtseg.border_contact_max; });
    num("pbtseg.area_min", [](FullConfig& c) -> double& { return c.synthesis.pbtseg.area_min; });
    num("pbtseg.area_max", [](FullConfig& c) -> double& { return c.synthesis.pbtseg.area_max; });
    t["pbtseg.require_taller_than_wide"] = [](FullConfig& c, const std::string& v) {
      c.synthesis.pbtseg.require_taller_than_wide = parse_bool(v);
    };
    t["pbtseg.connectivity"] = [](FullConfig& c, const std::string& v) {
      const int n = parse_int<int>(v);
      if (n != 4 && n != 8) throw std::invalid_argument("connectivity must be 4 or 8");
      c.synthesis.pbtseg.connectivity = n == 4 ? Connectivity::Four : Connectivity::Eight;
    };
    t["pbtseg.fill_holes"] = [](FullConfig& c, const std::string& v) {
      c.synthesis.pbtseg.fill_holes = parse_bool(v);
    };

    t["brush.anchor_count"] = [](FullConfig& c, const std::string& v) {
      c.synthesis.brush.anchor_count = parse_range(v);
    };
    t["brush.stamps_per_anchor"] = [](FullConfig& c, const std::string& v) {
      c.synthesis.brush.stamps_per_anchor = parse_range(v);
    };
    num("brush.base_radius", [](FullConfig& c) -> double& { return c.synthesis.brush.base_radius; });
    num("brush.size_jitter", [](FullConfig& c) -> double& { return c.synthesis.brush.size_jitter; });
    num("brush.angle_jitter", [](FullConfig& c) -> double& { return c.synthesis.brush.angle_jitter; });
    num("brush.opacity_base", [](FullConfig& c) -> double& { return c.synthesis.brush.opacity_base; });
    num("brush.opacity_jitter", [](FullConfig& c) -> double& { return c.synthesis.brush.opacity_jitter; });
    num("brush.stamp_aspect", [](FullConfig& c) -> double& { return c.synthesis.brush.stamp_aspect; });
    num("brush.walk_step", [](FullConfig& c) -> double& { return c.synthesis.brush.walk_step; });
    t["brush.reference_width"] = [](FullConfig& c, const std::string& v) {
      c.synthesis.brush.reference_width = parse_int<int>(v);
    };

    num("transform.cryst_density", [](FullConfig& c) -> double& { return c.synthesis.transform.cryst_density; });
    num("transform.blur_sigma", [](FullConfig& c) -> double& { return c.synthesis.transform.blur_sigma; });
    num("transform.rib_alpha", [](FullConfig& c) -> double& { return c.synthesis.transform.rib_alpha; });
    num("transform.rib_percentile", [](FullConfig& c) -> double& { return c.synthesis.transform.rib_percentile; });
    num("transform.p_cryst", [](FullConfig& c) -> double& { return c.synthesis.transform.p_cryst; });
    num("transform.p_blur", [](FullConfig& c) -> double& { return c.synthesis.transform.p_blur; });
    num("transform.p_rib", [](FullConfig& c) -> double& { return c.synthesis.transform.p_rib; });

    num("loss.tau", [](FullConfig& c) -> double& { return c.loss.tau; });
    num("loss.eps", [](FullConfig& c) -> double& { return c.loss.eps; });
    num("loss.w_feat", [](FullConfig& c) -> double& { return c.loss.weights.feat; });
    num("loss.w_global", [](FullConfig& c) -> double& { return c.loss.weights.global; });
    num("loss.w_local", [](FullConfig& c) -> double& { return c.loss.weights.local; });
    num("loss.w_dice", [](FullConfig& c) -> double& { return c.loss.weights.dice; });

    t["metrics.reducer"] = [](FullConfig& c, const std::string& v) {
      c.metrics.reducer = metrics::parse_reducer(v);
    };
    num("metrics.top_k_fraction", [](FullConfig& c) -> double& { return c.metrics.top_k_fraction; });
    return t;
  }();
  return table;
}

}  // namespace

void FullConfig::validate() const {
  synthesis.validate();
  if (!(loss.tau > 0.0)) throw ConfigError("loss.tau must be > 0");
  if (!(loss.eps > 0.0)) throw ConfigError("loss.eps must be > 0");
  if (!(metrics.top_k_fraction > 0.0 && metrics.top_k_fraction <= 1.0)) {
    throw ConfigError("metrics.top_k_fraction must lie in (0,1]");
  }
}

FullConfig parse_config(std::string_view text, const std::string& source) {
  FullConfig config;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(source, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(source, line_no, "missing key");
    const auto it = setters().find(key);
    if (it == setters().end()) throw UnknownKey(source, line_no, key);
    if (!seen.insert(key).second) throw ParseError(source, line_no, "duplicate key '" + key + "'");
    if (value.empty()) throw ParseError(source, line_no, "missing value for '" + key + "'");
    try {
      it->second(config, value);
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, line_no, key + ": " + e.what());
    }
  }
  config.validate();
  return config;
}

FullConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

std::string format_config(const FullConfig& c) {
  std::ostringstream out;
  out.precision(17);
  const auto& s = c.synthesis;
  out << "seed = " << s.master_seed << '\n'
      << "mask_threshold = " << s.mask_threshold << '\n'
      << "normalize.lo_percentile = " << s.normalize_lo << '\n'
      << "normalize.hi_percentile = " << s.normalize_hi << '\n';
  out << "pbtseg.thresholds = ";
  for (std::size_t i = 0; i < s.pbtseg.thresholds.size(); ++i) {
    out << (i ? ", " : "") << s.pbtseg.thresholds[i];
  }
  out << '\n'
      << "pbtseg.circularity_min = " << s.pbtseg.circularity_min << '\n'
      << "pbtseg.border_contact_max = " << s.pbtseg.border_contact_max << '\n'
      << "pbtseg.area_min = " << s.pbtseg.area_min << '\n'
      << "pbtseg.area_max = " << s.pbtseg.area_max << '\n'
      << "pbtseg.require_taller_than_wide = "
      << (s.pbtseg.require_taller_than_wide ? "true" : "false") << '\n'
      << "pbtseg.connectivity = " << static_cast<int>(s.pbtseg.connectivity) << '\n'
      << "pbtseg.fill_holes = " << (s.pbtseg.fill_holes ? "true" : "false") << '\n'
      << "brush.anchor_count = " << s.brush.anchor_count.min << ", " << s.brush.anchor_count.max << '\n'
      << "brush.stamps_per_anchor = " << s.brush.stamps_per_anchor.min << ", "
      << s.brush.stamps_per_anchor.max << '\n'
      << "brush.base_radius = " << s.brush.base_radius << '\n'
      << "brush.size_jitter = " << s.brush.size_jitter << '\n'
      << "brush.angle_jitter = " << s.brush.angle_jitter << '\n'
      << "brush.opacity_base = " << s.brush.opacity_base << '\n'
      << "brush.opacity_jitter = " << s.brush.opacity_jitter << '\n'
      << "brush.stamp_aspect = " << s.brush.stamp_aspect << '\n'
      << "brush.walk_step = " << s.brush.walk_step << '\n'
      << "brush.reference_width = " << s.brush.reference_width << '\n'
      << "transform.cryst_density = " << s.transform.cryst_density << '\n'
      << "transform.blur_sigma = " << s.transform.blur_sigma << '\n'
      << "transform.rib_alpha = " << s.transform.rib_alpha << '\n'
      << "transform.rib_percentile = " << s.transform.rib_percentile << '\n'
      << "transform.p_cryst = " << s.transform.p_cryst << '\n'
      << "transform.p_blur = " << s.transform.p_blur << '\n'
      << "transform.p_rib = " << s.transform.p_rib << '\n'
      << "loss.tau = " << c.loss.tau << '\n'
      << "loss.eps = " << c.loss.eps << '\n'
      << "loss.w_feat = " << c.loss.weights.feat << '\n'
      << "loss.w_global = " << c.loss.weights.global << '\n'
      << "loss.w_local = " << c.loss.weights.local << '\n'
      << "loss.w_dice = " << c.loss.weights.dice << '\n'
      << "metrics.reducer = " << metrics::to_string(c.metrics.reducer) << '\n'
      << "metrics.top_k_fraction = " << c.metrics.top_k_fraction << '\n';
  return out.str();
}

}  // namespace lungsynth::dataio
