#include "lungsynth/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lungsynth/errors.hpp"
#include "lungsynth/filters.hpp"

namespace lungsynth::transforms {

const char* to_string(Stage stage) {
  switch (stage) {
    case Stage::Cryst: return "cryst";
    case Stage::Blur: return "blur";
    case Stage::Rib: return "rib";
  }
  return "unknown";
}

void Config::validate() const {
  if (!(cryst_density > 0.0)) throw ConfigError("transform.cryst_density must be > 0");
  if (!(blur_sigma >= 0.0)) throw ConfigError("transform.blur_sigma must be >= 0");
  if (!(rib_alpha >= 0.0 && rib_alpha <= 1.0)) {
    throw ConfigError("transform.rib_alpha must lie in [0,1]");
  }
  if (!(rib_percentile > 0.0 && rib_percentile < 1.0)) {
    throw ConfigError("transform.rib_percentile must lie in (0,1)");
  }
  for (double p : {p_cryst, p_blur, p_rib}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError("transform stage probabilities must lie in [0,1]");
    }
  }
}

namespace {

struct Support {
  std::vector<std::uint32_t> pixels;
  int min_x = 0, min_y = 0, max_x = -1, max_y = -1;
};

Support support_of(const GrayImage& layer) {
  Support s;
  s.min_x = layer.width();
  s.min_y = layer.height();
  for (int y = 0; y < layer.height(); ++y) {
    for (int x = 0; x < layer.width(); ++x) {
      if (layer(x, y) <= 0.0) continue;
      s.pixels.push_back(static_cast<std::uint32_t>(layer.index(x, y)));
      s.min_x = std::min(s.min_x, x);
      s.min_y = std::min(s.min_y, y);
      s.max_x = std::max(s.max_x, x);
      s.max_y = std::max(s.max_y, y);
    }
  }
  return s;
}

}  // namespace

GrayImage crystallize_with_seeds(const GrayImage& layer,
                                 std::span<const Point> seeds) {
  const Support support = support_of(layer);
  if (support.pixels.empty() || seeds.empty()) return layer;

  const auto w = static_cast<std::uint32_t>(layer.width());
  std::vector<std::size_t> owner(support.pixels.size());
  std::vector<double> sum(seeds.size(), 0.0);
  std::vector<std::size_t> count(seeds.size(), 0);
  for (std::size_t i = 0; i < support.pixels.size(); ++i) {
    const double x = support.pixels[i] % w;
    const double y = support.pixels[i] / w;
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      const double dx = x - seeds[k].x;
      const double dy = y - seeds[k].y;
      const double d = dx * dx + dy * dy;
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    owner[i] = best;
    sum[best] += layer[support.pixels[i]];
    ++count[best];
  }

  GrayImage out(layer.width(), layer.height(), 0.0);
  for (std::size_t i = 0; i < support.pixels.size(); ++i) {
    const std::size_t k = owner[i];
    out[support.pixels[i]] = std::clamp(sum[k] / static_cast<double>(count[k]), 0.0, 1.0);
  }
  return out;
}

GrayImage crystallize(const GrayImage& layer, double density, RandomStream& rng,
                      std::vector<Point>* seeds_out) {
  if (!(density > 0.0)) throw std::invalid_argument("crystallize: density must be > 0");
  const Support support = support_of(layer);
  if (support.pixels.empty()) {
    if (seeds_out) seeds_out->clear();
    return layer;
  }
  const double bbox_area = static_cast<double>(support.max_x - support.min_x + 1) *
                           static_cast<double>(support.max_y - support.min_y + 1);
  const auto n = static_cast<std::size_t>(
      std::max<long>(1, std::lround(density * bbox_area / 1000.0)));
  std::vector<Point> seeds;
  seeds.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = rng.uniform(support.min_x - 0.5, support.max_x + 0.5);
    const double y = rng.uniform(support.min_y - 0.5, support.max_y + 0.5);
    seeds.push_back({x, y});
  }
  GrayImage out = crystallize_with_seeds(layer, seeds);
  if (seeds_out) *seeds_out = std::move(seeds);
  return out;
}

GrayImage blur_transform(const GrayImage& layer, double sigma) {
  return gaussian_blur(layer, sigma);
}

GrayImage rib_intensity_map(const GrayImage& image, double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("rib_intensity_map: percentile must lie in (0,1)");
  }
  const double v_p = percentile(image, q);
  GrayImage out(image.width(), image.height(), 0.0);
  if (!(v_p < 1.0)) return out;
  const double scale = 1.0 / (1.0 - v_p);
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    out[i] = std::clamp((image[i] - v_p) * scale, 0.0, 1.0);
  }
  return out;
}

GrayImage rib_scale(const GrayImage& layer, const GrayImage& rib, double alpha) {
  require_same_size("rib_scale", layer.size(), rib.size());
  GrayImage out(layer.width(), layer.height(), 0.0);
  for (std::size_t i = 0; i < layer.pixel_count(); ++i) {
    out[i] = layer[i] * (1.0 - alpha * rib[i]);
  }
  return out;
}

Composition compose(const GrayImage& layer, const GrayImage& image,
                    const Config& config, RandomStream& rng) {
  config.validate();
  require_same_size("compose", layer.size(), image.size());
  const bool use_cryst = rng.bernoulli(config.p_cryst);
  const bool use_blur = rng.bernoulli(config.p_blur);
  const bool use_rib = rng.bernoulli(config.p_rib);

  Composition result{layer, {}, {}};
  if (use_cryst) {
    result.layer = crystallize(result.layer, config.cryst_density, rng);
    result.stages.push_back(Stage::Cryst);
    result.intermediates.emplace_back(Stage::Cryst, result.layer);
  }
  if (use_blur) {
    result.layer = blur_transform(result.layer, config.blur_sigma);
    result.stages.push_back(Stage::Blur);
    result.intermediates.emplace_back(Stage::Blur, result.layer);
  }
  if (use_rib) {
    result.layer = rib_scale(result.layer,
                             rib_intensity_map(image, config.rib_percentile),
                             config.rib_alpha);
    result.stages.push_back(Stage::Rib);
    result.intermediates.emplace_back(Stage::Rib, result.layer);
  }
  return result;
}

}  // namespace lungsynth::transforms
