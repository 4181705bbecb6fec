#include "lungsynth/filters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lungsynth {

double percentile(const GrayImage& image, double q) {
  std::vector<double> values(image.pixels().begin(), image.pixels().end());
  if (values.empty()) throw std::invalid_argument("percentile of empty image");
  q = std::clamp(q, 0.0, 1.0);
  const double rank = q * static_cast<double>(values.size() - 1);
  const auto lo_idx = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi_idx = std::min(lo_idx + 1, values.size() - 1);
  std::nth_element(values.begin(), values.begin() + lo_idx, values.end());
  const double lo = values[lo_idx];
  if (hi_idx == lo_idx) return lo;
  const double hi =
      *std::min_element(values.begin() + lo_idx + 1, values.end());
  return lo + (rank - static_cast<double>(lo_idx)) * (hi - lo);
}

GrayImage normalize(const GrayImage& image, double lo_percentile,
                    double hi_percentile) {
  if (!(lo_percentile >= 0.0 && lo_percentile < hi_percentile &&
        hi_percentile <= 1.0)) {
    throw std::invalid_argument("normalize: need 0 <= lo < hi <= 1");
  }
  GrayImage out(image.width(), image.height(), 0.0);
  const double v_lo = percentile(image, lo_percentile);
  const double v_hi = percentile(image, hi_percentile);
  if (!(v_hi > v_lo)) return out;
  const double scale = 1.0 / (v_hi - v_lo);
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    out[i] = std::clamp((image[i] - v_lo) * scale, 0.0, 1.0);
  }
  return out;
}

BinaryMask threshold_below(const GrayImage& image, double t) {
  BinaryMask out(image.width(), image.height());
  for (std::size_t i = 0; i < image.pixel_count(); ++i) out.set(i, image[i] < t);
  return out;
}

BinaryMask threshold_at_least(const GrayImage& image, double level) {
  BinaryMask out(image.width(), image.height());
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    out.set(i, image[i] >= level);
  }
  return out;
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("gaussian_kernel: sigma must be >= 0");
  }
  if (sigma == 0.0) return {1.0};
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * static_cast<std::size_t>(radius) + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
    taps[static_cast<std::size_t>(i + radius)] = v;
    total += v;
  }
  for (double& v : taps) v /= total;
  return taps;
}

GrayImage gaussian_blur(const GrayImage& image, double sigma) {
  const std::vector<double> taps = gaussian_kernel(sigma);
  if (taps.size() == 1) return image;
  const int radius = static_cast<int>(taps.size() / 2);
  const int w = image.width();
  const int h = image.height();

  GrayImage horizontal(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int sx = std::clamp(x + k, 0, w - 1);
        acc += taps[static_cast<std::size_t>(k + radius)] * image(sx, y);
      }
      horizontal(x, y) = acc;
    }
  }

  GrayImage out(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int sy = std::clamp(y + k, 0, h - 1);
        acc += taps[static_cast<std::size_t>(k + radius)] * horizontal(x, sy);
      }
      out(x, y) = std::clamp(acc, 0.0, 1.0);
    }
  }
  return out;
}

GrayImage to_image(const BinaryMask& mask) {
  GrayImage out(mask.width(), mask.height(), 0.0);
  for (std::size_t i = 0; i < mask.pixel_count(); ++i) out[i] = mask[i] ? 1.0 : 0.0;
  return out;
}

}  // namespace lungsynth
