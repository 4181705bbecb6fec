#pragma once

// Reference implementations used only by tests. They follow the definitions
// directly and share no code with the library paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "lungsynth/image.hpp"
#include "lungsynth/metrics.hpp"
#include "lungsynth/random.hpp"

namespace oracle {

using lungsynth::BinaryMask;
using lungsynth::GrayImage;

/// Components as sets of pixel indices via explicit-stack flood fill.
inline std::set<std::vector<std::uint32_t>> flood_fill_components(const BinaryMask& m,
                                                                  bool eight) {
  const int w = m.width();
  const int h = m.height();
  std::vector<char> seen(m.pixel_count(), 0);
  std::set<std::vector<std::uint32_t>> out;
  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      if (!m(x0, y0) || seen[m.index(x0, y0)]) continue;
      std::vector<std::uint32_t> comp;
      std::vector<std::pair<int, int>> stack{{x0, y0}};
      seen[m.index(x0, y0)] = 1;
      while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        comp.push_back(static_cast<std::uint32_t>(m.index(x, y)));
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            if (!eight && dx != 0 && dy != 0) continue;
            const int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            if (!m(nx, ny) || seen[m.index(nx, ny)]) continue;
            seen[m.index(nx, ny)] = 1;
            stack.push_back({nx, ny});
          }
        }
      }
      std::sort(comp.begin(), comp.end());
      out.insert(std::move(comp));
    }
  }
  return out;
}

/// Pairwise AUC: correct pairs plus half the ties over P*N.
inline double auc_pairwise(const std::vector<lungsynth::metrics::ScoreSample>& s) {
  double correct = 0.0;
  double pairs = 0.0;
  for (const auto& p : s) {
    if (p.label != 1) continue;
    for (const auto& n : s) {
      if (n.label != 0) continue;
      pairs += 1.0;
      if (p.score > n.score) correct += 1.0;
      else if (p.score == n.score) correct += 0.5;
    }
  }
  return correct / pairs;
}

/// AP by sweeping every distinct score as a threshold (predict positive when
/// score >= threshold), counting TP/FP by full scans.
inline double ap_threshold_sweep(const std::vector<lungsynth::metrics::ScoreSample>& s) {
  std::vector<double> thresholds;
  for (const auto& x : s) thresholds.push_back(x.score);
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  std::size_t total_pos = 0;
  for (const auto& x : s) total_pos += x.label == 1;
  double ap = 0.0;
  double prev_recall = 0.0;
  for (double t : thresholds) {
    std::size_t tp = 0, fp = 0;
    for (const auto& x : s) {
      if (x.score >= t) (x.label == 1 ? tp : fp)++;
    }
    const double recall = static_cast<double>(tp) / static_cast<double>(total_pos);
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return ap;
}

/// Direct (non-separable) 2-D Gaussian, radius ceil(3 sigma), edge replication.
inline GrayImage blur_direct(const GrayImage& img, double sigma) {
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  double norm = 0.0;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) norm += std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
  GrayImage out(img.width(), img.height(), 0.0);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double acc = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int sx = std::clamp(x + dx, 0, img.width() - 1);
          const int sy = std::clamp(y + dy, 0, img.height() - 1);
          acc += std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma)) * img(sx, sy);
        }
      }
      out(x, y) = acc / norm;
    }
  }
  return out;
}

/// Dice of the plain global threshold I < t against `gt`.
inline double single_threshold_dice(const GrayImage& img, const BinaryMask& gt, double t) {
  std::size_t a = 0, b = 0, both = 0;
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const bool p = img[i] < t;
    a += p;
    b += gt[i];
    both += p && gt[i];
  }
  return a + b == 0 ? 1.0 : 2.0 * static_cast<double>(both) / static_cast<double>(a + b);
}

/// Best single-threshold Dice over t in {0, 0.001, ..., 1}.
inline double best_single_threshold_dice(const GrayImage& img, const BinaryMask& gt) {
  double best = 0.0;
  for (int k = 0; k <= 1000; ++k) best = std::max(best, single_threshold_dice(img, gt, k / 1000.0));
  return best;
}

inline GrayImage random_image(int w, int h, lungsynth::RandomStream& rng) {
  GrayImage img(w, h, 0.0);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) img[i] = rng.uniform();
  return img;
}

inline BinaryMask random_mask(int w, int h, double density, lungsynth::RandomStream& rng) {
  BinaryMask m(w, h);
  for (std::size_t i = 0; i < m.pixel_count(); ++i) m.set(i, rng.uniform() < density);
  return m;
}

}  // namespace oracle
