#include "lungsynth/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lungsynth/errors.hpp"
#include "lungsynth/metrics.hpp"

namespace lungsynth::losses {

double feature_alignment_loss(std::span<const double> f_syn,
                              std::span<const double> f_norm) {
  if (f_syn.empty() || f_syn.size() != f_norm.size()) {
    throw std::invalid_argument("feature vectors must be nonempty and equal length");
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < f_syn.size(); ++i) {
    if (!std::isfinite(f_syn[i]) || !std::isfinite(f_norm[i])) {
      throw std::invalid_argument("feature vectors must be finite");
    }
    dot += f_syn[i] * f_norm[i];
    na += f_syn[i] * f_syn[i];
    nb += f_norm[i] * f_norm[i];
  }
  if (na == 0.0 || nb == 0.0) throw ZeroVector();
  const double cosine = std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
  return 1.0 - cosine;
}

double global_recon_loss(const GrayImage& i_norm, const GrayImage& i_hat) {
  require_same_size("global_recon_loss", i_norm.size(), i_hat.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < i_norm.pixel_count(); ++i) {
    const double d = i_norm[i] - i_hat[i];
    sum += d * d;
  }
  return sum / static_cast<double>(i_norm.pixel_count());
}

double local_recon_loss(const GrayImage& i_norm, const GrayImage& i_hat,
                        const BinaryMask& mask, double eps) {
  require_same_size("local_recon_loss", i_norm.size(), i_hat.size());
  require_same_size("local_recon_loss", i_norm.size(), mask.size());
  if (!(eps > 0.0)) throw std::invalid_argument("local_recon_loss: eps must be > 0");
  double sum = 0.0;
  double area = 0.0;
  for (std::size_t i = 0; i < i_norm.pixel_count(); ++i) {
    if (!mask[i]) continue;
    const double d = i_norm[i] - i_hat[i];
    sum += d * d;
    area += 1.0;
  }
  return sum / (area + eps);
}

std::vector<double> global_recon_gradient(const GrayImage& i_norm,
                                          const GrayImage& i_hat) {
  require_same_size("global_recon_gradient", i_norm.size(), i_hat.size());
  std::vector<double> g(i_norm.pixel_count());
  const double n = static_cast<double>(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = 2.0 * (i_hat[i] - i_norm[i]) / n;
  return g;
}

std::vector<double> local_recon_gradient(const GrayImage& i_norm,
                                         const GrayImage& i_hat,
                                         const BinaryMask& mask, double eps) {
  require_same_size("local_recon_gradient", i_norm.size(), i_hat.size());
  require_same_size("local_recon_gradient", i_norm.size(), mask.size());
  const double denom = static_cast<double>(mask.count()) + eps;
  std::vector<double> g(i_norm.pixel_count(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mask[i]) g[i] = 2.0 * (i_hat[i] - i_norm[i]) / denom;
  }
  return g;
}

BinaryMask binarize_error(const GrayImage& i_syn, const GrayImage& i_hat,
                          double tau) {
  require_same_size("binarize_error", i_syn.size(), i_hat.size());
  if (!(tau > 0.0)) throw std::invalid_argument("binarize_error: tau must be > 0");
  BinaryMask out(i_syn.width(), i_syn.height());
  for (std::size_t i = 0; i < i_syn.pixel_count(); ++i) {
    const double d = i_syn[i] - i_hat[i];
    out.set(i, d * d >= tau);
  }
  return out;
}

double dice_coefficient(const BinaryMask& pred, const BinaryMask& gt) {
  return metrics::dice_score(pred, gt);
}

double dice_loss(const BinaryMask& pred, const BinaryMask& gt) {
  return 1.0 - dice_coefficient(pred, gt);
}

GrayImage anomaly_map(const GrayImage& i, const GrayImage& i_hat) {
  require_same_size("anomaly_map", i.size(), i_hat.size());
  GrayImage out(i.width(), i.height(), 0.0);
  for (std::size_t k = 0; k < i.pixel_count(); ++k) out[k] = std::abs(i[k] - i_hat[k]);
  return out;
}

BinaryMask threshold_anomaly_map(const GrayImage& map, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("threshold_anomaly_map: tau must be > 0");
  // A >= sqrt(tau) evaluated as A^2 >= tau: map values are non-negative, and
  // squaring avoids the rounding of sqrt so the rule agrees bit for bit with
  // binarize_error.
  BinaryMask out(map.width(), map.height());
  for (std::size_t i = 0; i < map.pixel_count(); ++i) out.set(i, map[i] * map[i] >= tau);
  return out;
}

LossReport total_loss(const LossInputs& in, const Weights& weights) {
  LossReport r;
  if (in.f_syn && in.f_norm) r.feat = feature_alignment_loss(*in.f_syn, *in.f_norm);
  r.global = global_recon_loss(in.i_norm, in.i_hat);
  r.local = local_recon_loss(in.i_norm, in.i_hat, in.m_anomaly, in.eps);
  const BinaryMask predicted = binarize_error(in.i_syn, in.i_hat, in.tau);
  r.dice_coefficient = dice_coefficient(predicted, in.m_anomaly);
  r.dice = 1.0 - r.dice_coefficient;
  r.total = weights.feat * r.feat + weights.global * r.global +
            weights.local * r.local + weights.dice * r.dice;
  return r;
}

}  // namespace lungsynth::losses
