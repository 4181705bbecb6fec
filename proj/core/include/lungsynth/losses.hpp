#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lungsynth/image.hpp"

namespace lungsynth::losses {

/// 1 - cos(a, b), in [0,2]. Throws ZeroVector, std::invalid_argument on
/// length mismatch or non-finite entries.
double feature_alignment_loss(std::span<const double> f_syn,
                              std::span<const double> f_norm);

/// Mean squared pixel error over the whole image.
double global_recon_loss(const GrayImage& i_norm, const GrayImage& i_hat);

/// Masked squared error divided by (mask pixel count + eps).
double local_recon_loss(const GrayImage& i_norm, const GrayImage& i_hat,
                        const BinaryMask& mask, double eps = 1e-8);

/// d/d(i_hat) of global_recon_loss: 2 (i_hat - i_norm) / N.
std::vector<double> global_recon_gradient(const GrayImage& i_norm,
                                          const GrayImage& i_hat);

/// d/d(i_hat) of local_recon_loss: 2 (i_hat - i_norm) M / (sum M + eps).
std::vector<double> local_recon_gradient(const GrayImage& i_norm,
                                         const GrayImage& i_hat,
                                         const BinaryMask& mask, double eps = 1e-8);

/// Predicted anomaly mask: (i_syn - i_hat)^2 >= tau.
BinaryMask binarize_error(const GrayImage& i_syn, const GrayImage& i_hat,
                          double tau);

/// Dice coefficient between the predicted and target masks.
double dice_coefficient(const BinaryMask& pred, const BinaryMask& gt);

/// 1 - dice_coefficient; 0 when both masks are empty.
double dice_loss(const BinaryMask& pred, const BinaryMask& gt);

/// Inference residual |i - i_hat|.
GrayImage anomaly_map(const GrayImage& i, const GrayImage& i_hat);

/// Binary mask from an anomaly map under the training rule: A >= sqrt(tau).
BinaryMask threshold_anomaly_map(const GrayImage& map, double tau);

struct Weights {
  double feat = 1.0;
  double global = 1.0;
  double local = 1.0;
  double dice = 1.0;
};

struct LossReport {
  double feat = 0.0;
  double global = 0.0;
  double local = 0.0;
  double dice = 0.0;  // 1 - Dice coefficient
  double dice_coefficient = 1.0;
  double total = 0.0;
};

struct LossInputs {
  const GrayImage& i_norm;
  const GrayImage& i_syn;
  const GrayImage& i_hat;
  const BinaryMask& m_anomaly;
  // Encoder features; the feature term is 0 when either is absent.
  std::optional<std::span<const double>> f_syn;
  std::optional<std::span<const double>> f_norm;
  double tau = 0.01;
  double eps = 1e-8;
};

/// Evaluates every term; total = w_feat*feat + w_global*global +
/// w_local*local + w_dice*dice, summed in that order.
LossReport total_loss(const LossInputs& inputs, const Weights& weights = {});

}  // namespace lungsynth::losses
