#pragma once

#include <vector>

#include "lungsynth/image.hpp"

namespace lungsynth {

/// Percentile of the pixel values with linear interpolation between order
/// statistics (rank q*(n-1)). q is clamped to [0,1].
double percentile(const GrayImage& image, double q);

/// Percentile stretch: clamp((p - v_lo) / (v_hi - v_lo), 0, 1) with v_lo, v_hi
/// the image's lo/hi percentiles. A constant image maps to all zeros.
/// Requires 0 <= lo < hi <= 1.
GrayImage normalize(const GrayImage& image, double lo_percentile = 0.005,
                    double hi_percentile = 0.995);

/// Foreground where pixel < t (strict).
BinaryMask threshold_below(const GrayImage& image, double t);

/// Foreground where pixel >= level.
BinaryMask threshold_at_least(const GrayImage& image, double level);

/// Normalized 1-D Gaussian taps, radius ceil(3*sigma). sigma == 0 gives {1}.
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian with edge replication. Output is clamped to [0,1].
GrayImage gaussian_blur(const GrayImage& image, double sigma);

/// Converts a mask to a 0/1 intensity image.
GrayImage to_image(const BinaryMask& mask);

}  // namespace lungsynth
