#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lungsynth/image.hpp"
#include "lungsynth/random.hpp"

namespace lungsynth::transforms {

/// Stages always run in this order when enabled.
enum class Stage { Cryst, Blur, Rib };

const char* to_string(Stage stage);

struct Config {
  double cryst_density = 1.5;   // seed points per 1000 px of the support bbox
  double blur_sigma = 2.0;      // pixels
  double rib_alpha = 0.8;
  double rib_percentile = 0.85;
  double p_cryst = 0.5;         // per-stage inclusion probabilities
  double p_blur = 0.9;
  double p_rib = 1.0;

  void validate() const;
};

/// Voronoi quantization: every support pixel takes the mean layer value of
/// the support pixels sharing its nearest seed. Seeds are scattered uniformly
/// over the support's bounding box, max(1, round(density * bbox_area / 1000))
/// of them. Off-support pixels stay zero.
GrayImage crystallize(const GrayImage& layer, double density, RandomStream& rng,
                      std::vector<Point>* seeds = nullptr);

/// Same quantization with explicit seeds. Nearest-seed ties go to the lower
/// index.
GrayImage crystallize_with_seeds(const GrayImage& layer,
                                 std::span<const Point> seeds);

GrayImage blur_transform(const GrayImage& layer, double sigma);

/// R = clamp((I - v_p) / (1 - v_p), 0, 1), v_p the percentile intensity.
GrayImage rib_intensity_map(const GrayImage& image, double percentile);

/// layer * (1 - alpha * R)
GrayImage rib_scale(const GrayImage& layer, const GrayImage& rib, double alpha);

struct Composition {
  GrayImage layer;                                       // A_final
  std::vector<Stage> stages;                             // applied, in order
  std::vector<std::pair<Stage, GrayImage>> intermediates;  // output of each stage
};

/// Applies cryst -> blur -> rib, each included with its configured
/// probability. All three inclusion draws happen before any stage runs.
Composition compose(const GrayImage& layer, const GrayImage& image,
                    const Config& config, RandomStream& rng);

}  // namespace lungsynth::transforms
