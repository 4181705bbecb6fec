#pragma once

#include <cstdint>
#include <vector>

#include "lungsynth/image.hpp"

namespace lungsynth {

enum class Connectivity { Four = 4, Eight = 8 };

struct BoundingBox {
  int min_x = 0;
  int min_y = 0;
  int max_x = 0;
  int max_y = 0;

  int width() const { return max_x - min_x + 1; }
  int height() const { return max_y - min_y + 1; }
  bool operator==(const BoundingBox&) const = default;
};

/// One connected component with the shape statistics used by the lung
/// candidate rules.
///
/// perimeter counts boundary pixels: foreground pixels with at least one
/// 4-neighbour that is background or outside the image. border_contact counts
/// pixels lying on the outermost image row/column, so it never exceeds the
/// perimeter.
struct Region {
  int label = 0;  // 1-based, raster order of each component's first pixel
  std::size_t area = 0;
  BoundingBox bbox;
  Point centroid;
  std::size_t perimeter = 0;
  std::size_t border_contact = 0;
  double circularity = 0.0;  // 4*pi*area / perimeter^2
  std::vector<std::uint32_t> pixels;  // row-major indices, ascending

  double border_fraction() const {
    return perimeter == 0 ? 0.0
                          : static_cast<double>(border_contact) /
                                static_cast<double>(perimeter);
  }
};

/// Labels the foreground of `mask`. Regions come back ordered by label.
std::vector<Region> connected_components(
    const BinaryMask& mask, Connectivity connectivity = Connectivity::Eight);

/// Region statistics for an arbitrary pixel set (need not be connected).
Region describe_region(ImageSize size, std::vector<std::uint32_t> pixels,
                       int label = 0);

/// Paints the region's pixels into a mask of the given size.
BinaryMask region_mask(const Region& region, ImageSize size);

/// Sets background pixels that are not 4-connected to the image border.
BinaryMask fill_holes(const BinaryMask& mask);

}  // namespace lungsynth
