#include "lungsynth/components.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>

namespace lungsynth {

namespace {

class DisjointSet {
 public:
  std::uint32_t make() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return parent_.back();
  }

  std::uint32_t find(std::uint32_t x) {
    std::uint32_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::uint32_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller id wins so roots stay stable under raster order.
    if (a < b) parent_[b] = a;
    else parent_[a] = b;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

constexpr std::uint32_t kBackground = 0xFFFFFFFFu;

}  // namespace

Region describe_region(ImageSize size, std::vector<std::uint32_t> pixels,
                       int label) {
  Region r;
  r.label = label;
  std::sort(pixels.begin(), pixels.end());
  r.pixels = std::move(pixels);
  r.area = r.pixels.size();
  if (r.area == 0) return r;

  const int w = size.width;
  const int h = size.height;
  const auto uw = static_cast<std::uint32_t>(w);

  r.bbox = {w, h, -1, -1};
  double sx = 0.0;
  double sy = 0.0;
  for (std::uint32_t p : r.pixels) {
    const int x = static_cast<int>(p % uw);
    const int y = static_cast<int>(p / uw);
    r.bbox.min_x = std::min(r.bbox.min_x, x);
    r.bbox.min_y = std::min(r.bbox.min_y, y);
    r.bbox.max_x = std::max(r.bbox.max_x, x);
    r.bbox.max_y = std::max(r.bbox.max_y, y);
    sx += x;
    sy += y;
  }

  // Membership over the bbox plus a one-pixel margin.
  const int bw = r.bbox.width() + 2;
  const int bh = r.bbox.height() + 2;
  std::vector<std::uint8_t> member(static_cast<std::size_t>(bw) * static_cast<std::size_t>(bh), 0);
  auto local = [&](int x, int y) {
    return static_cast<std::size_t>(y - r.bbox.min_y + 1) * static_cast<std::size_t>(bw) +
           static_cast<std::size_t>(x - r.bbox.min_x + 1);
  };
  for (std::uint32_t p : r.pixels) {
    member[local(static_cast<int>(p % uw), static_cast<int>(p / uw))] = 1;
  }

  for (std::uint32_t p : r.pixels) {
    const int x = static_cast<int>(p % uw);
    const int y = static_cast<int>(p / uw);
    const bool on_border = x == 0 || y == 0 || x == w - 1 || y == h - 1;
    if (on_border) ++r.border_contact;
    const std::size_t l = local(x, y);
    const bool boundary = on_border || !member[l - 1] || !member[l + 1] ||
                          !member[l - static_cast<std::size_t>(bw)] ||
                          !member[l + static_cast<std::size_t>(bw)];
    if (boundary) ++r.perimeter;
  }
  r.centroid = {sx / static_cast<double>(r.area),
                sy / static_cast<double>(r.area)};
  const double per = static_cast<double>(r.perimeter);
  r.circularity = 4.0 * std::numbers::pi * static_cast<double>(r.area) / (per * per);
  return r;
}

std::vector<Region> connected_components(const BinaryMask& mask,
                                         Connectivity connectivity) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<std::uint32_t> provisional(mask.pixel_count(), kBackground);
  DisjointSet sets;

  const bool eight = connectivity == Connectivity::Eight;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = mask.index(x, y);
      if (!mask[i]) continue;

      std::uint32_t neighbours[4];
      int n = 0;
      auto visit = [&](int nx, int ny) {
        if (nx < 0 || ny < 0 || nx >= w) return;
        const std::uint32_t l = provisional[mask.index(nx, ny)];
        if (l != kBackground) neighbours[n++] = l;
      };
      visit(x - 1, y);
      visit(x, y - 1);
      if (eight) {
        visit(x - 1, y - 1);
        visit(x + 1, y - 1);
      }

      if (n == 0) {
        provisional[i] = sets.make();
      } else {
        std::uint32_t label = neighbours[0];
        for (int k = 1; k < n; ++k) label = std::min(label, neighbours[k]);
        provisional[i] = label;
        for (int k = 0; k < n; ++k) sets.unite(label, neighbours[k]);
      }
    }
  }

  // Second pass: compact roots in order of first appearance.
  std::vector<std::vector<std::uint32_t>> members;
  std::vector<std::uint32_t> root_to_region;
  for (std::size_t i = 0; i < provisional.size(); ++i) {
    if (provisional[i] == kBackground) continue;
    const std::uint32_t root = sets.find(provisional[i]);
    if (root >= root_to_region.size()) {
      root_to_region.resize(root + 1, kBackground);
    }
    if (root_to_region[root] == kBackground) {
      root_to_region[root] = static_cast<std::uint32_t>(members.size());
      members.emplace_back();
    }
    members[root_to_region[root]].push_back(static_cast<std::uint32_t>(i));
  }

  std::vector<Region> regions;
  regions.reserve(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    regions.push_back(
        describe_region(mask.size(), std::move(members[k]), static_cast<int>(k + 1)));
  }
  return regions;
}

BinaryMask region_mask(const Region& region, ImageSize size) {
  BinaryMask out(size.width, size.height);
  for (std::uint32_t p : region.pixels) out.set(p, true);
  return out;
}

BinaryMask fill_holes(const BinaryMask& mask) {
  BinaryMask background(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.pixel_count(); ++i) background.set(i, !mask[i]);
  BinaryMask out = mask;
  for (const Region& r : connected_components(background, Connectivity::Four)) {
    if (r.border_contact == 0) {
      for (std::uint32_t p : r.pixels) out.set(p, true);
    }
  }
  return out;
}

}  // namespace lungsynth
