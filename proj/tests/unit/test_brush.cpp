#include <doctest.h>

#include <cmath>
#include <set>

#include "lungsynth/brush.hpp"
#include "lungsynth/errors.hpp"
#include "lungsynth/phantom.hpp"

using namespace lungsynth;
using namespace lungsynth::brush;

namespace {

BinaryMask lung_disc(int size) {
  return phantom::ellipse_mask({size, size}, {size * 0.5, size * 0.5, size * 0.3, size * 0.4});
}

}  // namespace

TEST_CASE("sample_anchors") {
  SUBCASE("single pixel with replacement") {
    BinaryMask m(10, 10);
    m.set(3, 7, true);
    RandomStream rng(1, 0);
    const auto a = sample_anchors(m, 3, rng);
    REQUIRE(a.size() == 3);
    for (const Point& p : a) CHECK(p == Point{3, 7});
  }
  SUBCASE("deterministic and distinct without replacement") {
    const BinaryMask m = lung_disc(40);
    RandomStream r1(5, 2), r2(5, 2);
    const auto a = sample_anchors(m, 50, r1);
    CHECK(a == sample_anchors(m, 50, r2));
    std::set<std::pair<double, double>> unique;
    for (const Point& p : a) {
      CHECK(m(static_cast<int>(p.x), static_cast<int>(p.y)));
      unique.insert({p.x, p.y});
    }
    CHECK(unique.size() == 50);
  }
  SUBCASE("uniform over a half-plane") {
    BinaryMask m(64, 64);
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 32; ++x) m.set(x, y, true);
    RandomStream rng(9, 9);
    const auto a = sample_anchors(m, 1000, rng);
    double mx = 0.0, my = 0.0;
    for (const Point& p : a) {
      mx += p.x;
      my += p.y;
    }
    mx /= 1000.0;
    my /= 1000.0;
    // Discrete uniform on 0..n-1: sd = sqrt((n^2 - 1) / 12).
    const double sx = std::sqrt((32.0 * 32.0 - 1.0) / 12.0) / std::sqrt(1000.0);
    const double sy = std::sqrt((64.0 * 64.0 - 1.0) / 12.0) / std::sqrt(1000.0);
    CHECK(std::abs(mx - 15.5) < 3.0 * sx);
    CHECK(std::abs(my - 31.5) < 3.0 * sy);
  }
  SUBCASE("empty lung") {
    RandomStream rng(1, 1);
    CHECK_THROWS_AS(sample_anchors(BinaryMask(4, 4), 2, rng), EmptyLungMask);
  }
}

TEST_CASE("stamp") {
  SUBCASE("zero opacity leaves the layer unchanged") {
    GrayImage layer(21, 21, 0.1);
    const GrayImage before = layer;
    stamp(layer, {10, 10}, 5, 30, 0.0, 0.5);
    CHECK(layer == before);
  }
  SUBCASE("saturating addition") {
    GrayImage layer(21, 21, 0.0);
    stamp(layer, {10, 10}, 4, 0, 0.6, 1.0);
    stamp(layer, {10, 10}, 4, 0, 0.6, 1.0);
    CHECK(layer(10, 10) == 1.0);
    for (double v : layer.pixels()) CHECK(v <= 1.0);
  }
  SUBCASE("raised-cosine profile") {
    GrayImage layer(21, 21, 0.0);
    stamp(layer, {10, 10}, 5, 0, 0.5, 1.0);
    CHECK(layer(10, 10) == doctest::Approx(0.5));
    CHECK(layer(15, 10) == 0.0);
    CHECK(layer(10, 5) == 0.0);
    // Halfway out: 0.5 * 0.5 * (1 + cos(pi/2)) = 0.25.
    GrayImage half(41, 41, 0.0);
    stamp(half, {20, 20}, 10, 0, 0.5, 1.0);
    CHECK(half(25, 20) == doctest::Approx(0.25));
  }
  SUBCASE("orientation follows the angle") {
    GrayImage flat(41, 41, 0.0), upright(41, 41, 0.0);
    stamp(flat, {20, 20}, 10, 0, 1.0, 0.3);
    stamp(upright, {20, 20}, 10, 90, 1.0, 0.3);
    CHECK(flat(26, 20) > 0.0);
    CHECK(flat(20, 26) == 0.0);
    CHECK(upright(20, 26) > 0.0);
    CHECK(upright(26, 20) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("clipped at the image edge") {
    GrayImage layer(8, 8, 0.0);
    CHECK_NOTHROW(stamp(layer, {0, 0}, 6, 45, 0.7, 0.5));
    CHECK(layer(0, 0) == doctest::Approx(0.7));
  }
}

TEST_CASE("paint_base") {
  const BinaryMask lung = lung_disc(96);

  SUBCASE("single-stamp configuration") {
    Config c;
    c.anchor_count = {1, 1};
    c.stamps_per_anchor = {1, 1};
    c.opacity_jitter = 0.0;
    c.size_jitter = 0.0;
    RandomStream rng(3, 0);
    std::vector<Point> anchors;
    std::vector<StampRecord> trace;
    const GrayImage layer = paint_base(lung, c, rng, &anchors, &trace);
    REQUIRE(anchors.size() == 1);
    REQUIRE(trace.size() == 1);
    CHECK(layer(static_cast<int>(anchors[0].x), static_cast<int>(anchors[0].y)) ==
          doctest::Approx(c.opacity_base));
    double peak = 0.0;
    for (double v : layer.pixels()) peak = std::max(peak, v);
    CHECK(peak == doctest::Approx(c.opacity_base));
  }

  SUBCASE("determinism and seed sensitivity") {
    RandomStream a(11, 4), b(11, 4);
    CHECK(paint_base(lung, {}, a) == paint_base(lung, {}, b));
    int differing = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      RandomStream x(100 + s, 0), y(200 + s, 0);
      differing += paint_base(lung, {}, x) != paint_base(lung, {}, y);
    }
    CHECK(differing == 20);
  }

  SUBCASE("support, range and jitter bounds over random configs") {
    RandomStream meta(77, 0);
    for (int trial = 0; trial < 40; ++trial) {
      Config c;
      c.anchor_count = {1, static_cast<int>(meta.uniform_int(1, 6))};
      c.stamps_per_anchor = {1, static_cast<int>(meta.uniform_int(1, 80))};
      c.base_radius = meta.uniform(2.0, 12.0);
      c.size_jitter = meta.uniform(0.0, 0.9);
      c.angle_jitter = meta.uniform(0.0, 180.0);
      c.opacity_base = meta.uniform(0.05, 1.0);
      c.opacity_jitter = meta.uniform(0.0, 1.0);
      c.stamp_aspect = meta.uniform(0.1, 1.0);
      RandomStream rng(static_cast<std::uint64_t>(trial), 1);
      std::vector<StampRecord> trace;
      const GrayImage layer = paint_base(lung, c, rng, nullptr, &trace);
      for (std::size_t i = 0; i < layer.pixel_count(); ++i) {
        CHECK(layer[i] >= 0.0);
        CHECK(layer[i] <= 1.0);
        if (!lung[i]) CHECK(layer[i] == 0.0);
      }
      const double r0 = c.base_radius * c.scale_for(lung.width());
      for (const StampRecord& s : trace) {
        CHECK(s.radius >= std::max(1.0, r0 * (1.0 - c.size_jitter)) - 1e-12);
        CHECK(s.radius <= std::max(1.0, r0 * (1.0 + c.size_jitter)) + 1e-12);
        CHECK(s.opacity >= c.opacity_base * (1.0 - c.opacity_jitter) - 1e-12);
        CHECK(s.opacity <= std::min(1.0, c.opacity_base * (1.0 + c.opacity_jitter)) + 1e-12);
        CHECK(std::abs(s.heading_change) <= c.angle_jitter);
      }
    }
  }

  SUBCASE("lengths scale with width") {
    Config c;
    CHECK(c.scale_for(512) == 2.0);
    c.anchor_count = {1, 1};
    c.stamps_per_anchor = {1, 1};
    c.size_jitter = 0.0;
    RandomStream rng(1, 0);
    std::vector<StampRecord> trace;
    paint_base(lung_disc(512), c, rng, nullptr, &trace);
    REQUIRE(trace.size() == 1);
    CHECK(trace[0].radius == doctest::Approx(12.0));
  }

  SUBCASE("empty lung") {
    RandomStream rng(1, 0);
    CHECK_THROWS_AS(paint_base(BinaryMask(16, 16), {}, rng), EmptyLungMask);
  }
}
