#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>

#include "lungsynth/brush.hpp"
#include "lungsynth/dataset.hpp"
#include "lungsynth/errors.hpp"
#include "lungsynth/filters.hpp"
#include "lungsynth/image_io.hpp"
#include "lungsynth/pbtseg.hpp"
#include "lungsynth/phantom.hpp"
#include "lungsynth/synth.hpp"

using namespace lungsynth;
namespace fs = std::filesystem;

namespace {

struct Scene {
  GrayImage i_norm;
  pbtseg::LungMasks lungs;
};

Scene phantom_scene(std::uint64_t seed, int size = 256) {
  RandomStream rng(seed, 0);
  const phantom::Phantom ph = phantom::two_ellipse(size, rng);
  Scene s;
  s.i_norm = normalize(ph.image);
  s.lungs = pbtseg::segment_lungs(s.i_norm);
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lungsynth_synth_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_phantoms(const fs::path& dir, int count, std::uint64_t seed) {
  RandomStream rng(seed, 0);
  for (int i = 0; i < count; ++i) {
    const phantom::Phantom ph = phantom::two_ellipse(128, rng);
    io::save_image(dir / ("p" + std::to_string(i) + ".png"), ph.image, io::BitDepth::Sixteen);
  }
}

}  // namespace

TEST_CASE("synthesize sub-threshold single stamp") {
  const Scene s = phantom_scene(1);
  synth::Config c;
  c.transform.p_cryst = c.transform.p_blur = c.transform.p_rib = 0.0;
  c.brush.anchor_count = {1, 1};
  c.brush.stamps_per_anchor = {1, 1};
  c.brush.opacity_base = 0.04;
  c.brush.opacity_jitter = 0.0;
  const synth::Triplet t = synth::synthesize(s.i_norm, s.lungs, c, 0);
  CHECK_FALSE(t.m_anomaly.any());
  REQUIRE(t.provenance.stamps.size() == 1);
  const auto& st = t.provenance.stamps[0];
  for (int y = 0; y < s.i_norm.height(); ++y)
    for (int x = 0; x < s.i_norm.width(); ++x) {
      if (t.i_syn(x, y) != t.i_norm(x, y)) {
        CHECK(std::hypot(x - st.center.x, y - st.center.y) < st.radius);
      }
    }
  CHECK(t.i_syn != t.i_norm);
}

TEST_CASE("synthesize determinism") {
  const Scene s = phantom_scene(2);
  const synth::Config c;
  const synth::Triplet a = synth::synthesize(s.i_norm, s.lungs, c, 5);
  const synth::Triplet b = synth::synthesize(s.i_norm, s.lungs, c, 5);
  CHECK(a.i_syn == b.i_syn);
  CHECK(a.m_anomaly == b.m_anomaly);
  CHECK(a.a_final == b.a_final);
  CHECK(a.provenance.stages == b.provenance.stages);
  const synth::Triplet other = synth::synthesize(s.i_norm, s.lungs, c, 6);
  CHECK(other.i_syn != a.i_syn);
}

TEST_CASE("synthesize faithfulness against recorded provenance") {
  const Scene s = phantom_scene(3);
  synth::Config c;
  for (std::uint64_t id = 0; id < 10; ++id) {
    const synth::Triplet t = synth::synthesize(s.i_norm, s.lungs, c, id);
    const BinaryMask& lung = s.lungs.combined;
    CHECK(t.m_anomaly.any());
    CHECK_FALSE(mask_difference(t.m_anomaly, lung).any());

    // Replay the recorded stamps into a fresh layer.
    GrayImage base(lung.width(), lung.height(), 0.0);
    for (const auto& st : t.provenance.stamps) {
      brush::stamp(base, st.center, st.radius, st.angle, st.opacity, c.brush.stamp_aspect);
    }
    for (std::size_t i = 0; i < base.pixel_count(); ++i)
      if (!lung[i]) base[i] = 0.0;
    CHECK(base == t.a_base);

    // Replay the deterministic stages from their inputs.
    REQUIRE(t.intermediates.size() == t.provenance.stages.size());
    GrayImage prev = t.a_base;
    for (const auto& [stage, layer] : t.intermediates) {
      if (stage == transforms::Stage::Blur) {
        CHECK(layer == gaussian_blur(prev, c.transform.blur_sigma));
      } else if (stage == transforms::Stage::Rib) {
        CHECK(layer == transforms::rib_scale(
                           prev, transforms::rib_intensity_map(s.i_norm, c.transform.rib_percentile),
                           c.transform.rib_alpha));
      }
      prev = layer;
    }
    GrayImage clipped = prev;
    for (std::size_t i = 0; i < clipped.pixel_count(); ++i)
      if (!lung[i]) clipped[i] = 0.0;
    CHECK(clipped == t.a_final);

    for (std::size_t i = 0; i < t.a_final.pixel_count(); ++i) {
      CHECK(t.m_anomaly[i] == (t.a_final[i] >= c.mask_threshold));
      const double diff = t.i_syn[i] - t.i_norm[i];
      if (diff != 0.0) CHECK(t.a_final[i] > 0.0);
      if (t.a_final[i] > 1e-12 && t.i_norm[i] < 0.99) CHECK(diff > 0.0);
      CHECK(t.i_syn[i] <= 1.0);
    }
  }
}

TEST_CASE("default anomalies are neither empty nor overwhelming") {
  RandomStream rng(21, 0);
  const synth::Config c;
  int within = 0, total = 0;
  for (int i = 0; i < 60; ++i) {
    const phantom::Phantom ph = phantom::two_ellipse(256, rng);
    const GrayImage norm = normalize(ph.image);
    const pbtseg::LungMasks lungs = pbtseg::segment_lungs(norm);
    for (std::uint64_t v = 0; v < 2; ++v) {
      const synth::Triplet t = synth::synthesize(norm, lungs, c, static_cast<std::uint64_t>(i) * 2 + v);
      const double f = static_cast<double>(t.m_anomaly.count()) /
                       static_cast<double>(lungs.combined.count());
      within += f >= 0.005 && f <= 0.25;
      ++total;
    }
  }
  CHECK(within >= 0.95 * total);
}

TEST_CASE("synthesize argument errors") {
  const Scene s = phantom_scene(4, 128);
  CHECK_THROWS_AS(
      synth::synthesize(s.i_norm, pbtseg::LungMasks::empty(s.i_norm.size()), {}, 0),
      EmptyLungMask);
  CHECK_THROWS_AS(synth::synthesize(GrayImage(10, 10), s.lungs, {}, 0), DimensionMismatch);
  synth::Config bad;
  bad.mask_threshold = 0.0;
  CHECK_THROWS_AS(synth::synthesize(s.i_norm, s.lungs, bad, 0), ConfigError);
}

TEST_CASE("generate_dataset") {
  SUBCASE("empty input directory") {
    const fs::path in = fresh_dir("empty_in");
    const fs::path out = fs::temp_directory_path() / "lungsynth_synth_empty_out";
    fs::remove_all(out);
    const auto records = synth::generate_dataset(in, out, {});
    CHECK(records.empty());
    CHECK(fs::exists(out / "manifest.jsonl"));
    CHECK(fs::file_size(out / "manifest.jsonl") == 0);
  }
  SUBCASE("missing input directory") {
    CHECK_THROWS_AS(synth::generate_dataset("/nonexistent/lungsynth", fresh_dir("x"), {}),
                    DirNotFound);
  }
  SUBCASE("unreadable file is isolated") {
    const fs::path in = fresh_dir("bad_in");
    write_phantoms(in, 2, 10);
    {
      std::ofstream f(in / "broken.png");
      f << "garbage";
    }
    const fs::path out = fresh_dir("bad_out");
    std::vector<std::string> log;
    synth::BatchOptions opts;
    opts.log = [&](const std::string& m) { log.push_back(m); };
    const auto records = synth::generate_dataset(in, out, {}, opts);
    REQUIRE(records.size() == 3);
    CHECK(records[0].source == "broken.png");
    CHECK(records[0].status == "error");
    CHECK(records[0].error_msg.has_value());
    CHECK(records[1].ok());
    CHECK(records[2].ok());
    CHECK(log.size() == 1);
    for (const auto& e : fs::directory_iterator(out)) {
      CHECK(e.path().filename().string().rfind("broken", 0) != 0);
    }
    CHECK(dataio::read_manifest(out / "manifest.jsonl") == records);
    CHECK(dataio::validate_manifest(out / "manifest.jsonl").empty());
  }
  SUBCASE("unusable image gets an error record") {
    const fs::path in = fresh_dir("flat_in");
    io::save_image(in / "flat.png", GrayImage(64, 64, 0.5));
    const auto records = synth::generate_dataset(in, fresh_dir("flat_out"), {});
    REQUIRE(records.size() == 1);
    CHECK_FALSE(records[0].ok());
  }
  SUBCASE("reruns and job counts are byte-identical") {
    const fs::path in = fresh_dir("det_in");
    write_phantoms(in, 4, 11);
    synth::Config c;
    c.master_seed = 99;
    synth::BatchOptions one;
    one.per_image_triplets = 2;
    synth::BatchOptions many = one;
    many.jobs = 4;
    const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b"), d = fresh_dir("det_c");
    const auto ra = synth::generate_dataset(in, a, c, one);
    const auto rb = synth::generate_dataset(in, b, c, one);
    const auto rc = synth::generate_dataset(in, d, c, many);
    CHECK(ra == rb);
    CHECK(ra == rc);
    REQUIRE(ra.size() == 8);
    for (std::size_t k = 0; k < ra.size(); ++k) CHECK(ra[k].stream_id == k);
    CHECK(ra[1].syn_path == "p0_v1_syn.png");
    for (const auto& e : fs::directory_iterator(a)) {
      const std::string name = e.path().filename().string();
      CHECK(slurp(e.path()) == slurp(b / name));
      CHECK(slurp(e.path()) == slurp(d / name));
    }
  }
  SUBCASE("stage dumps") {
    const fs::path in = fresh_dir("dump_in");
    write_phantoms(in, 1, 12);
    const fs::path out = fresh_dir("dump_out");
    synth::BatchOptions opts;
    opts.dump_stages = true;
    const auto records = synth::generate_dataset(in, out, {}, opts);
    REQUIRE(records.size() == 1);
    CHECK(fs::exists(out / "p0_abase.png"));
    CHECK(fs::exists(out / "p0_afinal.png"));
    for (const auto& stage : records[0].stages_applied) {
      CHECK(fs::exists(out / ("p0_" + stage + ".png")));
    }
  }
}
