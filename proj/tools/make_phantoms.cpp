// Writes a corpus of synthetic chest phantoms with their ground-truth lung
// masks: <out>/images/<name>.png and <out>/gt/<name>_lung.png.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lungsynth/image_io.hpp"
#include "lungsynth/phantom.hpp"
#include "lungsynth/random.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate phantom chest images with known lung masks"};
  std::string output;
  int count = 10;
  int size = 256;
  std::uint64_t seed = 1;
  std::string family = "two-ellipse";
  app.add_option("--output", output, "Output directory")->required();
  app.add_option("--count", count, "Number of phantoms")->check(CLI::PositiveNumber);
  app.add_option("--size", size, "Image width and height")->check(CLI::Range(32, 8192));
  app.add_option("--seed", seed, "Generator seed");
  app.add_option("--family", family, "two-ellipse | merge")
      ->check(CLI::IsMember({"two-ellipse", "merge"}));
  CLI11_PARSE(app, argc, argv);

  namespace fs = std::filesystem;
  const fs::path images = fs::path(output) / "images";
  const fs::path gt = fs::path(output) / "gt";
  fs::create_directories(images);
  fs::create_directories(gt);

  try {
    for (int i = 0; i < count; ++i) {
      lungsynth::RandomStream rng(seed, static_cast<std::uint64_t>(i));
      const auto p = family == "merge" ? lungsynth::phantom::merge_inducing(size, rng)
                                       : lungsynth::phantom::two_ellipse(size, rng);
      char name[32];
      std::snprintf(name, sizeof(name), "phantom_%03d", i);
      lungsynth::io::save_image(images / (std::string(name) + ".png"), p.image,
                                lungsynth::io::BitDepth::Sixteen);
      lungsynth::io::save_mask(gt / (std::string(name) + "_lung.png"), p.combined);
    }
  } catch (const std::exception& e) {
    std::cerr << "make-phantoms: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
