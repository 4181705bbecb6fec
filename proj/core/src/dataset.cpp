#include "lungsynth/dataset.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "lungsynth/errors.hpp"
#include "lungsynth/image_io.hpp"

namespace lungsynth::dataio {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<fs::path> scan_inputs(const fs::path& dir,
                                  const std::vector<std::string>& patterns) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw DirNotFound(dir.string());
  std::vector<fs::path> out;
  for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    const bool match = std::any_of(patterns.begin(), patterns.end(), [&](const std::string& p) {
      return fnmatch(p.c_str(), name.c_str(), 0) == 0;
    });
    if (match) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return out;
}

std::string to_json_line(const ManifestRecord& r) {
  json j = {
      {"source", r.source},
      {"norm_path", r.norm_path},
      {"syn_path", r.syn_path},
      {"mask_path", r.mask_path},
      {"lung_path", r.lung_path},
      {"seed", r.seed},
      {"stream_id", r.stream_id},
      {"anomaly_area_fraction", r.anomaly_area_fraction},
      {"stages_applied", r.stages_applied},
      {"status", r.status},
  };
  if (r.error_msg) j["error_msg"] = *r.error_msg;
  return j.dump();
}

ManifestRecord parse_manifest_line(const std::string& line) {
  try {
    const json j = json::parse(line);
    ManifestRecord r;
    r.source = j.at("source").get<std::string>();
    r.norm_path = j.value("norm_path", std::string{});
    r.syn_path = j.at("syn_path").get<std::string>();
    r.mask_path = j.at("mask_path").get<std::string>();
    r.lung_path = j.at("lung_path").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.stream_id = j.at("stream_id").get<std::uint64_t>();
    r.anomaly_area_fraction = j.at("anomaly_area_fraction").get<double>();
    r.stages_applied = j.at("stages_applied").get<std::vector<std::string>>();
    r.status = j.at("status").get<std::string>();
    if (r.status != "ok" && r.status != "error") {
      throw IoError("invalid status '" + r.status + "'");
    }
    if (j.contains("error_msg")) r.error_msg = j.at("error_msg").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed manifest record: ") + e.what());
  }
}

void write_manifest(const fs::path& path, const std::vector<ManifestRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const ManifestRecord& r : records) out << to_json_line(r) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<ManifestRecord> read_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<ManifestRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(parse_manifest_line(line));
    } catch (const IoError& e) {
      throw IoError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ValidationIssue> validate_manifest(const fs::path& path) {
  const fs::path base = path.parent_path();
  std::vector<ValidationIssue> issues;
  std::ifstream in(path, std::ios::binary);
  if (!in) return {{0, "cannot read " + path.string()}};

  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    auto issue = [&](const std::string& msg) { issues.push_back({n, msg}); };
    ManifestRecord r;
    try {
      r = parse_manifest_line(line);
    } catch (const IoError& e) {
      issue(e.what());
      continue;
    }
    if (!r.ok()) continue;
    try {
      const BinaryMask lung = io::load_mask(base / r.lung_path);
      const BinaryMask mask = io::load_mask(base / r.mask_path);
      const GrayImage syn = io::load_image(base / r.syn_path);
      if (mask.size() != lung.size() || syn.size() != lung.size()) {
        issue("dimension mismatch between triplet files");
        continue;
      }
      if (!r.norm_path.empty()) {
        const GrayImage norm = io::load_image(base / r.norm_path);
        if (norm.size() != lung.size()) {
          issue("dimension mismatch between triplet files");
          continue;
        }
        for (std::size_t i = 0; i < norm.pixel_count(); ++i) {
          if (syn[i] < norm[i]) {
            issue("synthetic image darker than normal image");
            break;
          }
        }
      }
      if (mask_difference(mask, lung).any()) issue("anomaly mask leaves the lung mask");
      const std::size_t lung_area = lung.count();
      const double fraction =
          lung_area == 0 ? 0.0 : static_cast<double>(mask.count()) / static_cast<double>(lung_area);
      if (std::abs(fraction - r.anomaly_area_fraction) > 1e-12) {
        issue("anomaly_area_fraction " + std::to_string(r.anomaly_area_fraction) +
              " does not match files (" + std::to_string(fraction) + ")");
      }
    } catch (const Error& e) {
      issue(e.what());
    } catch (const std::invalid_argument& e) {
      issue(e.what());
    }
  }
  return issues;
}

}  // namespace lungsynth::dataio
