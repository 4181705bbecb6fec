#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lungsynth::dataio {

/// Regular files directly inside `dir` matching any glob pattern, sorted
/// lexicographically by file name. Throws DirNotFound.
std::vector<std::filesystem::path> scan_inputs(
    const std::filesystem::path& dir,
    const std::vector<std::string>& patterns = {"*.png", "*.pgm"});

/// One line of manifest.jsonl. Paths other than `source` are relative to the
/// manifest's directory; `source` is relative to the input directory.
struct ManifestRecord {
  std::string source;
  std::string norm_path;
  std::string syn_path;
  std::string mask_path;
  std::string lung_path;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  double anomaly_area_fraction = 0.0;  // |M_anomaly| / |M_lung|
  std::vector<std::string> stages_applied;
  std::string status = "ok";  // ok | error
  std::optional<std::string> error_msg;

  bool ok() const { return status == "ok"; }
  bool operator==(const ManifestRecord&) const = default;
};

std::string to_json_line(const ManifestRecord& record);
/// Throws IoError on malformed JSON or missing fields.
ManifestRecord parse_manifest_line(const std::string& line);

void write_manifest(const std::filesystem::path& path,
                    const std::vector<ManifestRecord>& records);
std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path);

struct ValidationIssue {
  std::size_t line = 0;  // 1-based
  std::string message;
};

/// Checks every `ok` record: the four files load, share dimensions, masks are
/// binary, the anomaly mask stays inside the lung mask, and the recorded
/// area fraction matches the files.
std::vector<ValidationIssue> validate_manifest(const std::filesystem::path& path);

}  // namespace lungsynth::dataio
