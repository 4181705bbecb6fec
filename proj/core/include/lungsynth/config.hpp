#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "lungsynth/losses.hpp"
#include "lungsynth/metrics.hpp"
#include "lungsynth/synth.hpp"

namespace lungsynth::dataio {

struct LossParams {
  double tau = 0.01;
  double eps = 1e-8;
  losses::Weights weights;
};

struct MetricParams {
  metrics::Reducer reducer = metrics::Reducer::TopKMean;
  double top_k_fraction = 0.01;
};

struct FullConfig {
  synth::Config synthesis;  // carries pbtseg, brush, transform, seed
  LossParams loss;
  MetricParams metrics;

  void validate() const;
};

/// Environment variable consulted when no --config flag is given.
inline constexpr const char* kConfigEnvVar = "LUNGSYNTH_CONFIG";

/// Parses `key = value` lines; `#` starts a comment. Keys use dotted section
/// prefixes (brush.base_radius). Unset keys keep their defaults. Throws
/// ParseError (bad value, malformed or duplicate line), UnknownKey, or
/// ConfigError (values violating an invariant).
FullConfig parse_config(std::string_view text, const std::string& source = "<config>");

FullConfig load_config(const std::filesystem::path& path);

/// Canonical listing of every key with its current value.
std::string format_config(const FullConfig& config);

}  // namespace lungsynth::dataio
