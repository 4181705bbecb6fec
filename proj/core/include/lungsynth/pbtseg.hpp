#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lungsynth/components.hpp"
#include "lungsynth/image.hpp"

namespace lungsynth::pbtseg {

/// 13 evenly spaced thresholds, 0.20 to 0.50 inclusive.
std::vector<double> default_thresholds();

struct Config {
  std::vector<double> thresholds = default_thresholds();
  double circularity_min = 0.15;
  double border_contact_max = 0.05;  // fraction of the perimeter
  double area_min = 0.02;            // fraction of the image area
  double area_max = 0.35;
  bool require_taller_than_wide = true;
  Connectivity connectivity = Connectivity::Eight;
  bool fill_holes = false;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

enum class Side { Left, Right };

const char* to_string(Side side);

/// M_left / M_right / M_lung. Left is the smaller-x half of the image.
struct LungMasks {
  BinaryMask left;
  BinaryMask right;
  BinaryMask combined;

  static LungMasks empty(ImageSize size);
  const BinaryMask& side(Side s) const { return s == Side::Left ? left : right; }
};

struct LungPair {
  std::optional<Region> left;
  std::optional<Region> right;
};

enum class UpdateDecision { Accepted, NotLarger, FailsRules, OverlapsOtherSide };

const char* to_string(UpdateDecision decision);

/// Names of the rules the region violates; empty when it passes.
std::vector<std::string> rule_violations(const Region& region,
                                         const Config& config, ImageSize size);

bool passes_rules(const Region& region, const Config& config, ImageSize size);

std::vector<Region> filter_candidates(const std::vector<Region>& regions,
                                      const Config& config, ImageSize size);

/// Picks the two largest candidates (ties: smaller centroid x, then smaller
/// label) and assigns each to the half containing its centroid. When both land
/// in one half only the larger one is kept.
LungPair select_lung_pair(const std::vector<Region>& candidates, ImageSize size);

/// Replaces one side with the candidate when it is strictly larger, still
/// passes every rule and does not overlap the other side.
UpdateDecision try_update(LungMasks& masks, const Region& candidate, Side side,
                          const Config& config);

LungMasks update_masks(const LungMasks& current, const Region& candidate,
                       Side side, const Config& config);

struct CandidateRecord {
  Region region;  // pixels cleared
  std::vector<std::string> violations;
  std::optional<Side> side;
  std::optional<UpdateDecision> decision;
};

struct ThresholdRecord {
  double threshold = 0.0;
  std::size_t component_count = 0;
  std::vector<CandidateRecord> candidates;
  std::size_t left_area = 0;
  std::size_t right_area = 0;
};

struct Trace {
  std::vector<ThresholdRecord> steps;
};

/// Runs the threshold sweep. Throws NoLungFound when both sides stay empty.
/// Components smaller than area_min are counted but not recorded in the trace.
LungMasks segment_lungs(const GrayImage& image, const Config& config = {},
                        Trace* trace = nullptr);

std::string trace_to_json(const Trace& trace);

}  // namespace lungsynth::pbtseg
