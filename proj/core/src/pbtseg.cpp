#include "lungsynth/pbtseg.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "lungsynth/errors.hpp"
#include "lungsynth/filters.hpp"

namespace lungsynth::pbtseg {

std::vector<double> default_thresholds() {
  std::vector<double> t;
  // Integer numerators keep every value the nearest double to its decimal.
  for (int i = 0; i <= 12; ++i) t.push_back((200 + 25 * i) / 1000.0);
  return t;
}

void Config::validate() const {
  if (thresholds.size() < 2) throw ConfigError("pbtseg.thresholds: need at least 2 values");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0 && thresholds[i] < 1.0)) {
      throw ConfigError("pbtseg.thresholds: values must lie in (0,1)");
    }
    if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
      throw ConfigError("pbtseg.thresholds: values must be strictly ascending");
    }
  }
  if (!(area_min > 0.0 && area_min < area_max && area_max < 1.0)) {
    throw ConfigError("pbtseg: need 0 < area_min < area_max < 1");
  }
  if (!(circularity_min > 0.0 && circularity_min < 1.0)) {
    throw ConfigError("pbtseg.circularity_min must lie in (0,1)");
  }
  if (!(border_contact_max >= 0.0 && border_contact_max < 1.0)) {
    throw ConfigError("pbtseg.border_contact_max must lie in [0,1)");
  }
}

const char* to_string(Side side) { return side == Side::Left ? "left" : "right"; }

const char* to_string(UpdateDecision decision) {
  switch (decision) {
    case UpdateDecision::Accepted: return "accepted";
    case UpdateDecision::NotLarger: return "not_larger";
    case UpdateDecision::FailsRules: return "fails_rules";
    case UpdateDecision::OverlapsOtherSide: return "overlaps_other_side";
  }
  return "unknown";
}

LungMasks LungMasks::empty(ImageSize size) {
  return {BinaryMask(size.width, size.height), BinaryMask(size.width, size.height),
          BinaryMask(size.width, size.height)};
}

std::vector<std::string> rule_violations(const Region& region,
                                         const Config& config, ImageSize size) {
  std::vector<std::string> out;
  const double image_area = static_cast<double>(size.area());
  const double area = static_cast<double>(region.area);
  if (area < config.area_min * image_area) out.emplace_back("area_below_min");
  if (area > config.area_max * image_area) out.emplace_back("area_above_max");
  if (region.circularity < config.circularity_min) out.emplace_back("not_round");
  if (config.require_taller_than_wide && region.bbox.height() <= region.bbox.width()) {
    out.emplace_back("not_taller_than_wide");
  }
  if (region.border_fraction() > config.border_contact_max) {
    out.emplace_back("border_contact");
  }
  return out;
}

bool passes_rules(const Region& region, const Config& config, ImageSize size) {
  return rule_violations(region, config, size).empty();
}

std::vector<Region> filter_candidates(const std::vector<Region>& regions,
                                      const Config& config, ImageSize size) {
  std::vector<Region> out;
  for (const Region& r : regions) {
    if (passes_rules(r, config, size)) out.push_back(r);
  }
  return out;
}

namespace {

bool ranks_before(const Region& a, const Region& b) {
  if (a.area != b.area) return a.area > b.area;
  if (a.centroid.x != b.centroid.x) return a.centroid.x < b.centroid.x;
  return a.label < b.label;
}

Side side_of(const Region& r, ImageSize size) {
  return r.centroid.x < 0.5 * size.width ? Side::Left : Side::Right;
}

}  // namespace

LungPair select_lung_pair(const std::vector<Region>& candidates, ImageSize size) {
  std::vector<const Region*> ranked;
  ranked.reserve(candidates.size());
  for (const Region& r : candidates) ranked.push_back(&r);
  const std::size_t take = std::min<std::size_t>(2, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take),
                    ranked.end(),
                    [](const Region* a, const Region* b) { return ranks_before(*a, *b); });

  LungPair pair;
  for (std::size_t i = 0; i < take; ++i) {
    std::optional<Region>& slot =
        side_of(*ranked[i], size) == Side::Left ? pair.left : pair.right;
    if (!slot) slot = *ranked[i];
  }
  return pair;
}

UpdateDecision try_update(LungMasks& masks, const Region& candidate, Side side,
                          const Config& config) {
  const ImageSize size = masks.combined.size();
  BinaryMask& target = side == Side::Left ? masks.left : masks.right;
  const BinaryMask& other = side == Side::Left ? masks.right : masks.left;

  if (candidate.area <= target.count()) return UpdateDecision::NotLarger;
  if (!passes_rules(candidate, config, size)) return UpdateDecision::FailsRules;
  for (std::uint32_t p : candidate.pixels) {
    if (other[p]) return UpdateDecision::OverlapsOtherSide;
  }

  target = region_mask(candidate, size);
  masks.combined = mask_union(masks.left, masks.right);
  return UpdateDecision::Accepted;
}

LungMasks update_masks(const LungMasks& current, const Region& candidate,
                       Side side, const Config& config) {
  LungMasks next = current;
  try_update(next, candidate, side, config);
  return next;
}

LungMasks segment_lungs(const GrayImage& image, const Config& config,
                        Trace* trace) {
  config.validate();
  const ImageSize size = image.size();
  LungMasks masks = LungMasks::empty(size);
  const double min_area = config.area_min * static_cast<double>(size.area());

  for (double t : config.thresholds) {
    const std::vector<Region> regions =
        connected_components(threshold_below(image, t), config.connectivity);
    const std::vector<Region> candidates = filter_candidates(regions, config, size);
    const LungPair pair = select_lung_pair(candidates, size);

    ThresholdRecord record;
    record.threshold = t;
    record.component_count = regions.size();

    auto apply = [&](const std::optional<Region>& region, Side side) {
      if (!region) return std::optional<UpdateDecision>{};
      return std::optional<UpdateDecision>{try_update(masks, *region, side, config)};
    };
    const auto left_decision = apply(pair.left, Side::Left);
    const auto right_decision = apply(pair.right, Side::Right);

    if (trace) {
      for (const Region& r : regions) {
        if (static_cast<double>(r.area) < min_area) continue;
        CandidateRecord c;
        c.region = r;
        c.region.pixels.clear();
        c.violations = rule_violations(r, config, size);
        if (pair.left && pair.left->label == r.label) {
          c.side = Side::Left;
          c.decision = left_decision;
        } else if (pair.right && pair.right->label == r.label) {
          c.side = Side::Right;
          c.decision = right_decision;
        }
        record.candidates.push_back(std::move(c));
      }
      record.left_area = masks.left.count();
      record.right_area = masks.right.count();
      trace->steps.push_back(std::move(record));
    }
  }

  if (!masks.left.any() && !masks.right.any()) throw NoLungFound();

  if (config.fill_holes) {
    BinaryMask left = fill_holes(masks.left);
    BinaryMask right = fill_holes(masks.right);
    masks.left = mask_difference(left, masks.right);
    masks.right = mask_difference(right, masks.left);
    masks.combined = mask_union(masks.left, masks.right);
  }
  return masks;
}

std::string trace_to_json(const Trace& trace) {
  using nlohmann::json;
  json steps = json::array();
  for (const ThresholdRecord& step : trace.steps) {
    json candidates = json::array();
    for (const CandidateRecord& c : step.candidates) {
      const Region& r = c.region;
      json item = {
          {"label", r.label},
          {"area", r.area},
          {"bbox", {r.bbox.min_x, r.bbox.min_y, r.bbox.max_x, r.bbox.max_y}},
          {"centroid", {r.centroid.x, r.centroid.y}},
          {"perimeter", r.perimeter},
          {"border_contact", r.border_contact},
          {"circularity", r.circularity},
          {"violations", c.violations},
          {"side", c.side ? json(to_string(*c.side)) : json(nullptr)},
          {"decision", c.decision ? json(to_string(*c.decision)) : json(nullptr)},
      };
      candidates.push_back(std::move(item));
    }
    steps.push_back({{"threshold", step.threshold},
                     {"component_count", step.component_count},
                     {"candidates", std::move(candidates)},
                     {"left_area", step.left_area},
                     {"right_area", step.right_area}});
  }
  return json{{"steps", std::move(steps)}}.dump(2);
}

}  // namespace lungsynth::pbtseg
