#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "thimac/diagnostics.hpp"
#include "thimac/model.hpp"

namespace thimac {

/// Reference to a flow (`a->b`) or trigger (`a~>b`) arc of the static model.
struct ArcRef {
  std::string from;
  std::string to;
  bool trigger = false;

  auto operator<=>(const ArcRef&) const = default;
};

/// An event is a region of the static model; its time lives on each
/// occurrence (MetaEvent), not here.
struct EventDef {
  std::string id;
  std::string label;
  std::vector<std::string> region_stages;
  std::vector<ArcRef> region_arcs;
  bool observable = true;

  bool operator==(const EventDef&) const = default;
};

struct DynamicModel {
  std::string static_ref;
  std::vector<EventDef> events;

  const EventDef* find(std::string_view id) const;
  std::vector<std::string> event_ids() const;

  bool operator==(const DynamicModel&) const = default;
};

/// Parses the `.ev` DSL against a static model:
///
///   event <id> "<label>" [silent]
///   region <stage-id>[, <stage-id>...]
///   arcs <from>-><to>[, <from>~><to>...]      (optional)
///
/// Throws DslError on unknown stages/arcs, empty regions and duplicate ids.
DynamicModel load_events(std::string_view text, const StaticModel& model);

std::string render_events(const DynamicModel& dynamic);

struct RegionOptions {
  /// Report overlapping regions as violations instead of warnings.
  bool strict_partition = false;
};

ValidationReport validate_regions(const DynamicModel& dynamic, const StaticModel& model,
                                  RegionOptions options = {});

struct RegionCoverage {
  std::vector<std::string> covered;
  std::vector<std::string> uncovered;
};

/// Splits the static stage set into stages inside some region and the rest.
RegionCoverage region_coverage(const DynamicModel& dynamic, const StaticModel& model);

/// Static DOT with each event region drawn as a labeled cluster.
std::string export_dynamic_dot(const DynamicModel& dynamic, const StaticModel& model);

}  // namespace thimac
