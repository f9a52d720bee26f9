#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thimac/diagnostics.hpp"
#include "thimac/events.hpp"

namespace thimac {

using EventId = std::string;
using Edge = std::pair<EventId, EventId>;

/// Chronology of events. Outgoing edges of an event are exclusive
/// alternatives; start-to-end paths are the acceptable behaviors.
struct BehavioralModel {
  std::string name;
  std::string dynamic_ref;
  /// Alphabet, in dynamic-model order.
  std::vector<EventId> events;
  std::set<Edge> edges;
  std::set<EventId> starts;
  std::set<EventId> ends;

  bool has_event(std::string_view id) const;
  std::vector<EventId> successors(std::string_view id) const;

  bool operator==(const BehavioralModel&) const = default;
};

/// Parses the `.bh` DSL (`behavior <name>`, `start <id>`, `end <id>`,
/// `edge <id> -> <id>`). Throws DslError on unknown ids or empty start/end sets.
BehavioralModel load_behavior(std::string_view text, const DynamicModel& dynamic);

/// Renders a model in the `.bh` DSL. `line_notes` maps a rendered line (e.g.
/// "edge E2 -> E5") to a comment emitted just above it.
std::string render_behavior(const BehavioralModel& model,
                            const std::map<std::string, std::string>& line_notes = {});

ValidationReport validate_behavior(const BehavioralModel& model);

bool is_cyclic(const BehavioralModel& model);

struct StreamType {
  std::vector<EventId> events;

  auto operator<=>(const StreamType&) const = default;
};

struct StreamEnumeration {
  std::vector<StreamType> streams;
  std::size_t max_len = 0;
  /// Set when the graph has a cycle; enumeration is then bounded by max_len.
  bool cyclic = false;
};

/// All simple start->end paths with at most `max_len` events (default: the
/// alphabet size), lexicographically ordered.
StreamEnumeration enumerate_streams(const BehavioralModel& model,
                                    std::optional<std::size_t> max_len = std::nullopt);

struct BehaviorDiff {
  std::set<EventId> events_only_a;
  std::set<EventId> events_only_b;
  std::set<Edge> edges_only_a;
  std::set<Edge> edges_only_b;
  std::set<EventId> starts_only_a;
  std::set<EventId> starts_only_b;
  std::set<EventId> ends_only_a;
  std::set<EventId> ends_only_b;

  bool empty() const;
  bool alphabet_mismatch() const { return !events_only_a.empty() || !events_only_b.empty(); }

  bool operator==(const BehaviorDiff&) const = default;
};

BehaviorDiff diff_behaviors(const BehavioralModel& a, const BehavioralModel& b);

std::string format_diff_text(const BehaviorDiff& diff);
/// `kind,side,element` rows with kind in {event, edge, start, end}.
std::string format_diff_csv(const BehaviorDiff& diff);

/// One node per event; starts are filled, ends double-circled. With an
/// overlay, elements only in the rendered model are drawn red and elements
/// only in the other model are drawn grey and dashed.
std::string export_behavior_dot(const BehavioralModel& model,
                                const BehaviorDiff* overlay = nullptr);

}  // namespace thimac
