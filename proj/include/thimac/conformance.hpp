#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "thimac/behavior.hpp"
#include "thimac/event_log.hpp"

namespace thimac {

/// Activity labels -> candidate events, plus events that are never logged.
/// Symbols that are not labels resolve to themselves when they name an event.
struct ActivityMapping {
  std::map<std::string, std::set<EventId>> candidates;
  std::set<EventId> silent;

  /// Candidate events for a log symbol; nullopt for an unknown activity.
  std::optional<std::set<EventId>> resolve(std::string_view symbol,
                                           const BehavioralModel& model) const;
};

/// Parses the `.map` DSL (`map <activity> -> <id>[|<id>...]`,
/// `silent <id>[, <id>...]`). Events marked silent in the dynamic model join
/// the silent set.
ActivityMapping load_mapping(std::string_view text, const DynamicModel& dynamic);

std::string render_mapping(const ActivityMapping& mapping);

struct IllegalStart {
  EventId event;
  auto operator<=>(const IllegalStart&) const = default;
};
struct IllegalTransition {
  EventId from;
  EventId to;
  auto operator<=>(const IllegalTransition&) const = default;
};
struct IllegalEnd {
  EventId event;
  auto operator<=>(const IllegalEnd&) const = default;
};
struct UnknownActivity {
  std::string label;
  auto operator<=>(const UnknownActivity&) const = default;
};

using DeviationKind = std::variant<IllegalStart, IllegalTransition, IllegalEnd, UnknownActivity>;

/// `IllegalTransition(E2,E5)` style rendering.
std::string to_string(const DeviationKind& kind);

struct Accepted {
  std::vector<EventId> resolution;
  bool operator==(const Accepted&) const = default;
};
struct Incomplete {
  std::vector<EventId> resolution;
  bool operator==(const Incomplete&) const = default;
};
struct Rejected {
  DeviationKind reason;
  std::size_t index = 0;
  bool operator==(const Rejected&) const = default;
};

using Verdict = std::variant<Accepted, Incomplete, Rejected>;

enum class VerdictCategory { Accepted, Incomplete, Rejected };

VerdictCategory category(const Verdict& verdict);
std::string_view to_string(VerdictCategory category);

/// Decides whether a trace is an acceptable stream of the model.
///
/// Each observed step picks one candidate event; silent events may be
/// inserted before the first step, between steps and after the last step,
/// each at most once per gap. The verdict is Accepted when some resolution is
/// a start->end path, Incomplete when some resolution is a prefix of one, and
/// Rejected otherwise. A rejection reports the step where the last surviving
/// resolutions died; ties go to the lexicographically smallest event pair.
Verdict check_trace(const Trace& trace, const BehavioralModel& model,
                    const ActivityMapping& mapping);
Verdict check_trace(std::span<const std::string> symbols, const BehavioralModel& model,
                    const ActivityMapping& mapping);

struct CaseVerdict {
  std::string case_id;
  Verdict verdict;
};

struct LogCheck {
  std::vector<CaseVerdict> verdicts;
  std::size_t accepted = 0;
  std::size_t incomplete = 0;
  std::size_t rejected = 0;
};

/// Cases are independent; verdicts come back ordered by case id.
LogCheck check_log(const EventLog& log, const BehavioralModel& model,
                   const ActivityMapping& mapping);
LogCheck check_traces(std::span<const Trace> traces, const BehavioralModel& model,
                      const ActivityMapping& mapping);

/// `case_id,verdict,detail,index`.
std::string format_verdicts_csv(const LogCheck& check);
std::string format_summary(const LogCheck& check);

/// Incremental matcher state for one case.
struct MonitorState {
  std::string case_id;
  /// Events the matcher may currently occupy. Empty after the first step
  /// exactly when the case has been rejected.
  std::set<EventId> frontier;
  std::size_t step_count = 0;
  /// Frontier after each accepted step, used to rebuild the resolution.
  std::vector<std::set<EventId>> history;
  std::optional<Rejected> rejection;
};

struct StepOutcome {
  MonitorState state;
  /// Set on the step that empties the frontier, never afterwards.
  std::optional<Rejected> deviation;
};

MonitorState start_monitor(std::string case_id);
StepOutcome step_monitor(MonitorState state, std::string_view symbol,
                         const BehavioralModel& model, const ActivityMapping& mapping);
/// Classifies the end of the case.
Verdict finalize_monitor(const MonitorState& state, const BehavioralModel& model,
                         const ActivityMapping& mapping);

}  // namespace thimac
