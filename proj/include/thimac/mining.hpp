#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "thimac/behavior.hpp"
#include "thimac/conformance.hpp"
#include "thimac/event_log.hpp"

namespace thimac {

struct Deviation {
  DeviationKind kind;
  std::size_t support = 0;
  /// Up to five case ids, in case-id order.
  std::vector<std::string> example_cases;

  bool operator==(const Deviation&) const = default;
};

inline constexpr std::size_t kMaxExampleCases = 5;

/// One Deviation per distinct rejection reason, by support descending then
/// reason.
std::vector<Deviation> aggregate_deviations(std::span<const CaseVerdict> verdicts);

struct AddEdge {
  EventId from;
  EventId to;
  auto operator<=>(const AddEdge&) const = default;
};
struct AddStart {
  EventId event;
  auto operator<=>(const AddStart&) const = default;
};
struct AddEnd {
  EventId event;
  auto operator<=>(const AddEnd&) const = default;
};

using Edit = std::variant<AddEdge, AddStart, AddEnd>;

std::string to_string(const Edit& edit);

struct EditProposal {
  Edit edit;
  std::size_t support = 0;
  DeviationKind provenance;

  bool operator==(const EditProposal&) const = default;
};

struct ProposalSet {
  std::vector<EditProposal> proposals;
  /// UnknownActivity deviations; these need a mapping change, not a model edit.
  std::vector<Deviation> mapping_review;
};

ProposalSet propose_edits(std::span<const Deviation> deviations, std::size_t min_support = 1);

/// Returns `model` plus the edits. Throws ModelError when an edit names an
/// event outside the alphabet.
BehavioralModel apply_edits(const BehavioralModel& model, std::span<const EditProposal> edits);

/// `kind,from,to,support` (AddStart leaves `from` empty, AddEnd leaves `to`).
std::string write_proposals_csv(std::span<const EditProposal> proposals);
/// Throws DslError on malformed rows.
std::vector<EditProposal> read_proposals_csv(std::string_view text);

/// Behavior DSL for the enhanced model, with a provenance comment above each
/// added line.
std::string render_enhanced(const BehavioralModel& enhanced,
                            std::span<const EditProposal> applied);

struct EnhancementReport {
  std::vector<EditProposal> applied;
  std::size_t streams_before = 0;
  std::size_t streams_after = 0;
  std::optional<LogCheck> recheck;
};

struct Enhancement {
  BehavioralModel model;
  EnhancementReport report;
};

/// Applies proposals and reports stream counts; when traces are given they
/// are re-checked against the enhanced model.
Enhancement enhance(const BehavioralModel& model, std::span<const EditProposal> proposals,
                    std::span<const Trace> recheck = {}, const ActivityMapping& mapping = {});

/// Repeats check -> aggregate -> propose -> apply until no proposal changes
/// the model (or `max_rounds` is hit). Each round fixes the first deviation of
/// every rejected trace.
BehavioralModel refine_to_fixpoint(const BehavioralModel& model, std::span<const Trace> traces,
                                   const ActivityMapping& mapping, std::size_t min_support = 1,
                                   std::size_t max_rounds = 64);

/// Reads an out-of-model log with header `case_id,activity,timestamp`
/// (columns in any order). Steps are ordered by timestamp, then row order.
LogReadResult import_external_log(std::string_view text);

}  // namespace thimac
