#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thimac/diagnostics.hpp"

namespace thimac {

/// The five generic actions of a thing machine. Arrival and acceptance are
/// folded into Receive.
enum class StageKind { Create, Process, Release, Transfer, Receive };

std::string_view to_string(StageKind kind);
std::optional<StageKind> parse_stage_kind(std::string_view text);

/// `a.b.c` -> `a.b`; empty for an undotted id.
std::string parent_path(std::string_view dotted_id);

struct Machine {
  std::string id;
  std::string label;
  std::optional<std::string> parent;

  bool operator==(const Machine&) const = default;
};

struct Stage {
  std::string id;
  StageKind kind = StageKind::Process;
  bool has_store = false;

  /// Owning machine, derived from the dotted id.
  std::string machine() const { return parent_path(id); }

  bool operator==(const Stage&) const = default;
};

struct FlowArc {
  std::string from;
  std::string to;

  auto operator<=>(const FlowArc&) const = default;
};

struct TriggerArc {
  std::string from;
  std::string to;

  auto operator<=>(const TriggerArc&) const = default;
};

/// A static TM diagram. Immutable once parsed; elements keep declaration order.
struct StaticModel {
  std::string name;
  std::vector<Machine> machines;
  std::vector<Stage> stages;
  std::vector<FlowArc> flows;
  std::vector<TriggerArc> triggers;

  const Stage* find_stage(std::string_view id) const;
  const Machine* find_machine(std::string_view id) const;
  bool has_flow(std::string_view from, std::string_view to) const;
  bool has_trigger(std::string_view from, std::string_view to) const;

  bool operator==(const StaticModel&) const = default;
};

/// Parses the `.tm` DSL:
///
///   model <name>
///   machine <dotted-id> ["<label>"]
///   stage <dotted-id> kind <create|process|release|transfer|receive> [store]
///   flow <stage-id> -> <stage-id>
///   trigger <stage-id> ~> <stage-id>
///
/// `#` starts a comment. A machine's parent (and a stage's machine) is its
/// dotted prefix and must already be declared. Throws DslError.
StaticModel parse_model(std::string_view text);

/// Pretty-printer producing text that parse_model reads back to an equal model.
std::string render_model(const StaticModel& model);

/// True when a solid arc between these kinds is legal inside one machine.
bool intra_machine_adjacency(StageKind from, StageKind to);

ValidationReport validate_static(const StaticModel& model);

/// One cluster per machine (nested for submachines), one node per stage,
/// solid flows and dashed triggers. Output is sorted by id.
std::string export_static_dot(const StaticModel& model);

}  // namespace thimac
