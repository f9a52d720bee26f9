#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thimac/behavior.hpp"
#include "thimac/event_log.hpp"

namespace thimac {

enum class FaultKind { Drop, SwapAdjacent, IllegalStart };

std::string_view to_string(FaultKind kind);
std::optional<FaultKind> parse_fault_kind(std::string_view text);

struct FaultSpec {
  FaultKind kind = FaultKind::Drop;
  double rate = 0.0;
};

struct SimConfig {
  std::uint64_t seed = 0;
  std::size_t cases = 1;
  /// Missing edges weigh 1.
  std::map<Edge, double> edge_weights;
  /// Missing starts weigh 1.
  std::map<EventId, double> start_weights;
  std::optional<FaultSpec> fault;
  std::size_t max_steps = 1000;
  Timestamp start_time = Timestamp{std::chrono::sys_days{std::chrono::year{2021} / 1 / 1}};
  std::chrono::milliseconds increment{std::chrono::minutes{1}};
};

/// Throws ModelError for non-positive weights or a rate outside [0, 1].
void validate_config(const SimConfig& config);

struct SimResult {
  EventLog log;
  /// Cases that hit max_steps or a dead end; they are left out of the log.
  std::vector<std::string> case_errors;
};

std::string case_name(std::size_t index, std::size_t total);

/// Weighted random walks from a start to an end. Every case draws from its
/// own generator keyed by (seed, case index), so results do not depend on
/// generation order. An end event with outgoing edges offers "stop" as one
/// more alternative of weight 1.
SimResult simulate_log(const BehavioralModel& model, const SimConfig& config);

/// Mutates each case with probability `config.fault->rate`; seq and
/// timestamps are renumbered and every mutation is noted in the header.
EventLog inject_faults(const EventLog& log, const SimConfig& config);

}  // namespace thimac
