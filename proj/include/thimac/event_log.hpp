#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "thimac/timestamp.hpp"

namespace thimac {

enum class EventSource { Simulated, Imported };

/// One logged occurrence of an event (or, for imported logs, of a raw
/// activity label that is resolved only at check time).
struct MetaEvent {
  std::string case_id;
  std::string event_id;
  std::size_t seq = 0;
  Timestamp timestamp{};
  EventSource source = EventSource::Simulated;

  bool operator==(const MetaEvent&) const = default;
};

struct EventLog {
  /// Provenance lines, written as `# ...` above the CSV header.
  std::vector<std::string> header;
  std::vector<MetaEvent> events;

  /// Orders rows by (case_id, seq).
  void sort();
  std::size_t case_count() const;

  bool operator==(const EventLog&) const = default;
};

struct RowError {
  std::size_t line = 0;
  std::string message;
};

struct LogReadResult {
  EventLog log;
  std::vector<RowError> errors;
};

inline constexpr std::string_view kMetaLogHeader = "case_id,event_id,seq,timestamp,source";

std::string write_log(const EventLog& log);

/// Reads the meta-event CSV. Malformed rows are skipped and reported; a case
/// with a sequence gap or decreasing timestamps is dropped as a whole.
LogReadResult read_log(std::string_view text);

struct TraceStep {
  std::string symbol;
  Timestamp timestamp{};
};

struct Trace {
  std::string case_id;
  std::vector<TraceStep> steps;
};

/// Groups a log into per-case traces ordered by case id, steps by seq.
std::vector<Trace> traces_of(const EventLog& log);

Trace make_trace(std::string case_id, const std::vector<std::string>& symbols);

}  // namespace thimac
