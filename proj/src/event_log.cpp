#include "thimac/event_log.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <tuple>

#include "text.hpp"

namespace thimac {

namespace {

std::string_view source_name(EventSource s) {
  return s == EventSource::Simulated ? "Simulated" : "Imported";
}

}  // namespace

void EventLog::sort() {
  std::ranges::stable_sort(events, [](const MetaEvent& a, const MetaEvent& b) {
    return std::tie(a.case_id, a.seq) < std::tie(b.case_id, b.seq);
  });
}

std::size_t EventLog::case_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i == 0 || events[i].case_id != events[i - 1].case_id) ++n;
  }
  return n;
}

std::string write_log(const EventLog& log) {
  auto sorted = log;
  sorted.sort();
  std::ostringstream os;
  for (const auto& line : sorted.header) os << "# " << line << '\n';
  os << kMetaLogHeader << '\n';
  for (const auto& e : sorted.events) {
    os << detail::csv_field(e.case_id) << ',' << detail::csv_field(e.event_id) << ',' << e.seq
       << ',' << format_timestamp(e.timestamp) << ',' << source_name(e.source) << '\n';
  }
  return os.str();
}

LogReadResult read_log(std::string_view text) {
  LogReadResult result;
  bool have_header = false;
  std::map<std::string, std::vector<std::pair<MetaEvent, std::size_t>>> cases;

  for (const auto& line : detail::split_lines(text)) {
    const auto body = detail::trim(line.text);
    if (body.empty()) continue;
    if (body.front() == '#') {
      auto comment = body.substr(1);
      if (!comment.empty() && comment.front() == ' ') comment.remove_prefix(1);
      result.log.header.emplace_back(comment);
      continue;
    }
    if (!have_header) {
      if (body != kMetaLogHeader) {
        result.errors.push_back({line.number, "expected header '" + std::string(kMetaLogHeader) + "'"});
        return result;
      }
      have_header = true;
      continue;
    }
    auto fields = detail::split_csv(body);
    if (fields.size() != 5) {
      result.errors.push_back({line.number, "expected 5 fields, got " + std::to_string(fields.size())});
      continue;
    }
    MetaEvent event;
    event.case_id = fields[0];
    event.event_id = fields[1];
    if (event.case_id.empty() || event.event_id.empty()) {
      result.errors.push_back({line.number, "empty case_id or event_id"});
      continue;
    }
    auto [ptr, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), event.seq);
    if (ec != std::errc{} || ptr != fields[2].data() + fields[2].size()) {
      result.errors.push_back({line.number, "invalid seq '" + fields[2] + "'"});
      continue;
    }
    auto ts = parse_timestamp(fields[3]);
    if (!ts) {
      result.errors.push_back({line.number, "invalid timestamp '" + fields[3] + "'"});
      continue;
    }
    event.timestamp = *ts;
    if (fields[4] == "Simulated") {
      event.source = EventSource::Simulated;
    } else if (fields[4] == "Imported") {
      event.source = EventSource::Imported;
    } else {
      result.errors.push_back({line.number, "invalid source '" + fields[4] + "'"});
      continue;
    }
    cases[event.case_id].emplace_back(std::move(event), line.number);
  }
  if (!have_header) {
    result.errors.push_back({1, "missing header '" + std::string(kMetaLogHeader) + "'"});
    return result;
  }

  for (auto& [case_id, rows] : cases) {
    std::ranges::stable_sort(rows, {}, [](const auto& r) { return r.first.seq; });
    bool ok = true;
    for (std::size_t i = 0; i < rows.size() && ok; ++i) {
      if (rows[i].first.seq != i) {
        result.errors.push_back({rows[i].second, "case '" + case_id + "': seq gap or duplicate at seq " +
                                                     std::to_string(rows[i].first.seq)});
        ok = false;
      } else if (i > 0 && rows[i].first.timestamp < rows[i - 1].first.timestamp) {
        result.errors.push_back({rows[i].second, "case '" + case_id + "': timestamp decreases at seq " +
                                                     std::to_string(i)});
        ok = false;
      }
    }
    if (!ok) continue;
    for (auto& [event, _] : rows) result.log.events.push_back(std::move(event));
  }
  return result;
}

std::vector<Trace> traces_of(const EventLog& log) {
  auto sorted = log.events;
  std::ranges::stable_sort(sorted, [](const MetaEvent& a, const MetaEvent& b) {
    return std::tie(a.case_id, a.seq) < std::tie(b.case_id, b.seq);
  });
  std::vector<Trace> traces;
  for (const auto& e : sorted) {
    if (traces.empty() || traces.back().case_id != e.case_id) traces.push_back({e.case_id, {}});
    traces.back().steps.push_back({e.event_id, e.timestamp});
  }
  return traces;
}

Trace make_trace(std::string case_id, const std::vector<std::string>& symbols) {
  Trace trace{std::move(case_id), {}};
  Timestamp t{};
  for (const auto& s : symbols) {
    trace.steps.push_back({s, t});
    t += std::chrono::seconds{1};
  }
  return trace;
}

}  // namespace thimac
