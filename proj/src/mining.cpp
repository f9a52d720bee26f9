#include "thimac/mining.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "text.hpp"

namespace thimac {

namespace {

std::string edit_line(const Edit& edit) {
  return std::visit(
      [](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, AddEdge>) return "edge " + e.from + " -> " + e.to;
        if constexpr (std::is_same_v<T, AddStart>) return "start " + e.event;
        if constexpr (std::is_same_v<T, AddEnd>) return "end " + e.event;
      },
      edit);
}

DeviationKind answered_by(const Edit& edit) {
  return std::visit(
      [](const auto& e) -> DeviationKind {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, AddEdge>) return IllegalTransition{e.from, e.to};
        if constexpr (std::is_same_v<T, AddStart>) return IllegalStart{e.event};
        if constexpr (std::is_same_v<T, AddEnd>) return IllegalEnd{e.event};
      },
      edit);
}

[[noreturn]] void bad_row(std::size_t line, const std::string& msg) {
  throw DslError(ErrorKind::Syntax, line, 0, msg);
}

}  // namespace

std::vector<Deviation> aggregate_deviations(std::span<const CaseVerdict> verdicts) {
  std::map<DeviationKind, Deviation> by_kind;
  std::vector<const CaseVerdict*> ordered;
  for (const auto& v : verdicts) ordered.push_back(&v);
  std::ranges::stable_sort(ordered, {}, [](const CaseVerdict* v) { return v->case_id; });

  for (const auto* v : ordered) {
    const auto* rejected = std::get_if<Rejected>(&v->verdict);
    if (!rejected) continue;
    auto [it, _] = by_kind.try_emplace(rejected->reason, Deviation{rejected->reason, 0, {}});
    ++it->second.support;
    if (it->second.example_cases.size() < kMaxExampleCases) {
      it->second.example_cases.push_back(v->case_id);
    }
  }
  std::vector<Deviation> out;
  for (auto& [_, d] : by_kind) out.push_back(std::move(d));
  std::ranges::stable_sort(out, [](const Deviation& a, const Deviation& b) {
    if (a.support != b.support) return a.support > b.support;
    return to_string(a.kind) < to_string(b.kind);
  });
  return out;
}

std::string to_string(const Edit& edit) {
  return std::visit(
      [](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, AddEdge>) return "AddEdge(" + e.from + "," + e.to + ")";
        if constexpr (std::is_same_v<T, AddStart>) return "AddStart(" + e.event + ")";
        if constexpr (std::is_same_v<T, AddEnd>) return "AddEnd(" + e.event + ")";
      },
      edit);
}

ProposalSet propose_edits(std::span<const Deviation> deviations, std::size_t min_support) {
  ProposalSet set;
  for (const auto& d : deviations) {
    if (d.support < min_support) continue;
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, IllegalTransition>) {
            set.proposals.push_back({AddEdge{k.from, k.to}, d.support, d.kind});
          } else if constexpr (std::is_same_v<T, IllegalStart>) {
            set.proposals.push_back({AddStart{k.event}, d.support, d.kind});
          } else if constexpr (std::is_same_v<T, IllegalEnd>) {
            set.proposals.push_back({AddEnd{k.event}, d.support, d.kind});
          } else {
            set.mapping_review.push_back(d);
          }
        },
        d.kind);
  }
  return set;
}

BehavioralModel apply_edits(const BehavioralModel& model, std::span<const EditProposal> edits) {
  auto out = model;
  auto require = [&](const EventId& id, const Edit& edit) {
    if (!model.has_event(id)) {
      throw ModelError(to_string(edit) + " names unknown event '" + id + "'");
    }
  };
  for (const auto& p : edits) {
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, AddEdge>) {
            require(e.from, p.edit);
            require(e.to, p.edit);
            out.edges.insert({e.from, e.to});
          } else if constexpr (std::is_same_v<T, AddStart>) {
            require(e.event, p.edit);
            out.starts.insert(e.event);
          } else {
            require(e.event, p.edit);
            out.ends.insert(e.event);
          }
        },
        p.edit);
  }
  return out;
}

std::string write_proposals_csv(std::span<const EditProposal> proposals) {
  std::ostringstream os;
  os << "kind,from,to,support\n";
  for (const auto& p : proposals) {
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, AddEdge>) {
            os << "AddEdge," << e.from << ',' << e.to;
          } else if constexpr (std::is_same_v<T, AddStart>) {
            os << "AddStart,," << e.event;
          } else {
            os << "AddEnd," << e.event << ',';
          }
        },
        p.edit);
    os << ',' << p.support << '\n';
  }
  return os.str();
}

std::vector<EditProposal> read_proposals_csv(std::string_view text) {
  std::vector<EditProposal> out;
  bool have_header = false;
  for (const auto& line : detail::split_lines(text)) {
    const auto body = detail::trim(line.text);
    if (body.empty() || body.front() == '#') continue;
    if (!have_header) {
      if (body != "kind,from,to,support") bad_row(line.number, "expected header 'kind,from,to,support'");
      have_header = true;
      continue;
    }
    const auto f = detail::split_csv(body);
    if (f.size() != 4) bad_row(line.number, "expected 4 fields");
    std::size_t support = 0;
    auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), support);
    if (ec != std::errc{} || ptr != f[3].data() + f[3].size() || support == 0) {
      bad_row(line.number, "invalid support '" + f[3] + "'");
    }
    Edit edit;
    if (f[0] == "AddEdge" && !f[1].empty() && !f[2].empty()) {
      edit = AddEdge{f[1], f[2]};
    } else if (f[0] == "AddStart" && f[1].empty() && !f[2].empty()) {
      edit = AddStart{f[2]};
    } else if (f[0] == "AddEnd" && !f[1].empty() && f[2].empty()) {
      edit = AddEnd{f[1]};
    } else {
      bad_row(line.number, "malformed proposal '" + std::string(body) + "'");
    }
    out.push_back({edit, support, answered_by(edit)});
  }
  if (!have_header) bad_row(1, "missing header 'kind,from,to,support'");
  return out;
}

std::string render_enhanced(const BehavioralModel& enhanced, std::span<const EditProposal> applied) {
  std::map<std::string, std::string> notes;
  for (const auto& p : applied) {
    notes[edit_line(p.edit)] = "enhancement " + to_string(p.edit) + " answers " +
                               to_string(p.provenance) + ", support " + std::to_string(p.support);
  }
  return render_behavior(enhanced, notes);
}

Enhancement enhance(const BehavioralModel& model, std::span<const EditProposal> proposals,
                    std::span<const Trace> recheck, const ActivityMapping& mapping) {
  Enhancement result{apply_edits(model, proposals), {}};
  result.report.applied.assign(proposals.begin(), proposals.end());
  result.report.streams_before = enumerate_streams(model).streams.size();
  result.report.streams_after = enumerate_streams(result.model).streams.size();
  if (!recheck.empty()) result.report.recheck = check_traces(recheck, result.model, mapping);
  return result;
}

BehavioralModel refine_to_fixpoint(const BehavioralModel& model, std::span<const Trace> traces,
                                   const ActivityMapping& mapping, std::size_t min_support,
                                   std::size_t max_rounds) {
  auto current = model;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    const auto check = check_traces(traces, current, mapping);
    const auto deviations = aggregate_deviations(check.verdicts);
    const auto proposals = propose_edits(deviations, min_support).proposals;
    auto next = apply_edits(current, proposals);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

LogReadResult import_external_log(std::string_view text) {
  LogReadResult result;
  result.log.header.push_back("imported external log");
  std::optional<std::size_t> case_col, activity_col, time_col;
  bool have_header = false;

  struct Row {
    std::string activity;
    Timestamp timestamp;
  };
  std::map<std::string, std::vector<Row>> cases;

  for (const auto& line : detail::split_lines(text)) {
    const auto body = detail::trim(line.text);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = detail::split_csv(body);
    if (!have_header) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto name = detail::trim(fields[i]);
        if (name == "case_id") case_col = i;
        if (name == "activity") activity_col = i;
        if (name == "timestamp") time_col = i;
      }
      for (const auto& [col, name] : {std::pair{case_col, "case_id"}, std::pair{activity_col, "activity"},
                                      std::pair{time_col, "timestamp"}}) {
        if (!col) {
          result.errors.push_back({line.number, std::string("missing column '") + name + "'"});
        }
      }
      if (!result.errors.empty()) return result;
      have_header = true;
      continue;
    }
    const auto width = std::max({*case_col, *activity_col, *time_col}) + 1;
    if (fields.size() < width) {
      result.errors.push_back({line.number, "expected at least " + std::to_string(width) + " fields"});
      continue;
    }
    const auto case_id = std::string(detail::trim(fields[*case_col]));
    const auto activity = std::string(detail::trim(fields[*activity_col]));
    if (case_id.empty() || activity.empty()) {
      result.errors.push_back({line.number, "empty case_id or activity"});
      continue;
    }
    auto ts = parse_timestamp(detail::trim(fields[*time_col]));
    if (!ts) {
      result.errors.push_back({line.number, "unparseable timestamp '" + fields[*time_col] + "'"});
      continue;
    }
    cases[case_id].push_back({activity, *ts});
  }
  if (!have_header) {
    result.errors.push_back({1, "missing header 'case_id,activity,timestamp'"});
    return result;
  }

  for (auto& [case_id, rows] : cases) {
    std::ranges::stable_sort(rows, {}, &Row::timestamp);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      result.log.events.push_back({case_id, rows[i].activity, i, rows[i].timestamp, EventSource::Imported});
    }
  }
  return result;
}

}  // namespace thimac
