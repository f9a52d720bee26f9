#include "thimac/events.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "static_dot.hpp"
#include "text.hpp"

namespace thimac {

namespace {

[[noreturn]] void syntax(std::size_t line, std::size_t column, const std::string& msg) {
  throw DslError(ErrorKind::Syntax, line, column, msg);
}

std::optional<ArcRef> parse_arc(std::string_view text) {
  for (const auto* arrow : {"->", "~>"}) {
    auto pos = text.find(arrow);
    if (pos == std::string_view::npos) continue;
    ArcRef ref{std::string(detail::trim(text.substr(0, pos))),
               std::string(detail::trim(text.substr(pos + 2))), arrow[0] == '~'};
    if (ref.from.empty() || ref.to.empty()) return std::nullopt;
    return ref;
  }
  return std::nullopt;
}

bool arc_exists(const StaticModel& model, const ArcRef& arc) {
  return arc.trigger ? model.has_trigger(arc.from, arc.to) : model.has_flow(arc.from, arc.to);
}

std::string arc_text(const ArcRef& arc) { return arc.from + (arc.trigger ? "~>" : "->") + arc.to; }

std::size_t component_count(const EventDef& event, const StaticModel& model) {
  std::map<std::string, std::string> parent;
  for (const auto& s : event.region_stages) parent[s] = s;
  auto find = [&](std::string x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  auto unite = [&](const std::string& a, const std::string& b) {
    if (parent.contains(a) && parent.contains(b)) parent[find(a)] = find(b);
  };
  for (const auto& f : model.flows) unite(f.from, f.to);
  for (const auto& t : model.triggers) unite(t.from, t.to);
  std::set<std::string> roots;
  for (const auto& [s, _] : parent) roots.insert(find(s));
  return roots.size();
}

}  // namespace

const EventDef* DynamicModel::find(std::string_view id) const {
  auto it = std::ranges::find(events, id, &EventDef::id);
  return it == events.end() ? nullptr : &*it;
}

std::vector<std::string> DynamicModel::event_ids() const {
  std::vector<std::string> ids;
  for (const auto& e : events) ids.push_back(e.id);
  return ids;
}

DynamicModel load_events(std::string_view text, const StaticModel& model) {
  DynamicModel dynamic{model.name, {}};
  std::size_t event_line = 0;
  bool have_region = false;
  bool have_arcs = false;

  auto close_event = [&] {
    if (!dynamic.events.empty() && dynamic.events.back().region_stages.empty()) {
      throw DslError(ErrorKind::EmptySet, event_line, 0,
                     "event '" + dynamic.events.back().id + "' has an empty region");
    }
  };

  for (const auto& line : detail::split_lines(text)) {
    const auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    const auto& keyword = tokens[0].text;

    if (keyword == "event") {
      close_event();
      const bool silent = tokens.size() == 4 && tokens[3].text == "silent";
      if ((tokens.size() != 3 && !silent) || !tokens[2].quoted) {
        syntax(line.number, tokens[0].column, "expected 'event <id> \"<label>\" [silent]'");
      }
      if (!detail::is_identifier(tokens[1].text)) {
        syntax(line.number, tokens[1].column, "invalid event id '" + tokens[1].text + "'");
      }
      if (dynamic.find(tokens[1].text)) {
        throw DslError(ErrorKind::DuplicateId, line.number, tokens[1].column,
                       "duplicate event '" + tokens[1].text + "'");
      }
      dynamic.events.push_back({tokens[1].text, tokens[2].text, {}, {}, !silent});
      event_line = line.number;
      have_region = have_arcs = false;
    } else if (keyword == "region" || keyword == "arcs") {
      if (dynamic.events.empty()) {
        syntax(line.number, tokens[0].column, "'" + keyword + "' before any 'event'");
      }
      auto& event = dynamic.events.back();
      const bool region = keyword == "region";
      if (region ? have_region : have_arcs) {
        syntax(line.number, tokens[0].column, "second '" + keyword + "' line for " + event.id);
      }
      if (!region && !have_region) {
        syntax(line.number, tokens[0].column, "'arcs' must follow the 'region' line");
      }
      (region ? have_region : have_arcs) = true;
      if (tokens.size() < 2) {
        if (region) {
          throw DslError(ErrorKind::EmptySet, line.number, tokens[0].column,
                         "event '" + event.id + "' has an empty region");
        }
        continue;
      }
      for (const auto& item : detail::split_list(line, tokens[1].column)) {
        if (item.text.empty()) syntax(line.number, item.column, "empty list item");
        if (region) {
          if (!model.find_stage(item.text)) {
            throw DslError(ErrorKind::UnknownReference, line.number, item.column,
                           "unknown stage '" + item.text + "'");
          }
          if (std::ranges::find(event.region_stages, item.text) != event.region_stages.end()) {
            throw DslError(ErrorKind::DuplicateId, line.number, item.column,
                           "stage '" + item.text + "' listed twice");
          }
          event.region_stages.push_back(item.text);
        } else {
          auto arc = parse_arc(item.text);
          if (!arc) syntax(line.number, item.column, "expected '<from>-><to>' or '<from>~><to>'");
          if (!arc_exists(model, *arc)) {
            throw DslError(ErrorKind::UnknownReference, line.number, item.column,
                           "unknown arc '" + item.text + "'");
          }
          event.region_arcs.push_back(std::move(*arc));
        }
      }
    } else {
      syntax(line.number, tokens[0].column, "unknown declaration '" + keyword + "'");
    }
  }
  close_event();
  return dynamic;
}

std::string render_events(const DynamicModel& dynamic) {
  std::ostringstream os;
  for (const auto& e : dynamic.events) {
    os << "event " << e.id << ' ' << detail::dot_quote(e.label) << (e.observable ? "" : " silent")
       << '\n';
    os << "region " << detail::join(e.region_stages, ", ") << '\n';
    if (!e.region_arcs.empty()) {
      std::vector<std::string> arcs;
      for (const auto& a : e.region_arcs) arcs.push_back(arc_text(a));
      os << "arcs " << detail::join(arcs, ", ") << '\n';
    }
  }
  return os.str();
}

ValidationReport validate_regions(const DynamicModel& dynamic, const StaticModel& model,
                                  RegionOptions options) {
  ValidationReport report;
  std::set<std::string> ids;
  std::map<std::string, std::vector<std::string>> owners;

  for (const auto& event : dynamic.events) {
    if (!ids.insert(event.id).second) {
      report.violation("duplicate-id", "duplicate event '" + event.id + "'");
    }
    if (event.region_stages.empty()) {
      report.violation("empty-region", "event '" + event.id + "' has an empty region");
      continue;
    }
    bool resolved = true;
    for (const auto& s : event.region_stages) {
      if (!model.find_stage(s)) {
        report.violation("unknown-stage", "event '" + event.id + "' names unknown stage '" + s + "'");
        resolved = false;
      }
      owners[s].push_back(event.id);
    }
    for (const auto& arc : event.region_arcs) {
      if (!arc_exists(model, arc)) {
        report.violation("unknown-arc",
                         "event '" + event.id + "' names unknown arc '" + arc_text(arc) + "'");
        resolved = false;
      }
      const auto in_region = [&](const std::string& s) {
        return std::ranges::find(event.region_stages, s) != event.region_stages.end();
      };
      if (!in_region(arc.from) || !in_region(arc.to)) {
        report.violation("arc-outside-region", "event '" + event.id + "' lists arc '" +
                                                   arc_text(arc) + "' leaving its region");
      }
    }
    if (resolved && component_count(event, model) > 1) {
      report.violation("disconnected-region",
                       "event '" + event.id + "' region is not weakly connected");
    }
  }

  for (const auto& [stage, events] : owners) {
    if (events.size() < 2) continue;
    const auto msg = "stage '" + stage + "' is shared by " + detail::join(events, ", ");
    if (options.strict_partition) {
      report.violation("overlap", msg);
    } else {
      report.warning("overlap", msg);
    }
  }
  for (const auto& s : region_coverage(dynamic, model).uncovered) {
    report.warning("uncovered-stage", "stage '" + s + "' lies in no event region");
  }
  return report;
}

RegionCoverage region_coverage(const DynamicModel& dynamic, const StaticModel& model) {
  std::set<std::string> in_region;
  for (const auto& e : dynamic.events) in_region.insert(e.region_stages.begin(), e.region_stages.end());
  RegionCoverage coverage;
  for (const auto& s : model.stages) {
    (in_region.contains(s.id) ? coverage.covered : coverage.uncovered).push_back(s.id);
  }
  std::ranges::sort(coverage.covered);
  std::ranges::sort(coverage.uncovered);
  return coverage;
}

std::string export_dynamic_dot(const DynamicModel& dynamic, const StaticModel& model) {
  std::ostringstream os;
  os << "digraph " << detail::dot_quote(model.name) << " {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=box];\n";

  std::set<std::string> placed;
  for (const auto& event : dynamic.events) {
    os << "  subgraph " << detail::dot_quote("cluster_event_" + event.id) << " {\n";
    auto label = event.id + ": " + event.label;
    if (!event.observable) label += " [silent]";
    os << "    label=" << detail::dot_quote(label) << ";\n";
    if (!event.observable) os << "    style=dotted;\n";
    std::vector<std::string> stages = event.region_stages;
    std::ranges::sort(stages);
    for (const auto& id : stages) {
      const auto* stage = model.find_stage(id);
      if (!stage || !placed.insert(id).second) continue;
      detail::write_stage_node(os, *stage, 2);
    }
    os << "  }\n";
  }
  detail::write_machine_clusters(
      os, model, [&](const Stage& s) { return !placed.contains(s.id); }, true, 1);
  detail::write_arcs(os, model);
  os << "}\n";
  return os.str();
}

}  // namespace thimac
