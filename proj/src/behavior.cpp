#include "thimac/behavior.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "text.hpp"

namespace thimac {

namespace {

[[noreturn]] void syntax(std::size_t line, std::size_t column, const std::string& msg) {
  throw DslError(ErrorKind::Syntax, line, column, msg);
}

std::string edge_text(const Edge& e) { return e.first + "->" + e.second; }

std::set<EventId> reachable_from(const BehavioralModel& model, const std::set<EventId>& seeds,
                                 bool forward) {
  std::set<EventId> seen(seeds.begin(), seeds.end());
  std::deque<EventId> queue(seeds.begin(), seeds.end());
  while (!queue.empty()) {
    auto cur = std::move(queue.front());
    queue.pop_front();
    for (const auto& [a, b] : model.edges) {
      const auto& here = forward ? a : b;
      const auto& there = forward ? b : a;
      if (here == cur && seen.insert(there).second) queue.push_back(there);
    }
  }
  return seen;
}

template <typename Set>
Set minus(const Set& a, const Set& b) {
  Set out;
  std::ranges::set_difference(a, b, std::inserter(out, out.end()));
  return out;
}

}  // namespace

bool BehavioralModel::has_event(std::string_view id) const {
  return std::ranges::find(events, id) != events.end();
}

std::vector<EventId> BehavioralModel::successors(std::string_view id) const {
  std::vector<EventId> out;
  for (auto it = edges.lower_bound(Edge{std::string(id), std::string{}});
       it != edges.end() && it->first == id; ++it) {
    out.push_back(it->second);
  }
  return out;
}

BehavioralModel load_behavior(std::string_view text, const DynamicModel& dynamic) {
  BehavioralModel model;
  model.dynamic_ref = dynamic.static_ref;
  model.events = dynamic.event_ids();
  bool named = false;

  auto require_event = [&](const detail::Token& token, std::size_t line) {
    if (!dynamic.find(token.text)) {
      throw DslError(ErrorKind::UnknownReference, line, token.column,
                     "unknown event '" + token.text + "'");
    }
  };

  for (const auto& line : detail::split_lines(text)) {
    const auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    const auto& keyword = tokens[0].text;
    if (keyword == "behavior") {
      if (named) syntax(line.number, tokens[0].column, "second 'behavior' declaration");
      if (tokens.size() != 2) syntax(line.number, tokens[0].column, "expected 'behavior <name>'");
      model.name = tokens[1].text;
      named = true;
      continue;
    }
    if (!named) syntax(line.number, tokens[0].column, "expected 'behavior <name>' first");
    if (keyword == "start" || keyword == "end") {
      if (tokens.size() != 2) {
        syntax(line.number, tokens[0].column, "expected '" + keyword + " <event-id>'");
      }
      require_event(tokens[1], line.number);
      auto& set = keyword == "start" ? model.starts : model.ends;
      if (!set.insert(tokens[1].text).second) {
        throw DslError(ErrorKind::DuplicateId, line.number, tokens[1].column,
                       "duplicate " + keyword + " '" + tokens[1].text + "'");
      }
    } else if (keyword == "edge") {
      if (tokens.size() != 4 || tokens[2].text != "->") {
        syntax(line.number, tokens[0].column, "expected 'edge <event-id> -> <event-id>'");
      }
      require_event(tokens[1], line.number);
      require_event(tokens[3], line.number);
      if (!model.edges.insert({tokens[1].text, tokens[3].text}).second) {
        throw DslError(ErrorKind::DuplicateId, line.number, tokens[0].column,
                       "duplicate edge " + tokens[1].text + " -> " + tokens[3].text);
      }
    } else {
      syntax(line.number, tokens[0].column, "unknown declaration '" + keyword + "'");
    }
  }

  const auto last_line = detail::split_lines(text).back().number;
  if (!named) syntax(1, 0, "missing 'behavior <name>' declaration");
  if (model.starts.empty()) throw DslError(ErrorKind::EmptySet, last_line, 0, "no 'start' event");
  if (model.ends.empty()) throw DslError(ErrorKind::EmptySet, last_line, 0, "no 'end' event");
  return model;
}

std::string render_behavior(const BehavioralModel& model,
                            const std::map<std::string, std::string>& line_notes) {
  std::ostringstream os;
  auto emit = [&](const std::string& line) {
    if (auto it = line_notes.find(line); it != line_notes.end()) os << "# " << it->second << '\n';
    os << line << '\n';
  };
  emit("behavior " + model.name);
  for (const auto& s : model.starts) emit("start " + s);
  for (const auto& e : model.ends) emit("end " + e);
  for (const auto& [a, b] : model.edges) emit("edge " + a + " -> " + b);
  return os.str();
}

ValidationReport validate_behavior(const BehavioralModel& model) {
  ValidationReport report;
  auto check = [&](const EventId& id, const std::string& where) {
    if (!model.has_event(id)) report.violation("unknown-event", where + " names unknown event '" + id + "'");
  };
  for (const auto& s : model.starts) check(s, "start");
  for (const auto& e : model.ends) check(e, "end");
  for (const auto& edge : model.edges) {
    check(edge.first, "edge " + edge_text(edge));
    check(edge.second, "edge " + edge_text(edge));
  }
  if (model.starts.empty()) report.violation("empty-starts", "behavior has no start event");
  if (model.ends.empty()) report.violation("empty-ends", "behavior has no end event");

  const auto forward = reachable_from(model, model.starts, true);
  const auto backward = reachable_from(model, model.ends, false);
  for (const auto& e : model.events) {
    if (!forward.contains(e)) {
      report.warning("unreachable", "event '" + e + "' is not reachable from any start");
    } else if (!backward.contains(e)) {
      report.warning("dead-end", "event '" + e + "' cannot reach any end");
    }
  }
  if (is_cyclic(model)) report.warning("cyclic", "behavior graph contains a cycle");
  return report;
}

bool is_cyclic(const BehavioralModel& model) {
  std::map<EventId, std::size_t> indegree;
  for (const auto& [a, b] : model.edges) {
    indegree[a];
    ++indegree[b];
  }
  std::deque<EventId> ready;
  for (const auto& [e, d] : indegree) {
    if (d == 0) ready.push_back(e);
  }
  std::size_t removed = 0;
  while (!ready.empty()) {
    auto cur = ready.front();
    ready.pop_front();
    ++removed;
    for (const auto& next : model.successors(cur)) {
      if (--indegree[next] == 0) ready.push_back(next);
    }
  }
  return removed != indegree.size();
}

StreamEnumeration enumerate_streams(const BehavioralModel& model,
                                    std::optional<std::size_t> max_len) {
  StreamEnumeration result;
  result.max_len = max_len.value_or(model.events.size());
  result.cyclic = is_cyclic(model);
  if (result.max_len == 0) return result;

  std::map<EventId, std::vector<EventId>> adjacency;
  for (const auto& [a, b] : model.edges) adjacency[a].push_back(b);

  struct Frame {
    EventId node;
    std::size_t next_child = 0;
  };
  for (const auto& start : model.starts) {
    std::vector<Frame> stack{{start}};
    std::set<EventId> on_path{start};
    if (model.ends.contains(start)) result.streams.push_back({{start}});
    while (!stack.empty()) {
      auto& top = stack.back();
      const auto& children = adjacency[top.node];
      if (stack.size() >= result.max_len || top.next_child >= children.size()) {
        on_path.erase(top.node);
        stack.pop_back();
        continue;
      }
      const auto& child = children[top.next_child++];
      if (on_path.contains(child)) continue;
      stack.push_back({child});
      on_path.insert(child);
      if (model.ends.contains(child)) {
        StreamType stream;
        for (const auto& f : stack) stream.events.push_back(f.node);
        result.streams.push_back(std::move(stream));
      }
    }
  }
  std::ranges::sort(result.streams);
  return result;
}

bool BehaviorDiff::empty() const {
  return events_only_a.empty() && events_only_b.empty() && edges_only_a.empty() &&
         edges_only_b.empty() && starts_only_a.empty() && starts_only_b.empty() &&
         ends_only_a.empty() && ends_only_b.empty();
}

BehaviorDiff diff_behaviors(const BehavioralModel& a, const BehavioralModel& b) {
  const std::set<EventId> ea(a.events.begin(), a.events.end());
  const std::set<EventId> eb(b.events.begin(), b.events.end());
  BehaviorDiff diff;
  diff.events_only_a = minus(ea, eb);
  diff.events_only_b = minus(eb, ea);
  diff.edges_only_a = minus(a.edges, b.edges);
  diff.edges_only_b = minus(b.edges, a.edges);
  diff.starts_only_a = minus(a.starts, b.starts);
  diff.starts_only_b = minus(b.starts, a.starts);
  diff.ends_only_a = minus(a.ends, b.ends);
  diff.ends_only_b = minus(b.ends, a.ends);
  return diff;
}

std::string format_diff_text(const BehaviorDiff& diff) {
  std::ostringstream os;
  auto list = [&](const std::string& title, const auto& items, auto render) {
    os << title << ": ";
    if (items.empty()) {
      os << "(none)";
    } else {
      std::vector<std::string> parts;
      for (const auto& item : items) parts.push_back(render(item));
      os << detail::join(parts, ", ");
    }
    os << '\n';
  };
  auto id = [](const EventId& e) { return e; };
  list("events only in a", diff.events_only_a, id);
  list("events only in b", diff.events_only_b, id);
  list("edges only in a", diff.edges_only_a, edge_text);
  list("edges only in b", diff.edges_only_b, edge_text);
  list("starts only in a", diff.starts_only_a, id);
  list("starts only in b", diff.starts_only_b, id);
  list("ends only in a", diff.ends_only_a, id);
  list("ends only in b", diff.ends_only_b, id);
  if (diff.alphabet_mismatch()) os << "note: event alphabets differ\n";
  return os.str();
}

std::string format_diff_csv(const BehaviorDiff& diff) {
  std::ostringstream os;
  os << "kind,side,element\n";
  auto rows = [&](const char* kind, const char* side, const auto& items, auto render) {
    for (const auto& item : items) os << kind << ',' << side << ',' << render(item) << '\n';
  };
  auto id = [](const EventId& e) { return e; };
  rows("event", "a", diff.events_only_a, id);
  rows("event", "b", diff.events_only_b, id);
  rows("edge", "a", diff.edges_only_a, edge_text);
  rows("edge", "b", diff.edges_only_b, edge_text);
  rows("start", "a", diff.starts_only_a, id);
  rows("start", "b", diff.starts_only_b, id);
  rows("end", "a", diff.ends_only_a, id);
  rows("end", "b", diff.ends_only_b, id);
  return os.str();
}

std::string export_behavior_dot(const BehavioralModel& model, const BehaviorDiff* overlay) {
  std::ostringstream os;
  os << "digraph " << detail::dot_quote(model.name) << " {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=ellipse];\n";

  std::vector<EventId> nodes = model.events;
  if (overlay) {
    // Events known only to the other model still need a node for removed edges.
    for (const auto& [a, b] : overlay->edges_only_a) {
      for (const auto& e : {a, b}) {
        if (std::ranges::find(nodes, e) == nodes.end()) nodes.push_back(e);
      }
    }
  }
  std::ranges::sort(nodes);
  for (const auto& e : nodes) {
    std::vector<std::string> attrs;
    if (model.starts.contains(e)) attrs.emplace_back("style=filled, fillcolor=lightgrey");
    if (model.ends.contains(e)) attrs.emplace_back("shape=doublecircle");
    if (overlay) {
      if (overlay->starts_only_b.contains(e) || overlay->ends_only_b.contains(e) ||
          overlay->events_only_b.contains(e)) {
        attrs.emplace_back("color=red");
      } else if (overlay->starts_only_a.contains(e) || overlay->ends_only_a.contains(e)) {
        attrs.emplace_back("color=grey, xlabel=\"removed " +
                           std::string(overlay->starts_only_a.contains(e) ? "start" : "end") +
                           "\"");
      }
    }
    os << "  " << detail::dot_quote(e);
    if (!attrs.empty()) os << " [" << detail::join(attrs, ", ") << ']';
    os << ";\n";
  }
  for (const auto& edge : model.edges) {
    os << "  " << detail::dot_quote(edge.first) << " -> " << detail::dot_quote(edge.second);
    if (overlay && overlay->edges_only_b.contains(edge)) os << " [color=red, penwidth=2]";
    os << ";\n";
  }
  if (overlay) {
    for (const auto& edge : overlay->edges_only_a) {
      os << "  " << detail::dot_quote(edge.first) << " -> " << detail::dot_quote(edge.second)
         << " [color=grey, style=dashed];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace thimac
