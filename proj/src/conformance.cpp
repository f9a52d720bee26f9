#include "thimac/conformance.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <type_traits>

#include "text.hpp"

namespace thimac {

namespace {

// Reachability through chains of silent events, precomputed per model.
class SilentGraph {
 public:
  SilentGraph(const BehavioralModel& model, const std::set<EventId>& silent)
      : model_(model), silent_(silent) {
    std::set<EventId> nodes(model.events.begin(), model.events.end());
    for (const auto& [a, b] : model.edges) nodes.insert({a, b});
    nodes.insert(model.starts.begin(), model.starts.end());
    nodes.insert(model.ends.begin(), model.ends.end());
    for (const auto& n : nodes) hops_[n] = explore(model.successors(n));
    entry_ = explore({model.starts.begin(), model.starts.end()});

    // Backward closure from the end set: events from which some end is reachable.
    std::deque<EventId> queue(model.ends.begin(), model.ends.end());
    co_reachable_.insert(model.ends.begin(), model.ends.end());
    while (!queue.empty()) {
      auto cur = queue.front();
      queue.pop_front();
      for (const auto& [a, b] : model.edges) {
        if (b == cur && co_reachable_.insert(a).second) queue.push_back(a);
      }
    }
  }

  /// Events observable right after `from`, skipping any silent chain.
  const std::set<EventId>& hop_targets(const EventId& from) const {
    static const std::set<EventId> none;
    auto it = hops_.find(from);
    return it == hops_.end() ? none : it->second;
  }

  const std::set<EventId>& entry_targets() const { return entry_; }

  bool can_exit(const EventId& from) const { return exit_path(from).has_value(); }

  bool can_reach_end(const EventId& from) const { return co_reachable_.contains(from); }

  /// Silent events between `from` and `to` on a shortest connecting chain.
  std::vector<EventId> gap_path(const EventId& from, const EventId& to) const {
    return *search(model_.successors(from), [&](const EventId& e) { return e == to; }, false);
  }

  /// Silent events leading from a start into `to` (empty when `to` is a start).
  std::vector<EventId> entry_path(const EventId& to) const {
    if (model_.starts.contains(to)) return {};
    return *search({model_.starts.begin(), model_.starts.end()},
                   [&](const EventId& e) { return e == to; }, false);
  }

  /// Silent events after `from` that reach an end; nullopt when impossible.
  std::optional<std::vector<EventId>> exit_path(const EventId& from) const {
    if (model_.ends.contains(from)) return std::vector<EventId>{};
    return search(model_.successors(from),
                  [&](const EventId& e) { return silent_.contains(e) && model_.ends.contains(e); },
                  true);
  }

 private:
  std::set<EventId> explore(const std::vector<EventId>& first) const {
    std::set<EventId> targets;
    std::set<EventId> visited;
    std::deque<EventId> queue;
    for (const auto& e : first) {
      targets.insert(e);
      if (silent_.contains(e) && visited.insert(e).second) queue.push_back(e);
    }
    while (!queue.empty()) {
      auto cur = queue.front();
      queue.pop_front();
      for (const auto& next : model_.successors(cur)) {
        targets.insert(next);
        if (silent_.contains(next) && visited.insert(next).second) queue.push_back(next);
      }
    }
    return targets;
  }

  // BFS over silent events starting at `first`. Returns the silent chain before
  // the goal, or the chain including the goal when `include_goal` is set.
  template <typename Goal>
  std::optional<std::vector<EventId>> search(const std::vector<EventId>& first, Goal goal,
                                             bool include_goal) const {
    std::map<EventId, EventId> parent;
    std::set<EventId> visited;
    std::deque<EventId> queue;
    auto unwind = [&](EventId node, bool keep_node) {
      std::vector<EventId> chain;
      if (keep_node) chain.push_back(node);
      auto it = parent.find(node);
      while (it != parent.end()) {
        chain.push_back(it->second);
        it = parent.find(it->second);
      }
      std::ranges::reverse(chain);
      return chain;
    };
    for (const auto& e : first) {
      if (goal(e)) return include_goal ? std::vector<EventId>{e} : std::vector<EventId>{};
    }
    for (const auto& e : first) {
      if (silent_.contains(e) && visited.insert(e).second) queue.push_back(e);
    }
    while (!queue.empty()) {
      auto cur = queue.front();
      queue.pop_front();
      for (const auto& next : model_.successors(cur)) {
        if (goal(next)) {
          auto chain = unwind(cur, true);
          if (include_goal) chain.push_back(next);
          return chain;
        }
        if (silent_.contains(next) && visited.insert(next).second) {
          parent.emplace(next, cur);
          queue.push_back(next);
        }
      }
    }
    return std::nullopt;
  }

  const BehavioralModel& model_;
  const std::set<EventId>& silent_;
  std::map<EventId, std::set<EventId>> hops_;
  std::set<EventId> entry_;
  std::set<EventId> co_reachable_;
};

std::set<EventId> intersect(const std::set<EventId>& a, const std::set<EventId>& b) {
  std::set<EventId> out;
  std::ranges::set_intersection(a, b, std::inserter(out, out.end()));
  return out;
}

// Frontier reached by the next observation, or a deviation when it dies.
struct Advance {
  std::set<EventId> frontier;
  std::optional<DeviationKind> deviation;
};

Advance advance(const SilentGraph& graph, const std::set<EventId>* previous,
                std::string_view symbol, const BehavioralModel& model,
                const ActivityMapping& mapping) {
  auto candidates = mapping.resolve(symbol, model);
  if (!candidates) return {{}, UnknownActivity{std::string(symbol)}};
  if (!previous) {
    auto next = intersect(*candidates, graph.entry_targets());
    if (next.empty()) return {{}, IllegalStart{*candidates->begin()}};
    return {std::move(next), std::nullopt};
  }
  std::set<EventId> next;
  for (const auto& from : *previous) {
    auto reach = intersect(*candidates, graph.hop_targets(from));
    next.insert(reach.begin(), reach.end());
  }
  if (next.empty()) return {{}, IllegalTransition{*previous->begin(), *candidates->begin()}};
  return {std::move(next), std::nullopt};
}

// Deterministic resolution through the layers, ending in `finals`.
std::vector<EventId> reconstruct(const SilentGraph& graph,
                                 const std::vector<std::set<EventId>>& layers,
                                 const std::set<EventId>& finals) {
  const auto n = layers.size();
  std::vector<std::set<EventId>> viable(n);
  viable[n - 1] = intersect(layers[n - 1], finals);
  for (std::size_t i = n - 1; i-- > 0;) {
    for (const auto& e : layers[i]) {
      if (!intersect(graph.hop_targets(e), viable[i + 1]).empty()) viable[i].insert(e);
    }
  }
  std::vector<EventId> path;
  EventId current = *viable[0].begin();
  auto prefix = graph.entry_path(current);
  path.insert(path.end(), prefix.begin(), prefix.end());
  path.push_back(current);
  for (std::size_t i = 1; i < n; ++i) {
    const auto options = intersect(graph.hop_targets(current), viable[i]);
    const auto next = *options.begin();
    auto gap = graph.gap_path(current, next);
    path.insert(path.end(), gap.begin(), gap.end());
    path.push_back(next);
    current = next;
  }
  return path;
}

// Verdict for a case whose observations all survived.
Verdict classify_end(const SilentGraph& graph, const std::vector<std::set<EventId>>& layers) {
  if (layers.empty()) return Incomplete{};
  const auto& last = layers.back();
  std::set<EventId> exits;
  std::set<EventId> prefixes;
  for (const auto& e : last) {
    if (graph.can_exit(e)) exits.insert(e);
    if (graph.can_reach_end(e)) prefixes.insert(e);
  }
  if (!exits.empty()) {
    auto path = reconstruct(graph, layers, exits);
    auto tail = *graph.exit_path(path.back());
    path.insert(path.end(), tail.begin(), tail.end());
    return Accepted{std::move(path)};
  }
  if (!prefixes.empty()) return Incomplete{reconstruct(graph, layers, prefixes)};
  return Rejected{IllegalEnd{*last.begin()}, layers.size() - 1};
}

}  // namespace

std::optional<std::set<EventId>> ActivityMapping::resolve(std::string_view symbol,
                                                          const BehavioralModel& model) const {
  if (auto it = candidates.find(std::string(symbol)); it != candidates.end()) return it->second;
  if (model.has_event(symbol)) return std::set<EventId>{std::string(symbol)};
  return std::nullopt;
}

ActivityMapping load_mapping(std::string_view text, const DynamicModel& dynamic) {
  ActivityMapping mapping;
  auto require = [&](const std::string& id, std::size_t line, std::size_t column) {
    if (id.empty()) throw DslError(ErrorKind::Syntax, line, column, "empty event id");
    if (!dynamic.find(id)) {
      throw DslError(ErrorKind::UnknownReference, line, column, "unknown event '" + id + "'");
    }
  };
  for (const auto& line : detail::split_lines(text)) {
    const auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    if (tokens[0].text == "map") {
      if (tokens.size() < 3 || tokens[2].text != "->") {
        throw DslError(ErrorKind::Syntax, line.number, tokens[0].column,
                       "expected 'map <activity> -> <id>[|<id>...]'");
      }
      if (tokens.size() == 3) {
        throw DslError(ErrorKind::EmptySet, line.number, tokens[2].column,
                       "activity '" + tokens[1].text + "' maps to no event");
      }
      if (tokens.size() > 4) {
        throw DslError(ErrorKind::Syntax, line.number, tokens[4].column,
                       "separate candidate events with '|', not spaces");
      }
      const auto& label = tokens[1].text;
      if (mapping.candidates.contains(label)) {
        throw DslError(ErrorKind::DuplicateId, line.number, tokens[1].column,
                       "activity '" + label + "' mapped twice");
      }
      std::set<EventId> targets;
      std::string_view list = tokens[3].text;
      std::size_t column = tokens[3].column;
      std::size_t pos = 0;
      while (true) {
        auto bar = list.find('|', pos);
        auto id = std::string(list.substr(pos, bar == std::string_view::npos ? bar : bar - pos));
        require(id, line.number, column + pos);
        targets.insert(id);
        if (bar == std::string_view::npos) break;
        pos = bar + 1;
      }
      mapping.candidates.emplace(label, std::move(targets));
    } else if (tokens[0].text == "silent") {
      if (tokens.size() < 2) {
        throw DslError(ErrorKind::Syntax, line.number, tokens[0].column,
                       "expected 'silent <id>[, <id>...]'");
      }
      for (const auto& item : detail::split_list(line, tokens[1].column)) {
        require(item.text, line.number, item.column);
        mapping.silent.insert(item.text);
      }
    } else {
      throw DslError(ErrorKind::Syntax, line.number, tokens[0].column,
                     "unknown declaration '" + tokens[0].text + "'");
    }
  }
  for (const auto& e : dynamic.events) {
    if (!e.observable) mapping.silent.insert(e.id);
  }
  return mapping;
}

std::string render_mapping(const ActivityMapping& mapping) {
  std::ostringstream os;
  for (const auto& [label, targets] : mapping.candidates) {
    os << "map " << label << " -> " << detail::join(targets, "|") << '\n';
  }
  if (!mapping.silent.empty()) os << "silent " << detail::join(mapping.silent, ", ") << '\n';
  return os.str();
}

std::string to_string(const DeviationKind& kind) {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, IllegalStart>) return "IllegalStart(" + k.event + ")";
        if constexpr (std::is_same_v<T, IllegalTransition>) {
          return "IllegalTransition(" + k.from + "," + k.to + ")";
        }
        if constexpr (std::is_same_v<T, IllegalEnd>) return "IllegalEnd(" + k.event + ")";
        if constexpr (std::is_same_v<T, UnknownActivity>) return "UnknownActivity(" + k.label + ")";
      },
      kind);
}

VerdictCategory category(const Verdict& verdict) {
  return static_cast<VerdictCategory>(verdict.index());
}

std::string_view to_string(VerdictCategory c) {
  switch (c) {
    case VerdictCategory::Accepted:
      return "Accepted";
    case VerdictCategory::Incomplete:
      return "Incomplete";
    case VerdictCategory::Rejected:
      return "Rejected";
  }
  return "?";
}

Verdict check_trace(std::span<const std::string> symbols, const BehavioralModel& model,
                    const ActivityMapping& mapping) {
  const SilentGraph graph(model, mapping.silent);
  std::vector<std::set<EventId>> layers;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    auto step = advance(graph, layers.empty() ? nullptr : &layers.back(), symbols[i], model, mapping);
    if (step.deviation) return Rejected{std::move(*step.deviation), i};
    layers.push_back(std::move(step.frontier));
  }
  return classify_end(graph, layers);
}

Verdict check_trace(const Trace& trace, const BehavioralModel& model,
                    const ActivityMapping& mapping) {
  std::vector<std::string> symbols;
  symbols.reserve(trace.steps.size());
  for (const auto& s : trace.steps) symbols.push_back(s.symbol);
  return check_trace(symbols, model, mapping);
}

LogCheck check_traces(std::span<const Trace> traces, const BehavioralModel& model,
                      const ActivityMapping& mapping) {
  LogCheck result;
  for (const auto& trace : traces) {
    auto verdict = check_trace(trace, model, mapping);
    switch (category(verdict)) {
      case VerdictCategory::Accepted:
        ++result.accepted;
        break;
      case VerdictCategory::Incomplete:
        ++result.incomplete;
        break;
      case VerdictCategory::Rejected:
        ++result.rejected;
        break;
    }
    result.verdicts.push_back({trace.case_id, std::move(verdict)});
  }
  std::ranges::stable_sort(result.verdicts, {}, &CaseVerdict::case_id);
  return result;
}

LogCheck check_log(const EventLog& log, const BehavioralModel& model,
                   const ActivityMapping& mapping) {
  const auto traces = traces_of(log);
  return check_traces(traces, model, mapping);
}

std::string format_verdicts_csv(const LogCheck& check) {
  std::ostringstream os;
  os << "case_id,verdict,detail,index\n";
  for (const auto& [case_id, verdict] : check.verdicts) {
    os << detail::csv_field(case_id) << ',' << to_string(category(verdict)) << ',';
    if (const auto* a = std::get_if<Accepted>(&verdict)) {
      os << detail::join(a->resolution, " ") << ",\n";
    } else if (const auto* p = std::get_if<Incomplete>(&verdict)) {
      os << detail::join(p->resolution, " ") << ",\n";
    } else {
      const auto& r = std::get<Rejected>(verdict);
      os << detail::csv_field(to_string(r.reason)) << ',' << r.index << '\n';
    }
  }
  return os.str();
}

std::string format_summary(const LogCheck& check) {
  return std::to_string(check.accepted) + " accepted, " + std::to_string(check.rejected) +
         " rejected, " + std::to_string(check.incomplete) + " incomplete";
}

MonitorState start_monitor(std::string case_id) { return MonitorState{std::move(case_id), {}, 0, {}, {}}; }

StepOutcome step_monitor(MonitorState state, std::string_view symbol, const BehavioralModel& model,
                         const ActivityMapping& mapping) {
  if (state.rejection) return {std::move(state), std::nullopt};
  const SilentGraph graph(model, mapping.silent);
  auto step = advance(graph, state.step_count == 0 ? nullptr : &state.frontier, symbol, model, mapping);
  const auto index = state.step_count++;
  if (step.deviation) {
    state.frontier.clear();
    state.rejection = Rejected{std::move(*step.deviation), index};
    auto deviation = state.rejection;
    return {std::move(state), std::move(deviation)};
  }
  state.frontier = std::move(step.frontier);
  state.history.push_back(state.frontier);
  return {std::move(state), std::nullopt};
}

Verdict finalize_monitor(const MonitorState& state, const BehavioralModel& model,
                         const ActivityMapping& mapping) {
  if (state.rejection) return *state.rejection;
  const SilentGraph graph(model, mapping.silent);
  return classify_end(graph, state.history);
}

}  // namespace thimac
