#include "thimac/model.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "static_dot.hpp"
#include "text.hpp"

namespace thimac {

namespace {

constexpr std::string_view kKindNames[] = {"create", "process", "release", "transfer", "receive"};

struct PendingRef {
  std::string id;
  std::size_t line;
  std::size_t column;
};

[[noreturn]] void syntax(std::size_t line, std::size_t column, const std::string& msg) {
  throw DslError(ErrorKind::Syntax, line, column, msg);
}

// Union-find over stage indices, used for flow-chain membership.
class Chains {
 public:
  explicit Chains(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::string_view to_string(StageKind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<StageKind> parse_stage_kind(std::string_view text) {
  for (int i = 0; i < 5; ++i) {
    if (kKindNames[i] == text) return static_cast<StageKind>(i);
  }
  return std::nullopt;
}

std::string parent_path(std::string_view dotted_id) {
  auto dot = dotted_id.rfind('.');
  if (dot == std::string_view::npos) return {};
  return std::string(dotted_id.substr(0, dot));
}

const Stage* StaticModel::find_stage(std::string_view id) const {
  auto it = std::ranges::find(stages, id, &Stage::id);
  return it == stages.end() ? nullptr : &*it;
}

const Machine* StaticModel::find_machine(std::string_view id) const {
  auto it = std::ranges::find(machines, id, &Machine::id);
  return it == machines.end() ? nullptr : &*it;
}

bool StaticModel::has_flow(std::string_view from, std::string_view to) const {
  return std::ranges::any_of(flows, [&](const FlowArc& f) { return f.from == from && f.to == to; });
}

bool StaticModel::has_trigger(std::string_view from, std::string_view to) const {
  return std::ranges::any_of(triggers,
                             [&](const TriggerArc& t) { return t.from == from && t.to == to; });
}

StaticModel parse_model(std::string_view text) {
  StaticModel model;
  bool named = false;
  std::set<std::string> ids;
  std::vector<PendingRef> machine_refs;
  std::vector<PendingRef> arc_refs;

  for (const auto& line : detail::split_lines(text)) {
    const auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    const auto& keyword = tokens[0].text;

    if (keyword == "model") {
      if (named) syntax(line.number, tokens[0].column, "second 'model' declaration");
      if (tokens.size() != 2) syntax(line.number, tokens[0].column, "expected 'model <name>'");
      model.name = tokens[1].text;
      named = true;
      continue;
    }
    if (!named) syntax(line.number, tokens[0].column, "expected 'model <name>' first");

    if (keyword == "machine") {
      if (tokens.size() < 2 || tokens.size() > 3 || (tokens.size() == 3 && !tokens[2].quoted)) {
        syntax(line.number, tokens[0].column, "expected 'machine <dotted-id> [\"<label>\"]'");
      }
      const auto& id = tokens[1];
      if (!detail::is_dotted_identifier(id.text)) {
        syntax(line.number, id.column, "invalid machine id '" + id.text + "'");
      }
      if (!ids.insert(id.text).second) {
        throw DslError(ErrorKind::DuplicateId, line.number, id.column,
                       "duplicate id '" + id.text + "'");
      }
      Machine m{id.text, tokens.size() == 3 ? tokens[2].text : std::string{}, std::nullopt};
      if (auto parent = parent_path(id.text); !parent.empty()) {
        m.parent = parent;
        machine_refs.push_back({parent, line.number, id.column});
      }
      model.machines.push_back(std::move(m));
    } else if (keyword == "stage") {
      if (tokens.size() < 4 || tokens.size() > 5 || tokens[2].text != "kind" ||
          (tokens.size() == 5 && tokens[4].text != "store")) {
        syntax(line.number, tokens[0].column,
               "expected 'stage <dotted-id> kind <kind> [store]'");
      }
      const auto& id = tokens[1];
      if (!detail::is_dotted_identifier(id.text) || parent_path(id.text).empty()) {
        syntax(line.number, id.column, "stage id '" + id.text + "' must be <machine>.<name>");
      }
      auto kind = parse_stage_kind(tokens[3].text);
      if (!kind) syntax(line.number, tokens[3].column, "unknown stage kind '" + tokens[3].text + "'");
      if (!ids.insert(id.text).second) {
        throw DslError(ErrorKind::DuplicateId, line.number, id.column,
                       "duplicate id '" + id.text + "'");
      }
      machine_refs.push_back({parent_path(id.text), line.number, id.column});
      model.stages.push_back({id.text, *kind, tokens.size() == 5});
    } else if (keyword == "flow" || keyword == "trigger") {
      const bool flow = keyword == "flow";
      const std::string arrow = flow ? "->" : "~>";
      if (tokens.size() != 4 || tokens[2].text != arrow) {
        syntax(line.number, tokens[0].column,
               "expected '" + keyword + " <stage-id> " + arrow + " <stage-id>'");
      }
      const auto& from = tokens[1].text;
      const auto& to = tokens[3].text;
      const bool dup = flow ? model.has_flow(from, to) : model.has_trigger(from, to);
      if (dup) {
        throw DslError(ErrorKind::DuplicateId, line.number, tokens[0].column,
                       "duplicate " + keyword + " " + from + " " + arrow + " " + to);
      }
      arc_refs.push_back({from, line.number, tokens[1].column});
      arc_refs.push_back({to, line.number, tokens[3].column});
      if (flow) {
        model.flows.push_back({from, to});
      } else {
        model.triggers.push_back({from, to});
      }
    } else {
      syntax(line.number, tokens[0].column, "unknown declaration '" + keyword + "'");
    }
  }

  if (!named) syntax(1, 0, "missing 'model <name>' declaration");

  for (const auto& ref : machine_refs) {
    if (!model.find_machine(ref.id)) {
      throw DslError(ErrorKind::UnknownReference, ref.line, ref.column,
                     "unknown machine '" + ref.id + "'");
    }
  }
  for (const auto& ref : arc_refs) {
    if (!model.find_stage(ref.id)) {
      throw DslError(ErrorKind::UnknownReference, ref.line, ref.column,
                     "unknown stage '" + ref.id + "'");
    }
  }
  return model;
}

std::string render_model(const StaticModel& model) {
  std::ostringstream os;
  os << "model " << model.name << '\n';
  for (const auto& m : model.machines) {
    os << "machine " << m.id;
    if (!m.label.empty()) os << ' ' << detail::dot_quote(m.label);
    os << '\n';
  }
  for (const auto& s : model.stages) {
    os << "stage " << s.id << " kind " << to_string(s.kind) << (s.has_store ? " store" : "")
       << '\n';
  }
  for (const auto& f : model.flows) os << "flow " << f.from << " -> " << f.to << '\n';
  for (const auto& t : model.triggers) os << "trigger " << t.from << " ~> " << t.to << '\n';
  return os.str();
}

bool intra_machine_adjacency(StageKind from, StageKind to) {
  using enum StageKind;
  switch (from) {
    case Create:
    case Receive:
      return to == Process || to == Release;
    case Process:
      return to == Release;
    case Release:
      return to == Transfer;
    case Transfer:
      return to == Receive;
  }
  return false;
}

ValidationReport validate_static(const StaticModel& model) {
  ValidationReport report;

  std::map<std::string, std::size_t> stage_index;
  for (std::size_t i = 0; i < model.stages.size(); ++i) {
    const auto& s = model.stages[i];
    if (!stage_index.emplace(s.id, i).second) {
      report.violation("duplicate-id", "duplicate stage '" + s.id + "'");
    }
    if (!model.find_machine(s.machine())) {
      report.violation("unknown-machine",
                       "stage '" + s.id + "' belongs to undeclared machine '" + s.machine() + "'");
    }
  }

  std::set<std::string> machine_ids;
  for (const auto& m : model.machines) {
    if (!machine_ids.insert(m.id).second) {
      report.violation("duplicate-id", "duplicate machine '" + m.id + "'");
    }
    if (m.parent && !model.find_machine(*m.parent)) {
      report.violation("unknown-machine",
                       "machine '" + m.id + "' has undeclared parent '" + *m.parent + "'");
    }
  }
  for (const auto& m : model.machines) {
    std::set<std::string> seen{m.id};
    const Machine* cur = &m;
    while (cur->parent) {
      cur = model.find_machine(*cur->parent);
      if (!cur) break;
      if (!seen.insert(cur->id).second) {
        report.violation("machine-cycle", "machine '" + m.id + "' is its own ancestor");
        break;
      }
    }
  }

  Chains chains(model.stages.size());
  std::vector<bool> touched(model.stages.size(), false);
  std::set<FlowArc> seen_flows;
  for (const auto& f : model.flows) {
    auto from = stage_index.find(f.from);
    auto to = stage_index.find(f.to);
    const auto arc = f.from + " -> " + f.to;
    if (from == stage_index.end() || to == stage_index.end()) {
      report.violation("unknown-stage", "flow " + arc + " has an undeclared endpoint");
      continue;
    }
    if (!seen_flows.insert(f).second) report.violation("duplicate-arc", "duplicate flow " + arc);
    touched[from->second] = touched[to->second] = true;
    chains.unite(from->second, to->second);

    const auto& a = model.stages[from->second];
    const auto& b = model.stages[to->second];
    const bool same_machine = a.machine() == b.machine();
    const auto kinds = std::string(to_string(a.kind)) + "->" + std::string(to_string(b.kind));
    if (a.kind == StageKind::Transfer && b.kind == StageKind::Transfer) {
      if (same_machine) {
        report.violation("cross-machine", "cross-machine rule: transfer->transfer flow " + arc +
                                              " stays inside machine '" + a.machine() + "'");
      }
    } else if (!intra_machine_adjacency(a.kind, b.kind)) {
      report.violation("adjacency", "illegal adjacency " + kinds + " (flow " + arc + ")");
    } else if (!same_machine) {
      report.violation("cross-machine", "cross-machine rule: " + kinds + " flow " + arc +
                                            " connects machines '" + a.machine() + "' and '" +
                                            b.machine() + "'");
    }
  }

  std::set<TriggerArc> seen_triggers;
  for (const auto& t : model.triggers) {
    auto from = stage_index.find(t.from);
    auto to = stage_index.find(t.to);
    const auto arc = t.from + " ~> " + t.to;
    if (from == stage_index.end() || to == stage_index.end()) {
      report.violation("unknown-stage", "trigger " + arc + " has an undeclared endpoint");
      continue;
    }
    if (!seen_triggers.insert(t).second) {
      report.violation("duplicate-arc", "duplicate trigger " + arc);
    }
    touched[from->second] = touched[to->second] = true;
    const auto& a = model.stages[from->second];
    const auto& b = model.stages[to->second];
    const auto triggerable = [](StageKind k) {
      return k == StageKind::Process || k == StageKind::Create;
    };
    if (!triggerable(a.kind) || !triggerable(b.kind)) {
      report.violation("trigger-kind", "trigger " + arc + " must run from process/create to "
                                       "create/process, got " + std::string(to_string(a.kind)) +
                                       "~>" + std::string(to_string(b.kind)));
    }
    if (a.machine() == b.machine() && chains.find(from->second) == chains.find(to->second)) {
      report.violation("trigger-chain",
                       "trigger " + arc + " stays inside one flow chain of machine '" +
                           a.machine() + "'");
    }
  }

  for (std::size_t i = 0; i < model.stages.size(); ++i) {
    if (!touched[i]) {
      report.warning("isolated-stage", "stage '" + model.stages[i].id + "' has no incident arcs");
    }
  }
  return report;
}

namespace detail {

namespace {

void pad(std::ostream& os, int indent) {
  for (int i = 0; i < indent; ++i) os << "  ";
}

bool machine_has_kept(const StaticModel& model, const std::string& id,
                      const std::function<bool(const Stage&)>& keep) {
  const auto prefix = id + ".";
  return std::ranges::any_of(model.stages, [&](const Stage& s) {
    return keep(s) && s.id.compare(0, prefix.size(), prefix) == 0;
  });
}

void write_machine(std::ostream& os, const StaticModel& model, const Machine& machine,
                   const std::map<std::string, std::vector<const Machine*>>& children,
                   const std::function<bool(const Stage&)>& keep, bool prune_empty, int indent) {
  if (prune_empty && !machine_has_kept(model, machine.id, keep)) return;
  pad(os, indent);
  os << "subgraph " << dot_quote("cluster_" + machine.id) << " {\n";
  pad(os, indent + 1);
  const auto label = machine.label.empty() ? machine.id : machine.label + " (" + machine.id + ")";
  os << "label=" << dot_quote(label) << ";\n";

  std::vector<const Stage*> own;
  for (const auto& s : model.stages) {
    if (s.machine() == machine.id && keep(s)) own.push_back(&s);
  }
  std::ranges::sort(own, {}, &Stage::id);
  for (const auto* s : own) write_stage_node(os, *s, indent + 1);

  if (auto it = children.find(machine.id); it != children.end()) {
    for (const auto* child : it->second) {
      write_machine(os, model, *child, children, keep, prune_empty, indent + 1);
    }
  }
  pad(os, indent);
  os << "}\n";
}

}  // namespace

void write_stage_node(std::ostream& os, const Stage& stage, int indent) {
  pad(os, indent);
  const auto local = stage.id.substr(stage.id.rfind('.') + 1);
  std::string label = local + "\\n" + std::string(to_string(stage.kind));
  if (stage.has_store) label += " +store";
  os << dot_quote(stage.id) << " [label=\"" << label << "\"];\n";
}

void write_machine_clusters(std::ostream& os, const StaticModel& model,
                            const std::function<bool(const Stage&)>& keep, bool prune_empty,
                            int indent) {
  std::map<std::string, std::vector<const Machine*>> children;
  std::vector<const Machine*> roots;
  for (const auto& m : model.machines) {
    if (m.parent && model.find_machine(*m.parent)) {
      children[*m.parent].push_back(&m);
    } else {
      roots.push_back(&m);
    }
  }
  for (auto& [_, list] : children) std::ranges::sort(list, {}, &Machine::id);
  std::ranges::sort(roots, {}, &Machine::id);
  for (const auto* root : roots) {
    write_machine(os, model, *root, children, keep, prune_empty, indent);
  }

  std::vector<const Stage*> orphans;
  for (const auto& s : model.stages) {
    if (keep(s) && !model.find_machine(s.machine())) orphans.push_back(&s);
  }
  std::ranges::sort(orphans, {}, &Stage::id);
  for (const auto* s : orphans) write_stage_node(os, *s, indent);
}

void write_arcs(std::ostream& os, const StaticModel& model) {
  std::vector<FlowArc> flows = model.flows;
  std::vector<TriggerArc> triggers = model.triggers;
  std::ranges::sort(flows);
  std::ranges::sort(triggers);
  for (const auto& f : flows) os << "  " << dot_quote(f.from) << " -> " << dot_quote(f.to) << ";\n";
  for (const auto& t : triggers) {
    os << "  " << dot_quote(t.from) << " -> " << dot_quote(t.to) << " [style=dashed];\n";
  }
}

}  // namespace detail

std::string export_static_dot(const StaticModel& model) {
  std::ostringstream os;
  os << "digraph " << detail::dot_quote(model.name) << " {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=box];\n";
  detail::write_machine_clusters(
      os, model, [](const Stage&) { return true; }, false, 1);
  detail::write_arcs(os, model);
  os << "}\n";
  return os.str();
}

}  // namespace thimac
