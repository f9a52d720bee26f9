#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>

#include "thimac/behavior.hpp"
#include "thimac/conformance.hpp"
#include "thimac/events.hpp"
#include "thimac/log_sim.hpp"
#include "thimac/mining.hpp"
#include "thimac/model.hpp"
#include "thimac/workspace.hpp"

namespace thimac::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidWorkspace : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Level { Static, Dynamic, Behavior };

struct GlobalOptions {
  std::string workspace;
  std::string model;
  std::string events;
  std::string behavior;
};

Workspace open_workspace(const GlobalOptions& g, Level need, std::ostream& err) {
  WorkspacePaths paths = g.workspace.empty() ? WorkspacePaths{} : WorkspacePaths::in_directory(g.workspace);
  if (!g.model.empty()) paths.model = g.model;
  if (!g.events.empty()) paths.events = fs::path(g.events);
  if (!g.behavior.empty()) paths.behavior = fs::path(g.behavior);
  if (paths.model.empty()) throw UsageError("no model given (use --workspace or --model)");
  if (need >= Level::Dynamic && !paths.events) throw UsageError("no events file in the workspace");
  if (need >= Level::Behavior && !paths.behavior) throw UsageError("no behavior file in the workspace");
  for (const auto& p : {std::optional<fs::path>(paths.model), paths.events, paths.behavior, paths.mapping}) {
    if (p && !fs::exists(*p)) throw UsageError("file not found: " + p->string());
  }

  Workspace ws;
  try {
    ws = load_workspace(paths);
  } catch (const DslError& e) {
    throw InvalidWorkspace(e.what());
  }
  const auto report = validate_workspace(ws);
  if (!report.ok()) {
    err << report;
    throw InvalidWorkspace(std::to_string(report.violations.size()) + " violation(s)");
  }
  return ws;
}

void emit(std::ostream& out, const std::string& text, const std::string& path) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file << text;
}

std::string read_input(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("file not found: " + path);
  return read_text_file(path);
}

// Meta-event logs and external activity logs are told apart by their header.
EventLog read_any_log(const std::string& path, std::ostream& err) {
  const auto text = read_input(path);
  bool external = false;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    if (line.empty() || line[0] == '#') continue;
    external = line.find("activity") != std::string::npos;
    break;
  }
  auto result = external ? import_external_log(text) : read_log(text);
  for (const auto& e : result.errors) err << path << ":" << e.line << ": " << e.message << '\n';
  return result.log;
}

ActivityMapping mapping_from(const std::string& path, const Workspace& ws) {
  if (path.empty()) return {};
  try {
    return load_mapping(read_input(path), *ws.dynamic);
  } catch (const DslError& e) {
    throw InvalidWorkspace(fs::path(path).filename().string() + ": " + e.what());
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thing-machine models and conformance checking of their event logs", "thimac"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("-w,--workspace", g.workspace, "Directory with model.tm, events.ev, behavior.bh");
  app.add_option("--model", g.model, "Static model (.tm)");
  app.add_option("--events", g.events, "Events file (.ev)");
  app.add_option("--behavior", g.behavior, "Behavior file (.bh)");

  auto* validate = app.add_subcommand("validate", "Validate every loaded level");

  std::string level = "static";
  std::string overlay;
  std::string out_path;
  auto* export_dot = app.add_subcommand("export-dot", "Render a level as Graphviz DOT");
  export_dot->add_option("--level", level, "static|dynamic|behavior")
      ->check(CLI::IsMember({"static", "dynamic", "behavior"}));
  export_dot->add_option("--overlay", overlay, "Other behavior file; highlight the differences");
  export_dot->add_option("--out", out_path, "Output file (default stdout)");

  std::size_t max_len = 0;
  auto* enumerate = app.add_subcommand("enumerate", "List stream types (simple start-to-end paths)");
  enumerate->add_option("--max-len", max_len, "Longest stream to list")->check(CLI::PositiveNumber);

  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::string fault_kind;
  double rate = 1.0;
  std::size_t max_steps = 1000;
  auto* simulate = app.add_subcommand("simulate", "Generate a meta-event log by executing the behavior");
  simulate->add_option("--seed", seed, "Random seed")->required();
  simulate->add_option("--cases", cases, "Number of cases")->required();
  auto* fault_opt = simulate->add_option("--fault", fault_kind, "Drop|SwapAdjacent|IllegalStart")
                        ->check(CLI::IsMember({"Drop", "SwapAdjacent", "IllegalStart"}));
  simulate->add_option("--rate", rate, "Fault probability per case")->check(CLI::Range(0.0, 1.0))->needs(fault_opt);
  simulate->add_option("--max-steps", max_steps, "Longest walk per case")->check(CLI::PositiveNumber);
  simulate->add_option("--out", out_path, "Output file (default stdout)");

  std::string log_path;
  std::string map_path;
  auto* check = app.add_subcommand("check", "Check every case of a log against the behavior");
  check->add_option("--log", log_path, "Meta-event or external activity log")->required();
  check->add_option("--map", map_path, "Activity mapping (.map)");
  check->add_option("--out", out_path, "Verdict CSV file (default stdout)");

  std::size_t min_support = 1;
  auto* discover = app.add_subcommand("discover", "Mine edit proposals from rejected cases");
  discover->add_option("--log", log_path, "Meta-event or external activity log")->required();
  discover->add_option("--map", map_path, "Activity mapping (.map)");
  discover->add_option("--min-support", min_support, "Minimum deviation support")->check(CLI::PositiveNumber);
  discover->add_option("--out", out_path, "Proposal CSV file (default stdout)");

  std::string proposals_path;
  auto* enhance_cmd = app.add_subcommand("enhance", "Apply proposals and write the enhanced behavior");
  enhance_cmd->add_option("--proposals", proposals_path, "Proposal CSV")->required();
  enhance_cmd->add_option("--out", out_path, "Enhanced behavior file")->required();
  enhance_cmd->add_option("--log", log_path, "Log to re-check after enhancing");
  enhance_cmd->add_option("--map", map_path, "Activity mapping for the re-check");

  std::string other_path;
  bool as_csv = false;
  auto* diff = app.add_subcommand("diff", "Compare the workspace behavior with another one");
  diff->add_option("--other", other_path, "Other behavior file (same events)")->required();
  diff->add_flag("--csv", as_csv, "Emit kind,side,element rows");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (validate->parsed()) {
      WorkspacePaths paths = g.workspace.empty() ? WorkspacePaths{} : WorkspacePaths::in_directory(g.workspace);
      if (!g.model.empty()) paths.model = g.model;
      if (!g.events.empty()) paths.events = fs::path(g.events);
      if (!g.behavior.empty()) paths.behavior = fs::path(g.behavior);
      if (paths.model.empty()) throw UsageError("no model given (use --workspace or --model)");
      for (const auto& p : {std::optional<fs::path>(paths.model), paths.events, paths.behavior, paths.mapping}) {
        if (p && !fs::exists(*p)) throw UsageError("file not found: " + p->string());
      }
      Workspace ws;
      try {
        ws = load_workspace(paths);
      } catch (const DslError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
      }
      const auto report = validate_workspace(ws);
      out << report;
      out << report.violations.size() << " violation(s), " << report.warnings.size() << " warning(s)\n";
      return report.ok() ? kExitOk : kExitInvalid;
    }

    if (export_dot->parsed()) {
      const auto need = level == "static" ? Level::Static : level == "dynamic" ? Level::Dynamic : Level::Behavior;
      const auto ws = open_workspace(g, need, err);
      std::string dot;
      if (need == Level::Static) {
        dot = export_static_dot(ws.model);
      } else if (need == Level::Dynamic) {
        dot = export_dynamic_dot(*ws.dynamic, ws.model);
      } else if (overlay.empty()) {
        dot = export_behavior_dot(*ws.behavior);
      } else {
        const auto other = load_behavior(read_input(overlay), *ws.dynamic);
        const auto d = diff_behaviors(*ws.behavior, other);
        dot = export_behavior_dot(other, &d);
      }
      emit(out, dot, out_path);
      return kExitOk;
    }

    const auto ws = open_workspace(g, Level::Behavior, err);
    const auto& behavior = *ws.behavior;

    if (enumerate->parsed()) {
      const auto result = enumerate_streams(behavior, max_len > 0 ? std::optional(max_len) : std::nullopt);
      for (const auto& s : result.streams) {
        for (std::size_t i = 0; i < s.events.size(); ++i) out << (i ? " " : "") << s.events[i];
        out << '\n';
      }
      if (result.cyclic) {
        err << "notice: behavior graph is cyclic; streams limited to " << result.max_len << " events\n";
      }
      err << result.streams.size() << " stream type(s)\n";
      return kExitOk;
    }

    if (simulate->parsed()) {
      SimConfig config;
      config.seed = seed;
      config.cases = cases;
      config.max_steps = max_steps;
      if (!fault_kind.empty()) config.fault = FaultSpec{*parse_fault_kind(fault_kind), rate};
      auto result = simulate_log(behavior, config);
      for (const auto& e : result.case_errors) err << "simulation: " << e << '\n';
      auto log = config.fault ? inject_faults(result.log, config) : result.log;
      emit(out, write_log(log), out_path);
      return kExitOk;
    }

    if (check->parsed()) {
      const auto mapping = mapping_from(map_path, ws);
      const auto log = read_any_log(log_path, err);
      const auto result = check_log(log, behavior, mapping);
      emit(out, format_verdicts_csv(result), out_path);
      err << format_summary(result) << '\n';
      return kExitOk;
    }

    if (discover->parsed()) {
      const auto mapping = mapping_from(map_path, ws);
      const auto log = read_any_log(log_path, err);
      const auto result = check_log(log, behavior, mapping);
      const auto deviations = aggregate_deviations(result.verdicts);
      const auto proposals = propose_edits(deviations, min_support);
      for (const auto& d : deviations) {
        err << "deviation " << to_string(d.kind) << " support " << d.support << '\n';
      }
      for (const auto& d : proposals.mapping_review) {
        err << "mapping review: " << to_string(d.kind) << " support " << d.support << '\n';
      }
      emit(out, write_proposals_csv(proposals.proposals), out_path);
      err << format_summary(result) << "; " << proposals.proposals.size() << " proposal(s)\n";
      return kExitOk;
    }

    if (enhance_cmd->parsed()) {
      std::vector<EditProposal> proposals;
      try {
        proposals = read_proposals_csv(read_input(proposals_path));
      } catch (const DslError& e) {
        err << "error: " << proposals_path << ": " << e.what() << '\n';
        return kExitInvalid;
      }
      const auto mapping = mapping_from(map_path, ws);
      std::vector<Trace> traces;
      if (!log_path.empty()) traces = traces_of(read_any_log(log_path, err));
      const auto result = enhance(behavior, proposals, traces, mapping);
      emit(out, render_enhanced(result.model, result.report.applied), out_path);
      err << "applied " << result.report.applied.size() << " edit(s); streams "
          << result.report.streams_before << " -> " << result.report.streams_after << '\n';
      if (result.report.recheck) err << "re-check: " << format_summary(*result.report.recheck) << '\n';
      return kExitOk;
    }

    if (diff->parsed()) {
      const auto other = load_behavior(read_input(other_path), *ws.dynamic);
      const auto d = diff_behaviors(behavior, other);
      out << (as_csv ? format_diff_csv(d) : format_diff_text(d));
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidWorkspace& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const DslError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace thimac::cli
