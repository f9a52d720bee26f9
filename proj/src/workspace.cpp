#include "thimac/workspace.hpp"

#include <fstream>
#include <sstream>

namespace thimac {

namespace {

template <typename Loader>
auto load_file(const std::filesystem::path& path, Loader loader) {
  const auto text = read_text_file(path);
  try {
    return loader(text);
  } catch (const DslError& e) {
    throw DslError(e.kind(), e.line(), e.column(), path.filename().string() + ": " + e.detail());
  }
}

}  // namespace

WorkspacePaths WorkspacePaths::in_directory(const std::filesystem::path& dir) {
  WorkspacePaths paths;
  paths.model = dir / "model.tm";
  auto optional = [&](const char* name) -> std::optional<std::filesystem::path> {
    auto p = dir / name;
    if (std::filesystem::exists(p)) return p;
    return std::nullopt;
  };
  paths.events = optional("events.ev");
  paths.behavior = optional("behavior.bh");
  paths.mapping = optional("mapping.map");
  return paths;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Workspace load_workspace(const WorkspacePaths& paths) {
  Workspace ws{load_file(paths.model, [](const std::string& t) { return parse_model(t); }), {}, {}, {}};
  if (paths.events) {
    ws.dynamic = load_file(*paths.events, [&](const std::string& t) { return load_events(t, ws.model); });
  }
  if ((paths.behavior || paths.mapping) && !ws.dynamic) {
    throw std::runtime_error("behavior and mapping files need an events file");
  }
  if (paths.behavior) {
    ws.behavior =
        load_file(*paths.behavior, [&](const std::string& t) { return load_behavior(t, *ws.dynamic); });
  }
  if (paths.mapping) {
    ws.mapping =
        load_file(*paths.mapping, [&](const std::string& t) { return load_mapping(t, *ws.dynamic); });
  }
  return ws;
}

ValidationReport validate_workspace(const Workspace& workspace) {
  ValidationReport report;
  report.merge(validate_static(workspace.model), "static: ");
  if (workspace.dynamic) report.merge(validate_regions(*workspace.dynamic, workspace.model), "events: ");
  if (workspace.behavior) report.merge(validate_behavior(*workspace.behavior), "behavior: ");
  return report;
}

}  // namespace thimac
