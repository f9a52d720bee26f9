#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "thimac/behavior.hpp"
#include "thimac/conformance.hpp"
#include "thimac/diagnostics.hpp"
#include "thimac/events.hpp"
#include "thimac/model.hpp"

namespace thimac {

struct WorkspacePaths {
  std::filesystem::path model;
  std::optional<std::filesystem::path> events;
  std::optional<std::filesystem::path> behavior;
  std::optional<std::filesystem::path> mapping;

  /// Conventional layout: model.tm, events.ev, behavior.bh, mapping.map.
  /// Optional files are only set when they exist.
  static WorkspacePaths in_directory(const std::filesystem::path& dir);
};

struct Workspace {
  StaticModel model;
  std::optional<DynamicModel> dynamic;
  std::optional<BehavioralModel> behavior;
  std::optional<ActivityMapping> mapping;
};

std::string read_text_file(const std::filesystem::path& path);

/// Loads every file that is present, each level against the previous one.
/// Throws DslError (prefixed with the file name) or std::runtime_error for
/// unreadable files.
Workspace load_workspace(const WorkspacePaths& paths);

/// Static, region and behavior validation of whatever levels are loaded.
ValidationReport validate_workspace(const Workspace& workspace);

}  // namespace thimac
