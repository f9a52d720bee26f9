#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "thimac/workspace.hpp"

namespace support {

inline std::filesystem::path corpus(const std::string& relative) {
  return std::filesystem::path(THIMAC_CORPUS_DIR) / relative;
}

inline thimac::Workspace licensing() {
  return thimac::load_workspace(thimac::WorkspacePaths::in_directory(corpus("licensing")));
}

inline thimac::Workspace ed() {
  return thimac::load_workspace(thimac::WorkspacePaths::in_directory(corpus("ed")));
}

inline thimac::BehavioralModel ed_variant(const thimac::Workspace& ed) {
  return thimac::load_behavior(thimac::read_text_file(corpus("ed/variant.bh")), *ed.dynamic);
}

inline std::vector<std::string> split(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace support

namespace support {

/// Small behavior without a backing dynamic model; edges as "A>B".
inline thimac::BehavioralModel model(std::vector<std::string> events, const std::vector<std::string>& edges,
                                     std::set<std::string> starts, std::set<std::string> ends) {
  thimac::BehavioralModel m;
  m.name = "inline";
  m.events = std::move(events);
  for (const auto& e : edges) {
    const auto parts = split(e, '>');
    m.edges.insert({parts.at(0), parts.at(1)});
  }
  m.starts = std::move(starts);
  m.ends = std::move(ends);
  return m;
}

}  // namespace support
