#include "text.hpp"

#include <cctype>

#include "thimac/diagnostics.hpp"

namespace thimac::detail {

std::vector<SourceLine> split_lines(std::string_view text) {
  std::vector<SourceLine> out;
  std::size_t number = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back({number++, line});
    if (nl == text.size()) break;
    pos = nl + 1;
  }
  return out;
}

std::vector<Token> tokenize(const SourceLine& line) {
  std::vector<Token> tokens;
  const auto text = line.text;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') break;
    if (c == '"') {
      const auto start = i;
      ++i;
      std::string value;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\\' && i + 1 < text.size()) ++i;
        value += text[i++];
      }
      if (i >= text.size()) {
        throw DslError(ErrorKind::Syntax, line.number, start + 1, "unterminated string");
      }
      ++i;
      tokens.push_back({std::move(value), start + 1, true});
      continue;
    }
    const auto start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
           text[i] != '#' && text[i] != '"') {
      ++i;
    }
    tokens.push_back({std::string(text.substr(start, i - start)), start + 1, false});
  }
  return tokens;
}

std::vector<ListItem> split_list(const SourceLine& line, std::size_t column) {
  auto rest = line.text.substr(column - 1);
  if (auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
  std::vector<ListItem> items;
  std::size_t offset = 0;
  while (offset <= rest.size()) {
    auto comma = rest.find(',', offset);
    if (comma == std::string_view::npos) comma = rest.size();
    auto raw = rest.substr(offset, comma - offset);
    std::size_t lead = 0;
    while (lead < raw.size() && std::isspace(static_cast<unsigned char>(raw[lead]))) ++lead;
    items.push_back({std::string(trim(raw)), column + offset + lead});
    if (comma == rest.size()) break;
    offset = comma + 1;
  }
  return items;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (const char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '&') {
      return false;
    }
  }
  return true;
}

bool is_dotted_identifier(std::string_view s) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  while (true) {
    auto dot = s.find('.', pos);
    auto part = s.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
    if (!is_identifier(part)) return false;
    if (dot == std::string_view::npos) return true;
    pos = dot + 1;
  }
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (const char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

}  // namespace thimac::detail
