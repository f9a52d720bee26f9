#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace thimac::detail {

struct Token {
  std::string text;
  std::size_t column = 0;  // 1-based
  bool quoted = false;
};

struct ListItem {
  std::string text;
  std::size_t column = 0;
};

/// One physical line of a DSL file with its comment stripped.
struct SourceLine {
  std::size_t number = 0;
  std::string_view text;
};

std::vector<SourceLine> split_lines(std::string_view text);

/// Whitespace tokens; double-quoted strings form one token. `#` outside
/// quotes ends the line. Throws DslError on an unterminated quote.
std::vector<Token> tokenize(const SourceLine& line);

/// Comma-separated items of the line text starting at `column`.
std::vector<ListItem> split_list(const SourceLine& line, std::size_t column);

std::string_view trim(std::string_view s);
bool is_identifier(std::string_view s);
bool is_dotted_identifier(std::string_view s);

/// Splits one CSV record. Handles double-quoted fields with `""` escapes.
std::vector<std::string> split_csv(std::string_view line);
std::string csv_field(std::string_view value);

std::string dot_quote(std::string_view s);

template <typename Range>
std::string join(const Range& items, std::string_view sep) {
  std::string out;
  bool first = true;
  for (const auto& item : items) {
    if (!first) out += sep;
    out += item;
    first = false;
  }
  return out;
}

}  // namespace thimac::detail
