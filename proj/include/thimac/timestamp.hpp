#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace thimac {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// Accepts `YYYY-MM-DDTHH:MM:SS[.fff][Z|+HH:MM|-HH:MM]` (a space may replace
/// the `T`). Values without a zone designator are taken as UTC.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Canonical UTC rendering; milliseconds are printed only when non-zero.
std::string format_timestamp(Timestamp ts);

}  // namespace thimac
