#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace recmle {

// Shortest decimal text that parses back to the same double. Independent of
// the global locale.
std::string format_double(double v);

// Parses a complete decimal real; nullopt on trailing junk or empty input.
std::optional<double> parse_double(std::string_view text);

}  // namespace recmle
