#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace matchdp {

/// Shortest decimal form that round-trips, independent of the C locale.
std::string format_double(double v);

/// Parses the whole of `text` as a decimal number. Throws ConfigError otherwise.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

/// 64-bit FNV-1a, printed as 16 lowercase hex digits.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t h);

}  // namespace matchdp
