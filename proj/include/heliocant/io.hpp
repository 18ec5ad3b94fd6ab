#pragma once

#include <filesystem>
#include <string>

namespace heliocant {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

/// Fixed-point with `decimals` digits; "-0.0000" is printed as "0.0000".
std::string format_fixed(double x, int decimals);

/// Writes `content` to `path`, throwing ErrorCode::Io on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace heliocant
