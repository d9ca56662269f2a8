#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace casimir::cli {

constexpr int kExitOk = 0;
constexpr int kExitSpecError = 2;
constexpr int kExitValidityError = 3;
constexpr int kSchemaVersion = 1;

extern const char* const kVersion;

/// Runs one subcommand. Output goes to `out` unless --output names a file.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "log:a:b:n", "lin:a:b:n" or a comma-separated list of positive values.
std::vector<double> parse_grid(const std::string& text);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text);

} // namespace casimir::cli
