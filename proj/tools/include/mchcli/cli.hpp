#pragma once

#include <iosfwd>
#include <string_view>

namespace mch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitUsage = 64;

/// Decimal number with an optional `pi` suffix: "18.85", "6pi", "2.5pi", "pi".
/// Throws std::invalid_argument on anything else.
double parse_length(std::string_view text);

/// Runs one subcommand (wave, scan, spectrum, krein, evolve, orbit, check).
/// Artifacts go to `out`, or to files under --out when given; diagnostics and
/// summaries go to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mch::cli
