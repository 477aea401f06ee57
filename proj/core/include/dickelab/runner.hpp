// runner.hpp — execute a RunConfig and emit the result artifact
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure
// (truncation leak, step underflow, trace loss, unreachable sweep metric).
// Results go to the output stream (or are atomically written to the
// configured path); diagnostics go to the error stream only.

#pragma once

#include <iosfwd>

#include "dickelab/config.hpp"

namespace dickelab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalError = 3;

// Renders the artifact for a validated config (CSV uses 9 significant
// digits and CRLF line endings; JSON numbers round-trip exactly).
std::string render_artifact(const RunConfig& config);

// Renders and delivers: to config.output.path via temp-file + rename when a
// path is set, otherwise to `out`. Exceptions are reported on `err` and
// mapped to the exit code.
int run_config(const RunConfig& config, std::ostream& out, std::ostream& err);

// CSV cell format: shortest of 9 significant digits, always with a decimal
// point or exponent ("0.0", "1.0", "15.7079633").
std::string format_csv_number(double value);

} // namespace dickelab
