#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lcdsc/simulation.hpp"

namespace lcdsc::cli {

/// Runs one command line. Returns 0 on success, 1 for usage errors, 2 for
/// data errors and 3 for numerical failures; errors get one line on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Benchmark grid: `key = value` lines with keys scenario (local|double),
/// T, sigma and param, each taking a comma-separated list. Cells are the
/// cartesian product in that key order. Blank lines and `#` comments are
/// skipped; unknown or repeated keys are rejected.
std::vector<BenchCell> parse_grid(const std::string& text);

}  // namespace lcdsc::cli
