#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gsearch/lattice.hpp"

namespace gsearch::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3, kIo = 4 };

/// Runs graphene-search with argv[1..] in `args`. Never throws; returns an ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "MxN" -> LatticeSpec.
LatticeSpec parse_cells(const std::string& text);
/// "alpha,beta,A|B" -> SiteId (not yet wrapped onto a torus).
SiteId parse_mark(const std::string& text);

struct GridSpec {
  double from = 0.0;
  double to = 0.0;
  double step = 0.0;
};
/// "FROM:TO:STEP".
GridSpec parse_grid(const std::string& text);
/// "FROM..TO:STEP" or a comma list "6,9,12".
std::vector<int> parse_sizes(const std::string& text);

/// Fixed CSV number format: 17 significant digits, '.' decimal separator.
std::string format_number(double value);

}  // namespace gsearch::cli
