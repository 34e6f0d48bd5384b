#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mwf::cli {

enum ExitCode : int {
  kVerified = 0,
  kRefuted = 1,
  kInconclusive = 2,
  kUsage = 64,
  kBadInput = 65,
  kInternal = 70,
};

/// Runs one command line (without the program name). Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mwf::cli
