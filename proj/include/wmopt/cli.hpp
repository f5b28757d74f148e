#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wmopt::cli {

enum ExitCode : int {
  kOk = 0,
  kPropertyFailure = 1,
  kUsageError = 2,
  kCapacityError = 3,
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wmopt::cli
