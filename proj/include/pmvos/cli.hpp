#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pmvos::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kCheckFailed = 3,
};

/// Entry point shared by the `pmvos` binary and the tests. `args` excludes the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pmvos::cli
