#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace refagree::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kCompute = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Entry point for `refagree <command> [flags]`. `args` excludes the program
/// name. Reports go to the files named by --output ("-" for `out`);
/// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace refagree::cli
