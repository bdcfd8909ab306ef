#ifndef EVCOREF_TOOLS_COMMANDS_H_
#define EVCOREF_TOOLS_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace evcoref::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kDataError = 2,
  kInternalError = 3,
};

// Runs the command line `args` (without the program name), e.g.
// {"run", "--corpus", "c.jsonl", "--out", "r/"}.
int Main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err);

}  // namespace evcoref::cli

#endif  // EVCOREF_TOOLS_COMMANDS_H_
