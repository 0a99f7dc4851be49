#ifndef NESTEX_CLI_H_
#define NESTEX_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace nestex {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,       // bad flags, config or I/O
  kExitValidation = 2,  // corpus parse or validation failure
  kExitNumeric = 3,     // NaN during training or failed gradient check
};

// Runs one subcommand: synth, validate, train, predict, eval, gradcheck.
// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nestex

#endif  // NESTEX_CLI_H_
