#ifndef MTEVAL_CLI_H_
#define MTEVAL_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace mteval::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitUsage = 64;

// Entry point for the `mteval` tool. `args` excludes the program name.
// Subcommands: score, correlate, tokenize, stem, serve, export-report.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace mteval::cli

#endif  // MTEVAL_CLI_H_
