/** @file
 * Command-line front end. run_cli is the whole program minus argv plumbing,
 * so tests can drive commands and inspect exit codes in-process.
 */

#ifndef COHERE_CLI_HPP
#define COHERE_CLI_HPP

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace cohere {

/** Options shared by every subcommand. */
struct RunConfig {
  std::uint64_t seed = 1;
  int restarts = 8;
  int ensemble_size = 0;  // 0 means dim^2
  std::string format = "text";
  std::string output;  // empty writes to stdout
  bool rescale_trace = false;
  std::map<std::string, double> tolerances;  // overrides of the pinned defaults
};

// Exit codes: 0 success (and EQUAL verdicts), 2 parse or usage errors,
// 3 STRICT verdicts, 4 BOUNDARY verdicts.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cohere

#endif
