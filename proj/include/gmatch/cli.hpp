#ifndef GMATCH_CLI_HPP
#define GMATCH_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace gmatch {

// Entry point behind the `guardmatch` binary; exposed so tests can drive the
// command surface directly. Exit codes: 0 success/complete, 1 error,
// 2 limit-terminated match, 3 verification mismatch.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gmatch

#endif
