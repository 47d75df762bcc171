#ifndef LORENTZ_CLI_HPP
#define LORENTZ_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace lorentz::cli {

enum ExitCode : int { ok = 0, usage = 2, regime_violation = 3, verification_failed = 4 };

/// Runs one command. Exactly one JSON document is written to `out`.
int run(const std::vector<std::string> &args, std::ostream &out);
int run(int argc, char **argv, std::ostream &out);

} // namespace lorentz::cli

#endif // LORENTZ_CLI_HPP
