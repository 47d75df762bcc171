#ifndef LORENTZ_VERIFY_HPP
#define LORENTZ_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lorentz/json_io.hpp"

namespace lorentz {

struct VerifyOptions {
  std::uint64_t seed = 1;
  /// Overrides the main trial count of a battery.
  std::optional<std::size_t> trials;
};

struct CheckReport {
  bool pass = true;
  json details = json::object();
};

/// Battery labels accepted by run_battery, in reporting order.
const std::vector<std::string> &battery_labels();

/// Runs one battery; "isometry" is accepted as an alias of "isometry-d1v".
/// Throws std::invalid_argument for an unknown label.
CheckReport run_battery(const std::string &label, const VerifyOptions &opts);

/// "all" or a single label. The document carries "pass" plus either the
/// battery details or a per-label table under "results".
json run_suite(const std::string &suite, const VerifyOptions &opts);

/// The numbered acceptance checks (1 to 12).
CheckReport acceptance_check(int criterion, const VerifyOptions &opts);
std::string acceptance_title(int criterion);

} // namespace lorentz

#endif // LORENTZ_VERIFY_HPP
