#include <chrono>
#include <cstdio>
#include <exception>

#include "lorentz/verify.hpp"

int main() {
  using namespace lorentz;
  const VerifyOptions opts;
  int failures = 0;
  for (int c = 1; c <= 12; ++c) {
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
      const CheckReport r = acceptance_check(c, opts);
      pass = r.pass;
      detail = r.details.dump();
    } catch (const std::exception &e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d  %-48s %7.2fs  %s\n", pass ? "PASS" : "FAIL", c, acceptance_title(c).c_str(), secs,
                detail.c_str());
    std::fflush(stdout);
    failures += pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
