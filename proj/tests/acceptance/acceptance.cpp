// Runs every named check once and prints one line per criterion.
// Exit status is non-zero if any check fails.

#include <cstdio>
#include <cstring>
#include <iostream>

#include "loctime/verify.hpp"

int main(int argc, char** argv) {
  loctime::VerifyOptions opt;
  bool verbose = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "-v") == 0) verbose = true;

  int failed = 0, k = 0;
  for (const auto& name : loctime::check_names()) {
    const auto rep = loctime::run_check(name, opt);
    ++k;
    std::printf("criterion %2d %-20s %s (%.1f s)\n", k, name.c_str(), rep.pass() ? "PASS" : "FAIL", rep.seconds);
    if (verbose || !rep.pass()) std::cout << loctime::format_report(rep);
    std::fflush(stdout);
    failed += !rep.pass();
  }
  std::printf("%d of %d criteria passed\n", k - failed, k);
  return failed == 0 ? 0 : 1;
}
