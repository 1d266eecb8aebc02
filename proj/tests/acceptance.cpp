// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include <cstdio>
#include <cstring>

#include "pwell/verify.hpp"

int main(int argc, char** argv) {
  pwell::verify::VerifyOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
  }
  int failed = 0;
  for (const auto& check : pwell::verify::all_checks()) {
    const auto r = check(opt);
    std::printf("%s\n", pwell::verify::format_line(r).c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
