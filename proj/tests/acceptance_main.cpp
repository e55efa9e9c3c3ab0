// One line per acceptance criterion; exit status 1 if any fails.
#include <cstdio>

#include "wgqed/acceptance.hpp"

int main() {
  int failed = 0;
  wgqed::acceptance::run_all({}, 0, [&](const wgqed::acceptance::CriterionResult& r) {
    std::printf("%s\n", wgqed::acceptance::format_line(r).c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  });
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
