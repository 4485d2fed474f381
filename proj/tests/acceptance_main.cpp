#include <cstdio>
#include <cstring>
#include <string>

#include "enscribe/acceptance.hpp"

// One line per criterion; exit status 0 iff every criterion passes.
int main(int argc, char** argv) {
  enscribe::acceptance::Options opt;
  std::string only;
  for (int k = 1; k < argc; ++k) {
    if (std::strcmp(argv[k], "--only") == 0 && k + 1 < argc) only = argv[++k];
    else if (std::strcmp(argv[k], "--seed") == 0 && k + 1 < argc) opt.seed = std::stoull(argv[++k]);
  }
  int failed = 0;
  for (const auto& r : enscribe::acceptance::run_all(opt, only)) {
    std::printf("[%s] %d %-16s %s  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.key.c_str(), r.title.c_str(),
                r.measured.dump().c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
