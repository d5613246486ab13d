#include <cstdio>
#include <cstring>

#include "cmg/verify.hpp"

// One line per criterion; exit status 1 if any fails.
int main(int argc, char** argv) {
  cmg::RunConfig cfg;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--numeric") == 0) cfg.exact = false;
  }
  bool verbose = false;
  for (int i = 1; i < argc; ++i) verbose = verbose || std::strcmp(argv[i], "--verbose") == 0;
  bool all = true;
  for (int id = 1; id <= cmg::criterion_count(); ++id) {
    const auto res = cmg::run_criterion(id, cfg);
    std::printf("criterion %2d: %s  %s (%zu/%zu checks, %.2fs)\n", id, res.pass() ? "PASS" : "FAIL", res.title.c_str(),
                res.passed(), res.checks.size(), res.seconds);
    if (!res.pass()) {
      all = false;
      for (const auto& c : res.checks)
        if (!c.pass) {
          std::printf("    failed: %s\n", c.name.c_str());
          if (verbose) std::printf("      %s\n", c.payload.dump().c_str());
        }
    }
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
