#include <cstdio>
#include <cstdlib>
#include <string>

#include "clo/acceptance.hpp"

int main(int argc, char** argv) {
  clo::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i) options.only.insert(std::atoi(argv[i]));
  bool ok = true;
  clo::run_acceptance(options, [&](const clo::CriterionResult& r) {
    std::printf("%s %2d %-26s %9.0f ms  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.ms,
                r.detail.c_str());
    std::fflush(stdout);
    ok = ok && r.pass;
  });
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
