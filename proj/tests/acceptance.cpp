#include "filament/verify.hpp"

#include <cstdlib>
#include <cstring>
#include <iostream>

int main(int argc, char **argv) {
  filament::VerifyLevel level = filament::VerifyLevel::Full;
  if (argc > 1 && std::strcmp(argv[1], "--quick") == 0)
    level = filament::VerifyLevel::Quick;
  const auto results = filament::run_verification(level);
  std::cout << filament::format_table(results);
  bool ok = true;
  for (const auto &r : results)
    ok = ok && r.pass;
  std::cout << (ok ? "acceptance: all criteria pass\n" : "acceptance: FAILED\n");
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
