// Runs every acceptance criterion; exit code 0 iff all pass.

#include <cstdlib>

#include "winding/acceptance.hpp"

int main(int argc, char** argv) {
  const std::string out_dir = argc > 1 ? argv[1] : "";
  return winding::acceptance::run_acceptance_suite(out_dir) ? EXIT_SUCCESS : EXIT_FAILURE;
}
