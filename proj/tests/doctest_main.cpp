#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "hclab/errors.hpp"

int main(int argc, char** argv) {
  // Expected warnings from negative tests would only clutter the ctest log.
  hclab::set_warnings_enabled(false);
  doctest::Context ctx(argc, argv);
  return ctx.run();
}
