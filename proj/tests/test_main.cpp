#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"
#include "wlab/kernels.hpp"

int main(int argc, char** argv) {
  wlab::configure_threads_from_env();
  doctest::Context context(argc, argv);
  return context.run();
}
