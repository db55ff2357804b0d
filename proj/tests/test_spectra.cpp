#include <doctest.h>

TEST_SUITE("spectra") {}
