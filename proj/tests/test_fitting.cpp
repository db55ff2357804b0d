#include <doctest.h>

TEST_SUITE("fitting") {}
