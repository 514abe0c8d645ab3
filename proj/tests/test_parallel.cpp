#include "rrshift/parallel.hpp"

#include <doctest.h>

#include <cstdlib>
#include <stdexcept>
#include <vector>

using namespace rrshift;

TEST_CASE("every index is visited once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  parallel_for(0, [](std::size_t) { FAIL("called"); });
}

TEST_CASE("exceptions reach the caller") {
  CHECK_THROWS_AS(parallel_for(64, [](std::size_t i) {
                    if (i == 17) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}

TEST_CASE("thread cap and serial mode") {
  setenv("RRSHIFT_THREADS", "1", 1);
  CHECK(thread_count() == 1);
  setenv("RRSHIFT_THREADS", "3", 1);
  CHECK(thread_count() <= 3);
  unsetenv("RRSHIFT_THREADS");
  set_serial(true);
  CHECK(serial_mode());
  CHECK(thread_count() == 1);
  set_serial(false);
  CHECK(thread_count() >= 1);
}
