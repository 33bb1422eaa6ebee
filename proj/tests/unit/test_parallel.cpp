#include <doctest.h>

#include <cstdlib>
#include <stdexcept>

#include "combspec/parallel.hpp"

using namespace combspec;

TEST_SUITE("parallel") {
  TEST_CASE("results come back in job order") {
    for (std::size_t threads : {1u, 2u, 8u, 64u}) {
      const auto out = parallel_map(100, threads, [](std::size_t i) { return i * i; });
      REQUIRE(out.size() == 100);
      for (std::size_t i = 0; i < 100; ++i) CHECK(out[i] == i * i);
    }
    CHECK(parallel_map(0, 4, [](std::size_t i) { return i; }).empty());
  }

  TEST_CASE("first failing job by index is rethrown") {
    auto run = [] {
      return parallel_map(20, 4, [](std::size_t i) -> int {
        if (i == 13) throw std::runtime_error("thirteen");
        if (i == 7) throw std::logic_error("seven");
        return 0;
      });
    };
    CHECK_THROWS_AS(run(), std::logic_error);
  }

  TEST_CASE("thread count from the environment") {
    ::setenv("COMB_SPECTRA_THREADS", "3", 1);
    CHECK(default_thread_count() == 3);
    CHECK(resolve_thread_count(5) == 5);
    CHECK(resolve_thread_count(std::nullopt) == 3);
    ::setenv("COMB_SPECTRA_THREADS", "0", 1);
    CHECK_THROWS_AS(default_thread_count(), std::invalid_argument);
    ::setenv("COMB_SPECTRA_THREADS", "two", 1);
    CHECK_THROWS_AS(default_thread_count(), std::invalid_argument);
    ::unsetenv("COMB_SPECTRA_THREADS");
    CHECK(default_thread_count() >= 1);
  }
}
