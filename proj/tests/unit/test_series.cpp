#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>
#include <stdexcept>

#include "combspec/series.hpp"

using namespace combspec;

TEST_SUITE("series") {
  TEST_CASE("partial sums against long double summation") {
    for (double a : {0.3, 0.6, 1.0, 1.5, 2.0, 3.0}) {
      for (std::uint64_t n : {1ull, 2ull, 100ull, 4095ull, 4096ull, 4097ull, 100000ull}) {
        long double s = 0.0L;
        for (std::uint64_t l = n; l >= 1; --l) s += std::pow(static_cast<long double>(l), -a);
        CAPTURE(a);
        CAPTURE(n);
        CHECK(power_partial_sum(a, n) == doctest::Approx(static_cast<double>(s)).epsilon(1e-14));
      }
    }
    CHECK(power_partial_sum(1.0, 0) == 0.0);
    CHECK_THROWS_AS(power_partial_sum(0.0, 3), std::invalid_argument);
  }

  TEST_CASE("large n stays finite and monotone") {
    double prev = 0.0;
    for (std::uint64_t n = 10; n <= 10'000'000'000ull; n *= 10) {
      const double s = power_partial_sum(0.75, n);
      CHECK(s > prev);
      prev = s;
    }
    // harmonic numbers: H_n - ln n -> Euler's gamma
    CHECK(power_partial_sum(1.0, 1'000'000'000ull) - std::log(1e9) ==
          doctest::Approx(std::numbers::egamma + 0.5e-9).epsilon(1e-12));
  }

  TEST_CASE("zeta values") {
    const double pi = std::numbers::pi;
    CHECK(std::abs(riemann_zeta(2.0) - pi * pi / 6.0) < 1e-13);
    CHECK(std::abs(riemann_zeta(4.0) - pi * pi * pi * pi / 90.0) < 1e-13);
    CHECK(std::abs(riemann_zeta(3.0) - 1.2020569031595942) < 1e-13);
    CHECK(std::abs(riemann_zeta(1.5) - 2.6123753486854883) < 1e-12);
    CHECK_THROWS_AS(riemann_zeta(1.0), std::invalid_argument);
  }
}
