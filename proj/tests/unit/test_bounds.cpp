#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "combspec/bounds.hpp"
#include "combspec/comb.hpp"
#include "combspec/secular.hpp"

using namespace combspec;
using namespace combspec::bounds;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
}  // namespace

TEST_SUITE("bounds") {
  TEST_CASE("bkkm upper is sharp on the interval") {
    for (int k = 1; k <= 30; ++k) {
      const double kk = k;
      CHECK(*bkkm_upper(kk, 1.0, 2, 0) == doctest::Approx(kk * kk * kPi2).epsilon(1e-15));
      CHECK(*bkkm_upper(kk, 1.0, 1, 1) ==
            doctest::Approx((kk - 0.5) * (kk - 0.5) * kPi2).epsilon(1e-15));
      if (k >= 2) {
        CHECK(*bkkm_upper(kk, 1.0, 0, 2) ==
              doctest::Approx((kk - 1) * (kk - 1) * kPi2).epsilon(1e-15));
      }
    }
    CHECK_FALSE(bkkm_upper(1, 1.0, 0, 2).has_value());
    CHECK_FALSE(bkkm_upper(1, 1.0, 0, 1).has_value());
    CHECK_THROWS_AS(bkkm_upper(1, 0.0, 1, 1), std::invalid_argument);
  }

  TEST_CASE("bkkm lower") {
    CHECK(bkkm_lower(1, 1.0) == doctest::Approx(kPi2 / 4));
    CHECK(bkkm_lower(3, 2.0) == doctest::Approx(9 * kPi2 / 16));
    CHECK_THROWS_AS(bkkm_lower(1, -1.0), std::invalid_argument);
  }

  TEST_CASE("tail infimum bound") {
    CHECK(tail_infimum_bound(1.0, 4) == doctest::Approx(2.0));
    CHECK(tail_infimum_bound(0.75, 16) == doctest::Approx(1.0));
    CHECK_THROWS_AS(tail_infimum_bound(0.5, 4), std::invalid_argument);
    CHECK_THROWS_AS(tail_infimum_bound(1.5, 4), std::invalid_argument);
    CHECK_THROWS_AS(tail_infimum_bound(0.75, 1), std::invalid_argument);
  }

  TEST_CASE("finite part upper bounds") {
    CHECK(finite_part_upper_paper(1.0, 55, 4) ==
          doctest::Approx(16 * kPi2 / std::pow(std::log(55.0), 2)).epsilon(1e-14));
    CHECK(finite_part_upper_paper(0.75, 16, 3) == doctest::Approx(6.25 * kPi2 / 16).epsilon(1e-14));
    CHECK(finite_part_upper_strict(1.0, 3, 2) ==
          doctest::Approx(2.25 * kPi2 / std::pow(13.0 / 6.0, 2)).epsilon(1e-14));
  }

  TEST_CASE("strict finite part bound versus the integral-volume variant") {
    // Larger pendant factor but also the larger exact volume: the strict
    // value can sit below the integral-volume variant when n is close to k.
    CHECK(finite_part_upper_strict(1.0, 3, 2) < finite_part_upper_paper(1.0, 3, 2));
    for (double a : {0.6, 0.75, 0.9, 1.0}) {
      for (std::int64_t k : {2, 5, 20}) {
        for (std::int64_t n : {8 * k, 50 * k, 1000 * k}) {
          CAPTURE(a);
          CAPTURE(k);
          CAPTURE(n);
          CHECK(finite_part_upper_strict(a, n, k) >= finite_part_upper_paper(a, n, k));
        }
      }
    }
  }

  TEST_CASE("strict finite part bound holds against computed eigenvalues") {
    for (double a : {0.6, 0.75, 1.0}) {
      for (std::int64_t n : {4, 16, 64}) {
        const Spectrum s = secular::eigenvalues_by_bisection(finite_part_chain(a, n), 12);
        for (std::int64_t k = 2; k <= 12; ++k) {
          CHECK(s.lambda(static_cast<std::size_t>(k)) <= finite_part_upper_strict(a, n, k) * (1 + 1e-12));
        }
      }
    }
  }

  TEST_CASE("certified upper bound") {
    const BoundReport r = certified_upper_bound(1.0, 2);
    CHECK(r.volume == doctest::Approx(25.0 / 12.0).epsilon(1e-15));
    CHECK(r.value == doctest::Approx(4 * kPi2 * std::pow(12.0 / 25.0, 2)).epsilon(1e-14));
    CHECK(r.n_dirichlet == 1);
    CHECK(r.n_neumann == 2);
    CHECK_FALSE(r.vacuous);
    CHECK(certified_upper_bound(0.75, 1).value > 0.0);
    CHECK_THROWS_AS(certified_upper_bound(0.5, 3), std::invalid_argument);
    CHECK_THROWS_AS(certified_upper_bound(0.75, 0), std::invalid_argument);

    BoundOptions paper;
    paper.paper_constants = true;
    CHECK(certified_upper_bound(0.75, 16, paper).volume == doctest::Approx(4.0));
    CHECK(certified_upper_bound(0.75, 16, paper).value >= certified_upper_bound(0.75, 16).value);
  }

  TEST_CASE("certified upper bound growth") {
    auto ratio = [](double a, std::int64_t k, bool log_form) {
      const double kk = static_cast<double>(k);
      const double v = certified_upper_bound(a, k).value;
      return log_form ? v * std::log(kk) * std::log(kk) / (kk * kk) : v / std::pow(kk, 2 * a);
    };
    for (bool log_form : {false, true}) {
      const double a = log_form ? 1.0 : 0.6;
      double max_early = 0.0, max_late = 0.0;
      for (std::int64_t k = 2; k <= 10'000; ++k) {
        const double r = ratio(a, k, log_form);
        (k <= 1000 ? max_early : max_late) = std::max(k <= 1000 ? max_early : max_late, r);
      }
      CAPTURE(log_form);
      CHECK(std::isfinite(max_early));
      CHECK(max_late <= 1.5 * max_early);
    }
  }

  TEST_CASE("certified lower bound search") {
    const BoundReport r = certified_lower_bound(0.8, 10);
    CHECK(r.value > 0.0);
    CHECK(r.n == split_index_by_scan(0.8, 10, 100000));
    CHECK(r.n <= 10 * 100);  // O(k^2)
    CHECK(r.value == doctest::Approx(bkkm_lower(10, finite_part_volume(0.8, r.n))));
    for (double a : {0.6, 0.75, 0.9, 1.0}) {
      for (std::int64_t k : {2, 3, 7, 20, 64}) {
        CHECK(certified_lower_bound(a, k).n == split_index_by_scan(a, k, 10'000'000));
      }
    }
    BoundOptions small;
    small.n_max = 10;
    CHECK_THROWS_AS(certified_lower_bound(0.8, 50, small), std::runtime_error);
    CHECK_THROWS_AS(certified_lower_bound(1.2, 5), std::invalid_argument);
    CHECK_THROWS_AS(certified_lower_bound(0.8, 1), std::invalid_argument);
  }

  TEST_CASE("split predicate is monotone in n") {
    for (double a : {0.6, 0.8, 1.0}) {
      for (std::int64_t k : {2, 10, 40}) {
        bool seen = false;
        for (std::int64_t n = 2; n < 20000; n += 7) {
          const bool h = split_condition_holds(a, n, k);
          if (seen) CHECK(h);
          seen = seen || h;
        }
      }
    }
  }

  TEST_CASE("certified sandwich nests") {
    for (double a : {0.55, 0.6, 0.75, 0.9, 1.0}) {
      for (std::int64_t k = 2; k <= 300; k += 1) {
        if (!(certified_lower_bound(a, k).value <= certified_upper_bound(a, k).value)) {
          FAIL("sandwich inverted at alpha " << a << ", k " << k);
        }
      }
    }
  }

  TEST_CASE("certified lower bound stays comparable to k^{4a-2}") {
    double lo = 1e300, hi = 0.0;
    for (std::int64_t k = 10; k <= 1000; ++k) {
      const double r = certified_lower_bound(0.75, k).value / std::pow(double(k), 1.0);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(lo > 0.0);
    CHECK(lo >= 0.2 * hi);
  }

  TEST_CASE("finite volume bounds") {
    const auto b = finite_volume_bounds(2.0, 1);
    CHECK(b.lower == doctest::Approx(kPi2 / (4 * std::pow(1 + kPi2 / 6, 2))).epsilon(1e-12));
    CHECK(b.lower == doctest::Approx(0.3527).epsilon(1e-3));
    CHECK(b.upper == doctest::Approx(kPi2 / 4));
    for (double a : {1.1, 2.0, 3.0}) {
      for (std::int64_t k = 1; k <= 50; ++k) CHECK(finite_volume_bounds(a, k).lower <= finite_volume_bounds(a, k).upper);
    }
    CHECK_THROWS_AS(finite_volume_bounds(1.0, 1), std::invalid_argument);
  }

  TEST_CASE("decoupled counting and its inversion") {
    CHECK(decoupled_counting(2.0, 10.0, 1) == 1);  // one unit tooth
    CHECK(decoupled_counting(2.0, 0.0, 50) == 0);
    CHECK_THROWS_AS(decoupled_counting(2.0, -1.0, 5), std::invalid_argument);
    for (double a : {1.5, 2.0, 3.0}) {
      const std::int64_t t = 40;
      std::vector<double> all;
      for (double l : decoupled_dirichlet_lengths(a, t)) {
        for (int j = 1; j <= 60; ++j) all.push_back(std::pow(j * kPi / l, 2));
      }
      std::sort(all.begin(), all.end());
      for (std::int64_t k : {1, 2, 5, 17, 40}) {
        CHECK(decoupled_eigenvalue(a, k, t) == doctest::Approx(all[k - 1]).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("decoupled system dominates the truncated comb") {
    for (double a : {1.5, 2.0}) {
      const std::int64_t t = 30;
      const Spectrum s = secular::eigenvalues_by_bisection(truncated_comb_chain(a, t, Condition::Dirichlet), 30);
      for (std::int64_t k = 1; k <= 30; ++k) {
        CHECK(s.lambda(static_cast<std::size_t>(k)) <= decoupled_eigenvalue(a, k, t) * (1 + 1e-12));
      }
    }
  }
}
