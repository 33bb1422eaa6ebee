#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "combspec/analysis.hpp"
#include "combspec/comb.hpp"
#include "combspec/fem.hpp"
#include "combspec/secular.hpp"
#include "support.hpp"

using namespace combspec;

namespace {
constexpr auto N = Condition::KirchhoffNeumann;
constexpr auto D = Condition::Dirichlet;
constexpr double kPi = std::numbers::pi;

BackboneChain bare(double length, Condition l, Condition r) {
  BackboneChain c;
  c.segments = {length};
  c.teeth = {{}, {}};
  c.left = l;
  c.right = r;
  return c;
}

// FEM count on a mesh fine enough that the lowest `upto` eigenvalues are
// within rel of the continuum.
std::size_t fem_count(const MetricGraph& g, double lambda, double h) {
  return fem::counting_function(fem::assemble(g, fem::Mesh::uniform(g, h)), lambda);
}
}  // namespace

TEST_SUITE("secular") {
  TEST_CASE("tooth Dirichlet-to-Neumann values") {
    CHECK(secular::tooth_dtn(1.0, 0.0) == 0.0);
    CHECK(std::abs(secular::tooth_dtn(1.0, 1e-8)) < 1e-15);
    CHECK(secular::tooth_dtn(2.0, kPi / 8.0) == doctest::Approx(kPi / 8.0).epsilon(1e-14));
    CHECK(std::isinf(secular::tooth_dtn(1.0, kPi / 2.0)));
    CHECK(secular::tooth_dtn(Tooth{1.0, D}, kPi / 4.0) == doctest::Approx(-kPi / 4.0).epsilon(1e-14));
    CHECK(secular::tooth_pole_count(Tooth{1.0, N}, kPi) == 1);
    CHECK(secular::tooth_pole_count(Tooth{1.0, D}, kPi * 1.01) == 1);
  }

  TEST_CASE("bare interval counts") {
    CHECK(secular::secular_count(bare(1.0, D, D), 10.0) == 1);
    CHECK(secular::secular_count(bare(1.0, D, D), 4 * kPi * kPi + 1e-6) == 2);
    CHECK(secular::secular_count(bare(1.0, D, D), 0.0) == 0);
    CHECK(secular::secular_count(bare(1.0, N, N), 1e-12) == 1);
    const auto at = secular::secular_count_checked(bare(1.0, D, D), kPi * kPi);
    CHECK(at.ambiguous);
    CHECK_FALSE(secular::secular_count_checked(bare(1.0, D, D), 10.0).ambiguous);
  }

  TEST_CASE("interval spectra by bisection") {
    for (auto [l, r] : {std::pair{D, D}, std::pair{D, N}, std::pair{N, N}, std::pair{N, D}}) {
      const Spectrum s = secular::eigenvalues_by_bisection(bare(1.0, l, r), 20, 1e-10);
      for (std::size_t k = 1; k <= 20; ++k) {
        double f = static_cast<double>(k);
        if (l == N && r == N) f -= 1.0;
        else if (l != r) f -= 0.5;
        CHECK(std::abs(s.lambda(k) - f * f * kPi * kPi) <= 1e-10);
        CHECK(s.errors[k - 1] <= 0.5e-10);
      }
    }
  }

  TEST_CASE("embedded tooth pole counted with its multiplicity") {
    // Star with three unit arms as a chain: tip - center - tip, one tooth.
    BackboneChain c;
    c.segments = {1.0, 1.0};
    c.teeth = {{}, {Tooth{1.0, N}}, {}};
    const Spectrum s = secular::eigenvalues_by_bisection(c, 8, 1e-11);
    const double q = kPi * kPi / 4.0;
    const std::vector<double> exact{0.0, q, q, 4 * q, 9 * q, 9 * q, 16 * q, 25 * q};
    for (std::size_t i = 0; i < exact.size(); ++i) CHECK(std::abs(s[i] - exact[i]) < 1e-10);
    const MetricGraph g = chain_to_graph(c);
    for (double lam : {0.9 * q, 1.1 * q, 3.9 * q, 4.1 * q, 8.9 * q, 9.1 * q}) {
      CHECK(secular::secular_count(c, lam) == fem_count(g, lam, 2e-3));
    }
  }

  TEST_CASE("counts agree with FEM inertia on G_{1,20}") {
    const BackboneChain c = truncated_comb_chain(1.0, 20, D);
    const MetricGraph g = chain_to_graph(c);
    const Spectrum s = secular::eigenvalues_by_bisection(c, 25);
    const auto op = fem::assemble(g, fem::Mesh::uniform(g, 2e-3));
    fem::InertiaCounter counter(op);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const double gap = s[i + 1] - s[i];
      if (gap < 1e-3 * s[i + 1]) continue;  // FEM shift would not separate them
      const double mid = 0.5 * (s[i] + s[i + 1]);
      CHECK(secular::secular_count(c, mid) == counter(mid));
    }
  }

  TEST_CASE("random caterpillars agree with FEM") {
    std::mt19937_64 rng(testsupport::kSeed + 1);
    for (int trial = 0; trial < 12; ++trial) {
      const BackboneChain c = testsupport::random_chain(rng, 2 + trial % 4, true);
      const MetricGraph g = chain_to_graph(c);
      const Spectrum a = secular::eigenvalues_by_bisection(c, 8);
      const Spectrum b = fem::refine_until(g, 8, 1e-9);
      for (std::size_t k = 1; k <= 8; ++k) {
        CAPTURE(trial);
        CAPTURE(k);
        CHECK(std::abs(a.lambda(k) - b.lambda(k)) <= 10 * (a.errors[k - 1] + b.errors[k - 1]) + 1e-9);
      }
    }
  }

  TEST_CASE("G_{0.6,100} first 30 agree with refined FEM") {
    const BackboneChain c = truncated_comb_chain(0.6, 100, D);
    const Spectrum a = secular::eigenvalues_by_bisection(c, 30);
    const Spectrum b = fem::refine_until(chain_to_graph(c), 30, 1e-8);
    for (std::size_t k = 1; k <= 30; ++k) CHECK(std::abs(a.lambda(k) - b.lambda(k)) <= 1e-5 * a.lambda(k));
  }

  TEST_CASE("count is nondecreasing in lambda") {
    const BackboneChain c = truncated_comb_chain(0.75, 60, D);
    std::size_t prev = 0;
    for (double lam = 0.0; lam < 5e4; lam += 37.3) {
      const std::size_t n = secular::secular_count(c, lam);
      CHECK(n >= prev);
      prev = n;
    }
  }

  TEST_CASE("lengthening a tooth does not raise any eigenvalue") {
    std::mt19937_64 rng(testsupport::kSeed + 2);
    for (double a : {0.6, 1.0, 2.0}) {
      const BackboneChain base = truncated_comb_chain(a, 15, D);
      const Spectrum s0 = secular::eigenvalues_by_bisection(base, 20);
      for (int trial = 0; trial < 5; ++trial) {
        BackboneChain c = base;
        const std::size_t node = std::uniform_int_distribution<std::size_t>(0, 14)(rng);
        REQUIRE_FALSE(c.teeth[node].empty());
        c.teeth[node][0].length *= 1.3;
        const Spectrum s1 = secular::eigenvalues_by_bisection(c, 20);
        for (std::size_t k = 1; k <= 20; ++k) CHECK(s1.lambda(k) <= s0.lambda(k) + 1e-9);
      }
    }
  }

  TEST_CASE("frequency ceiling covers the requested count") {
    const BackboneChain c = truncated_comb_chain(1.0, 30, D);
    const double s = secular::frequency_ceiling(c, 40);
    CHECK(secular::secular_count(c, s * s) >= 40);
  }
}
