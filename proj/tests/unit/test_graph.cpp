#include <doctest.h>

#include <cmath>
#include <random>

#include "combspec/comb.hpp"
#include "combspec/graph.hpp"
#include "support.hpp"

using namespace combspec;
using testsupport::interval;
using testsupport::star;

namespace {
constexpr auto N = Condition::KirchhoffNeumann;
constexpr auto D = Condition::Dirichlet;

MetricGraph triangle() {
  GraphBuilder b;
  b.add_edge("a", "b", 1.0);
  b.add_edge("b", "c", 1.0);
  b.add_edge("c", "a", 1.0);
  return std::move(b).build();
}
}  // namespace

TEST_SUITE("graph") {
  TEST_CASE("construction rejects invalid input") {
    CHECK_THROWS_AS(MetricGraph({{"a", N}, {"b", N}}, {{0, 1, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(MetricGraph({{"a", N}, {"b", N}}, {{0, 1, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(MetricGraph({{"a", N}, {"b", N}}, {{0, 1, NAN}}), std::invalid_argument);
    CHECK_THROWS_AS(MetricGraph({{"a", N}, {"b", N}}, {{0, 2, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(MetricGraph({{"a", N}, {"a", N}}, {{0, 1, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(MetricGraph({{"a", N}, {"b", N}, {"c", N}}, {{0, 1, 1.0}}),
                    std::invalid_argument);
    // loops and parallel edges are fine
    MetricGraph g({{"a", N}, {"b", N}}, {{0, 1, 1.0}, {0, 1, 2.0}, {1, 1, 0.5}});
    CHECK(g.degree(1) == 4);
    CHECK_FALSE(is_tree(g));
  }

  TEST_CASE("volume") {
    CHECK(volume(interval(1.0, N, N)) == 1.0);
    CHECK(volume(star(3, 0.5)) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(volume(build_truncated_comb(1.0, 1, D)) == doctest::Approx(1.25).epsilon(1e-15));
  }

  TEST_CASE("diameter") {
    CHECK(diameter(interval(1.0, N, N)) == doctest::Approx(1.0));
    CHECK(diameter(star(3, 1.0)) == doctest::Approx(2.0));
    // non-tree: antipodal points of a unit-edge triangle
    CHECK(diameter(triangle()) == doctest::Approx(1.5).epsilon(1e-12));
    for (double a : {0.3, 0.5, 0.6, 0.75, 1.0, 1.5, 2.0, 3.0}) {
      for (std::int64_t k : {2, 3, 5, 10, 40, 200}) {
        CAPTURE(a);
        CAPTURE(k);
        CHECK(std::abs(diameter(build_truncated_comb(a, k, D)) - 2.0) <= 1e-12);
      }
    }
  }

  TEST_CASE("cut_at") {
    const auto parts = cut_at(interval(2.0, N, N), 0, 1.0, N);
    REQUIRE(parts.size() == 2);
    CHECK(volume(parts[0]) == 1.0);
    CHECK(volume(parts[1]) == 1.0);
    CHECK(pendant_counts(parts[0]) == PendantCounts{0, 2});

    CHECK_THROWS_AS(cut_at(interval(2.0, N, N), 0, 0.0, N), std::invalid_argument);
    CHECK_THROWS_AS(cut_at(interval(2.0, N, N), 0, 2.0, N), std::invalid_argument);

    // loop edge: stays connected, two new pendants
    MetricGraph loop({{"a", N}, {"b", N}}, {{0, 1, 1.0}, {1, 1, 3.0}});
    const auto l = cut_at(loop, 1, 1.0, D);
    REQUIRE(l.size() == 1);
    CHECK(volume(l[0]) == doctest::Approx(4.0));
    CHECK(pendant_counts(l[0]) == PendantCounts{2, 1});

    // comb backbone between teeth 1 and 2, midpoint, Dirichlet
    const MetricGraph comb = build_truncated_comb(1.0, 5, D);
    const std::size_t f1 = comb.index_of("foot1");
    const std::size_t f2 = comb.index_of("foot2");
    std::size_t e12 = 0;
    for (std::size_t e = 0; e < comb.edge_count(); ++e) {
      const auto& ed = comb.edges()[e];
      if ((ed.a == f1 && ed.b == f2) || (ed.a == f2 && ed.b == f1)) e12 = e;
    }
    const auto& ed = comb.edges()[e12];
    const auto c = cut_at(comb, e12, 0.5 * ed.length, D);
    REQUIRE(c.size() == 2);
    const bool foot1_first = ed.a == f1;
    const MetricGraph& top = foot1_first ? c[0] : c[1];
    const MetricGraph& rest = foot1_first ? c[1] : c[0];
    CHECK(volume(top) == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(volume(top) + volume(rest) == doctest::Approx(volume(comb)).epsilon(1e-12));
  }

  TEST_CASE("volume additivity under random cuts") {
    std::mt19937_64 rng(testsupport::kSeed);
    for (int trial = 0; trial < 200; ++trial) {
      const MetricGraph g = testsupport::random_tree(rng, 2 + trial % 15, 0.3);
      const std::size_t e = std::uniform_int_distribution<std::size_t>(0, g.edge_count() - 1)(rng);
      const double t = std::uniform_real_distribution<double>(0.01, 0.99)(rng);
      const auto parts = cut_at(g, e, t * g.edges()[e].length, trial % 2 ? N : D);
      double sum = 0.0;
      for (const auto& p : parts) sum += volume(p);
      CHECK(std::abs(sum - volume(g)) <= 1e-12 * volume(g));
      CHECK(parts.size() == 2);
    }
  }

  TEST_CASE("split_at_vertex") {
    const auto s = split_at_vertex(star(3, 1.0), 0, N);
    REQUIRE(s.size() == 3);
    for (const auto& p : s) {
      CHECK(p.edge_count() == 1);
      CHECK(pendant_counts(p) == PendantCounts{0, 2});
    }

    GraphBuilder b;
    b.add_edge("a", "b", 1.0);
    b.add_edge("b", "c", 2.0);
    const MetricGraph path = std::move(b).build();
    const auto pd = split_at_vertex(path, path.index_of("b"), D);
    REQUIRE(pd.size() == 2);
    for (const auto& p : pd) {
      CHECK(p.edge_count() == 1);
      CHECK(pendant_counts(p) == PendantCounts{1, 1});
      for (const auto& v : p.vertices()) {
        if (v.id.rfind("b", 0) == 0) CHECK(v.condition == D);
      }
    }
    CHECK_THROWS_AS(split_at_vertex(path, path.index_of("a"), D), std::invalid_argument);
  }

  TEST_CASE("comb split at a tooth foot yields the finite part") {
    for (double a : {0.6, 1.0, 2.0}) {
      for (std::int64_t n : {2, 3, 7, 20}) {
        CAPTURE(a);
        CAPTURE(n);
        const MetricGraph comb = build_truncated_comb(a, n + 3, D);
        const auto parts = split_at_vertex(comb, comb.index_of("foot" + std::to_string(n)), N);
        REQUIRE(parts.size() == 3);
        const MetricGraph& top = parts.front();  // holds foot1
        REQUIRE(top.find("foot1").has_value());
        CHECK(testsupport::tree_canonical(top) ==
              testsupport::tree_canonical(build_finite_part(a, n)));
      }
    }
  }

  TEST_CASE("pendant_counts") {
    CHECK(pendant_counts(interval(1.0, D, N)) == PendantCounts{1, 1});
    for (std::int64_t k : {1, 2, 9}) {
      CHECK(pendant_counts(build_truncated_comb(0.8, k, D)) ==
            PendantCounts{1, static_cast<std::size_t>(k)});
    }
    for (std::int64_t n : {2, 5, 30}) {
      CHECK(pendant_counts(build_finite_part(0.8, n)) ==
            PendantCounts{0, static_cast<std::size_t>(n)});
    }
  }

  TEST_CASE("is_tree") {
    CHECK(is_tree(interval(1.0, N, N)));
    CHECK(is_tree(build_truncated_comb(0.7, 12, N)));
    CHECK(is_tree(build_finite_part(1.5, 12)));
    CHECK_FALSE(is_tree(triangle()));
  }

  TEST_CASE("suppress_degree_two merges through Kirchhoff vertices only") {
    GraphBuilder b;
    b.add_edge("a", "m", 0.25);
    b.add_edge("m", "c", 0.5);
    const MetricGraph path = std::move(b).build();
    const MetricGraph s = suppress_degree_two(path);
    CHECK(s.edge_count() == 1);
    CHECK(volume(s) == 0.75);

    GraphBuilder bd;
    bd.add_edge("a", "m", 0.25);
    bd.add_edge("m", "c", 0.5);
    bd.set_condition(1, D);
    CHECK(suppress_degree_two(std::move(bd).build()).edge_count() == 2);

    const MetricGraph t = suppress_degree_two(triangle());
    CHECK(volume(t) == doctest::Approx(3.0));
    CHECK(t.edge_count() == 1);
  }

  TEST_CASE("fingerprint is stable and sensitive") {
    const MetricGraph a = build_truncated_comb(0.75, 6, D);
    const MetricGraph b = build_truncated_comb(0.75, 6, D);
    CHECK(a.fingerprint() == b.fingerprint());
    CHECK(a.fingerprint() != build_truncated_comb(0.75, 6, N).fingerprint());
    CHECK(a.fingerprint() != build_truncated_comb(0.7500001, 6, D).fingerprint());
  }
}
