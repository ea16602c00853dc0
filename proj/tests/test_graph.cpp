#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "fkt/graph.hpp"
#include "test_support.hpp"

using namespace fkt;

namespace {

Graph case1_graph(long long p, long long x, long long y, long long z) {
  return Graph(IntMatrix{{0, 0, 0}, {z, p + 1, 0}, {y, x, p + 1}});
}

Graph case2_graph(long long p, long long x, long long y, long long z) {
  return Graph(IntMatrix{
      {0, 0, 0, 0}, {x, p + 1, 0, 0}, {y, 0, p + 1, 0}, {z, 0, 0, p + 1}});
}

Graph intro_graph(long long n) { return case1_graph(2, 1, 1, n); }

Graph random_graph(std::mt19937_64& rng, std::size_t max_n, int max_entry) {
  std::uniform_int_distribution<std::size_t> nd(1, max_n);
  std::uniform_int_distribution<int> pick(0, 99);
  std::size_t n = nd(rng);
  IntMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      int r = pick(rng);
      int v = r < 55 ? 0 : r < 80 ? 1 : r < 92 ? 2 : 3;
      a(i, j) = std::min(v, max_entry);
    }
  return Graph(a);
}

Graph permuted(const Graph& g, const std::vector<std::size_t>& perm) {
  IntMatrix a(g.vertices(), g.vertices());
  for (std::size_t i = 0; i < g.vertices(); ++i)
    for (std::size_t j = 0; j < g.vertices(); ++j)
      a(perm[i], perm[j]) = g.edges(i, j);
  return Graph(a);
}

} // namespace

TEST_CASE("hereditary saturated lattice") {
  SUBCASE("Case I gives the length-3 chain") {
    Graph g = case1_graph(2, 1, 2, 3);
    IdealLattice lat = hereditary_saturated_subsets(g);
    REQUIRE(lat.subsets.size() == 4);
    CHECK(lat.is_linear);
    CHECK(lat.subsets[0] == VertexSet{});
    CHECK(lat.subsets[1] == VertexSet{0});
    CHECK(lat.subsets[2] == VertexSet{0, 1});
    CHECK(lat.subsets[3] == VertexSet{0, 1, 2});
  }
  SUBCASE("single vertex, no loops") {
    Graph g(IntMatrix{{0}});
    IdealLattice lat = hereditary_saturated_subsets(g);
    REQUIRE(lat.subsets.size() == 2);
    CHECK(lat.is_linear);
  }
  SUBCASE("Case II is the non-linear 4-point lattice") {
    Graph g = case2_graph(2, 1, 1, 1);
    IdealLattice lat = hereditary_saturated_subsets(g);
    CHECK(lat.subsets.size() == 9);
    CHECK(!lat.is_linear);
    // least non-trivial set is {0}, with three incomparable sets above it
    std::size_t atoms = 0, mids = 0;
    for (auto [lo, hi] : lat.covers) {
      if (lat.subsets[lo].empty()) ++atoms;
      if (lat.subsets[lo] == VertexSet{0}) ++mids;
    }
    CHECK(atoms == 1);
    CHECK(mids == 3);
  }
  SUBCASE("lattice is closed under intersection and join-closure") {
    std::mt19937_64 rng(test::seed() + 20);
    for (int it = 0; it < 40; ++it) {
      Graph g = random_graph(rng, 5, 3);
      IdealLattice lat = hereditary_saturated_subsets(g);
      for (const auto& a : lat.subsets)
        for (const auto& b : lat.subsets) {
          VertexSet meet, join;
          std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(meet));
          std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                         std::back_inserter(join));
          CHECK(is_hereditary_saturated(g, meet));
          CHECK(std::find(lat.subsets.begin(), lat.subsets.end(), meet) !=
                lat.subsets.end());
          // join-closure lands in the lattice
          bool found = false;
          for (const auto& c : lat.subsets)
            if (std::includes(c.begin(), c.end(), join.begin(), join.end())) {
              found = true;
              break;
            }
          CHECK(found);
        }
    }
  }
}

TEST_CASE("condition K") {
  SUBCASE("single loop fails") {
    CHECK(!condition_K(Graph(IntMatrix{{1}})));
  }
  SUBCASE("p+1 >= 2 loops pass") {
    CHECK(condition_K(Graph(IntMatrix{{3}})));
    CHECK(condition_K(Graph(IntMatrix{{2}})));
  }
  SUBCASE("sink-only graph passes vacuously") {
    CHECK(condition_K(Graph(IntMatrix::zero(3, 3))));
  }
  SUBCASE("two-cycle with an extra loop passes; bare two-cycle fails") {
    // v0 <-> v1 is one return path each; with a loop at v1 there are two.
    CHECK(!condition_K(Graph(IntMatrix{{0, 1}, {1, 0}})));
    CHECK(condition_K(Graph(IntMatrix{{0, 1}, {1, 1}})));
  }
  SUBCASE("invariant under vertex relabeling") {
    std::mt19937_64 rng(test::seed() + 21);
    for (int it = 0; it < 50; ++it) {
      Graph g = random_graph(rng, 5, 3);
      std::vector<std::size_t> perm(g.vertices());
      for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      CHECK(condition_K(g) == condition_K(permuted(g, perm)));
    }
  }
}

TEST_CASE("subquotient graphs") {
  Graph g = case1_graph(2, 1, 1, 1);
  SUBCASE("whole graph and empty difference") {
    Graph whole = subquotient_graph(g, {0, 1, 2}, {});
    CHECK(whole.adjacency() == g.adjacency());
    Graph empty = subquotient_graph(g, {0, 1}, {0, 1});
    CHECK(empty.vertices() == 0);
  }
  SUBCASE("middle simple subquotient is a single vertex with p+1 loops") {
    Graph mid = subquotient_graph(g, {0, 1}, {0});
    REQUIRE(mid.vertices() == 1);
    CHECK(mid.edges(0, 0) == 3);
  }
  SUBCASE("least ideal is a single sink") {
    Graph bottom = subquotient_graph(g, {0}, {});
    REQUIRE(bottom.vertices() == 1);
    CHECK(bottom.is_sink(0));
  }
  SUBCASE("invalid inputs are rejected") {
    CHECK_THROWS_AS((void)subquotient_graph(g, {0}, {1}), std::invalid_argument);
    CHECK_THROWS_AS((void)subquotient_graph(g, {1}, {}), std::invalid_argument);
  }
  SUBCASE("nested subquotients compose") {
    std::mt19937_64 rng(test::seed() + 22);
    for (int it = 0; it < 30; ++it) {
      Graph h = random_graph(rng, 5, 2);
      IdealLattice lat = hereditary_saturated_subsets(h);
      for (const auto& a : lat.subsets)
        for (const auto& c : lat.subsets) {
          if (!std::includes(c.begin(), c.end(), a.begin(), a.end())) continue;
          // restrict to c first, then take the a-part inside it
          Graph on_c = subquotient_graph(h, c, {});
          VertexSet a_pos, all_pos;
          for (std::size_t i = 0; i < c.size(); ++i) {
            all_pos.push_back(i);
            if (std::binary_search(a.begin(), a.end(), c[i])) a_pos.push_back(i);
          }
          Graph nested = subquotient_graph(on_c, all_pos, a_pos);
          Graph direct = subquotient_graph(h, c, a);
          CHECK(nested.adjacency() == direct.adjacency());
        }
    }
  }
}

TEST_CASE("subquotient types") {
  CHECK(subquotient_type(Graph(IntMatrix{{0}})) == SubquotientType::AF);
  CHECK(subquotient_type(Graph(IntMatrix{{3}})) ==
        SubquotientType::PurelyInfiniteSimpleLike);
  // loop feeding a sink: both finite and infinite simple subquotients
  CHECK(subquotient_type(Graph(IntMatrix{{2, 1}, {0, 0}})) == SubquotientType::Mixed);
  CHECK(subquotient_type(Graph(IntMatrix{{1}})) == SubquotientType::Mixed);
}

TEST_CASE("class membership") {
  SUBCASE("intro family is in C_3 with the least ideal as AF part") {
    CnMembership m = class_Cn_membership(intro_graph(2));
    CHECK(m.member);
    CHECK(m.n == 3);
    CHECK(m.split == 1);
    CHECK(m.orientation == SplitOrientation::af_ideal);
  }
  SUBCASE("single loop fails Condition (K)") {
    CnMembership m = class_Cn_membership(Graph(IntMatrix{{1}}));
    CHECK(!m.member);
    CHECK(m.reason == "Condition (K) fails");
  }
  SUBCASE("Case II is rejected but flagged for the extension route") {
    CnMembership m = class_Cn_membership(case2_graph(2, 1, 2, 1));
    CHECK(!m.member);
    CHECK(m.reason == "ideal lattice is not linear");
    CHECK(m.least_ideal_extension_eligible);
  }
  SUBCASE("members split into AF and purely infinite parts with one transition") {
    std::mt19937_64 rng(test::seed() + 23);
    for (int it = 0; it < 80; ++it) {
      Graph g = random_graph(rng, 5, 3);
      CnMembership m = class_Cn_membership(g);
      if (!m.member) continue;
      IdealLattice lat = hereditary_saturated_subsets(g);
      REQUIRE(lat.is_linear);
      int transitions = 0;
      bool prev_cycle = false;
      for (std::size_t i = 1; i < lat.subsets.size(); ++i) {
        Graph simple = subquotient_graph(g, lat.subsets[i], lat.subsets[i - 1]);
        bool cyc = simple.has_cycle();
        if (i > 1 && cyc != prev_cycle) ++transitions;
        prev_cycle = cyc;
        CHECK((subquotient_type(simple) == SubquotientType::AF ||
               subquotient_type(simple) ==
                   SubquotientType::PurelyInfiniteSimpleLike));
      }
      CHECK(transitions <= 1);
    }
  }
}
