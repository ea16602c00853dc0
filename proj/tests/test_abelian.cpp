#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fkt/abelian.hpp"
#include "test_support.hpp"

using namespace fkt;

namespace {

FgAbGroup z_mod(long long n) {
  IntMatrix p(1, 1);
  p(0, 0) = n;
  return FgAbGroup(p);
}

std::vector<Int> vec(std::initializer_list<long long> xs) {
  std::vector<Int> out;
  for (long long x : xs) out.emplace_back(x);
  return out;
}

} // namespace

TEST_CASE("cokernel canonical forms") {
  SUBCASE("cok[2] is Z/2") {
    FgAbGroup g = z_mod(2);
    CHECK(g.free_rank() == 0);
    REQUIRE(g.invariant_factors().size() == 1);
    CHECK(g.invariant_factors()[0] == 2);
    CHECK(g.order() == 2);
  }
  SUBCASE("k x 0 presentation is free of rank k") {
    FgAbGroup g = FgAbGroup::free_group(3);
    CHECK(g.free_rank() == 3);
    CHECK(g.invariant_factors().empty());
  }
  SUBCASE("column (1,2) presents Z") {
    FgAbGroup g(IntMatrix{{1}, {2}});
    CHECK(g.free_rank() == 1);
    CHECK(g.invariant_factors().empty());
    CHECK(group_to_string(g) == "Z");
  }
  SUBCASE("zero group") {
    FgAbGroup g(IntMatrix{{1}});
    CHECK(g.is_trivial());
    CHECK(group_to_string(g) == "0");
  }
}

TEST_CASE("canonical form is invariant under unimodular change of presentation") {
  std::mt19937_64 rng(test::seed());
  for (int it = 0; it < 60; ++it) {
    IntMatrix p = test::random_matrix(rng, 5, -6, 6);
    FgAbGroup g(p);
    IntMatrix u = test::random_unimodular(rng, p.rows());
    IntMatrix v = test::random_unimodular(rng, p.cols());
    FgAbGroup h(u * p * v);
    CHECK(canonical_forms_equal(g, h));
    // The stored transform sends relations into the canonical relation lattice.
    IntMatrix image = g.to_canonical() * p;
    for (std::size_t j = 0; j < image.cols(); ++j) {
      auto col = image.column(j);
      for (std::size_t i = 0; i < col.size(); ++i) {
        const Int& m = g.canonical_moduli()[i];
        if (m == 0) CHECK(col[i] == 0);
        else CHECK(col[i] % m == 0);
      }
    }
  }
}

TEST_CASE("compose") {
  FgAbGroup z = FgAbGroup::free_group(1);
  FgAbGroup z2 = FgAbGroup::free_group(2);
  FgAbGroup q(IntMatrix{{1}, {2}}); // Z^2 / <(1,2)>

  GroupHom f{z, z2, IntMatrix{{1}, {0}}};
  GroupHom g{z2, q, IntMatrix::identity(2)};

  SUBCASE("identity and zero") {
    CHECK(homs_equal(compose(identity_hom(z2), f), f));
    CHECK(homs_equal(compose(zero_hom(z2, q), f), zero_hom(z, q)));
  }
  SUBCASE("canonical composite matches the direct canonical map") {
    GroupHom direct{z, q, IntMatrix{{1}, {0}}};
    CHECK(homs_equal(compose(g, f), direct));
  }
  SUBCASE("mismatched middle group is rejected") {
    GroupHom h{q, z, IntMatrix{{0, 0}}};
    CHECK_THROWS_AS((void)compose(h, f), std::invalid_argument);
  }
}

TEST_CASE("homs_equal") {
  FgAbGroup z = FgAbGroup::free_group(1);
  FgAbGroup z2g = z_mod(2);
  GroupHom f{z, z2g, IntMatrix{{1}}};
  GroupHom g{z, z2g, IntMatrix{{3}}};
  CHECK(homs_equal(f, f));
  CHECK(homs_equal(f, g));
  GroupHom a{z, z, IntMatrix{{1}}};
  GroupHom b{z, z, IntMatrix{{2}}};
  CHECK(!homs_equal(a, b));
}

TEST_CASE("is_isomorphism") {
  SUBCASE("identity on Z + Z/2") {
    FgAbGroup g(IntMatrix{{0}, {2}});
    CHECK(is_isomorphism(identity_hom(g)));
  }
  SUBCASE("multiplication by p on Z/p is the zero map") {
    FgAbGroup g = z_mod(5);
    GroupHom f{g, g, IntMatrix{{5}}};
    CHECK(is_well_defined(f));
    CHECK(!is_isomorphism(f));
    CHECK(homs_equal(f, zero_hom(g, g)));
  }
  SUBCASE("Z/2 and Z/4 are not isomorphic") {
    GroupHom f{z_mod(4), z_mod(2), IntMatrix{{1}}};
    CHECK(is_well_defined(f));
    CHECK(is_surjective(f));
    CHECK(!is_isomorphism(f));
    GroupHom g{z_mod(2), z_mod(4), IntMatrix{{1}}};
    CHECK(!is_well_defined(g));
    GroupHom h{z_mod(2), z_mod(4), IntMatrix{{2}}};
    CHECK(is_well_defined(h));
    CHECK(!is_isomorphism(h));
  }
}

TEST_CASE("hom_candidates counts") {
  FgAbGroup z = FgAbGroup::free_group(1);
  FgAbGroup z2 = z_mod(2);
  SUBCASE("Hom(Z/2, Z/2) has two elements") {
    auto e = hom_candidates(z2, z2, {}, 4);
    CHECK(e.homs.size() == 2);
    CHECK(e.complete);
  }
  SUBCASE("Hom(Z, Z) with bound 1") {
    auto e = hom_candidates(z, z, {}, 1);
    CHECK(e.homs.size() == 3);
    CHECK(!e.complete);
  }
  SUBCASE("Hom(Z, Z/2) has two elements") {
    auto e = hom_candidates(z, z2, {}, 7);
    CHECK(e.homs.size() == 2);
    CHECK(e.complete);
  }
  SUBCASE("commuting-square constraint pins the candidate") {
    // h : Z -> Z with h o id == (x -> 2x).
    GroupHom doubling{z, z, IntMatrix{{2}}};
    SquareConstraint c{identity_hom(z), identity_hom(z), doubling};
    auto e = hom_candidates(z, z, {c}, 5);
    REQUIRE(e.homs.size() == 1);
    CHECK(e.homs[0].lift(0, 0) == 2);
    CHECK(e.complete);
  }
  SUBCASE("well-definedness holds for every candidate") {
    std::mt19937_64 rng(test::seed() + 9);
    for (int it = 0; it < 25; ++it) {
      FgAbGroup a(test::random_matrix(rng, 3, -4, 4));
      FgAbGroup b(test::random_matrix(rng, 3, -4, 4));
      auto e = hom_candidates(a, b, {}, 1, {.max_candidates = 5000});
      for (const auto& h : e.homs) CHECK(is_well_defined(h));
    }
  }
}

TEST_CASE("iso_candidates") {
  SUBCASE("Aut(Z) = {+1, -1}") {
    FgAbGroup z = FgAbGroup::free_group(1);
    auto e = iso_candidates(z, z, {}, 1);
    CHECK(e.homs.size() == 2);
    CHECK(e.complete);
  }
  SUBCASE("Aut(Z + Z/2) has 4 elements and the search is complete") {
    FgAbGroup g(IntMatrix{{0}, {2}});
    auto e = iso_candidates(g, g, {}, 1);
    CHECK(e.homs.size() == 4);
    CHECK(e.complete);
    for (const auto& h : e.homs) {
      CHECK(is_well_defined(h));
      CHECK(is_isomorphism(h));
    }
  }
  SUBCASE("automorphism counts of small groups") {
    auto autos = [](const IntMatrix& pres) {
      FgAbGroup g(pres);
      return iso_candidates(g, g, {}, 2).homs.size();
    };
    CHECK(autos(IntMatrix{{2, 0}, {0, 2}}) == 6);  // GL(2, F2)
    CHECK(autos(IntMatrix{{2, 0}, {0, 4}}) == 8);  // Aut(Z/2 x Z/4)
    CHECK(autos(IntMatrix{{0}, {4}}) == 16);       // Aut(Z + Z/4)
    CHECK(autos(IntMatrix{{5}}) == 4);             // units mod 5
  }
  SUBCASE("mismatched canonical forms yield an empty complete enumeration") {
    auto e = iso_candidates(z_mod(2), z_mod(4), {}, 3);
    CHECK(e.homs.empty());
    CHECK(e.complete);
  }
  SUBCASE("every isomorphism has a two-sided inverse") {
    std::mt19937_64 rng(test::seed() + 10);
    for (int it = 0; it < 20; ++it) {
      IntMatrix p = test::random_matrix(rng, 3, -5, 5);
      FgAbGroup g(p);
      if (!g.is_finite() || g.order() > 64) continue;
      auto e = iso_candidates(g, g, {}, 2);
      CHECK(e.complete);
      for (const auto& h : e.homs) {
        auto inv = hom_inverse(h);
        REQUIRE(inv.has_value());
        CHECK(homs_equal(compose(*inv, h), identity_hom(g)));
        CHECK(homs_equal(compose(h, *inv), identity_hom(g)));
      }
    }
  }
}

TEST_CASE("cone membership") {
  FgAbGroup z = FgAbGroup::free_group(1);
  Cone positive{z, {vec({1})}};
  SUBCASE("identity preserves the positive cone") {
    CHECK(cone_maps_into(identity_hom(z), positive, positive) == TriState::yes);
  }
  SUBCASE("negation is rejected with a certificate") {
    GroupHom neg{z, z, IntMatrix{{-1}}};
    CHECK(cone_maps_into(neg, positive, positive) == TriState::no);
  }
  SUBCASE("numerical semigroup <2,3>") {
    Cone c{z, {vec({2}), vec({3})}};
    CHECK(cone_member(c, vec({1})).state == TriState::no);
    CHECK(cone_member(c, vec({7})).state == TriState::yes);
    CHECK(cone_member(c, vec({-2})).state == TriState::no);
  }
  SUBCASE("mixed signs make the monoid a group") {
    Cone c{z, {vec({2}), vec({-3})}};
    CHECK(cone_member(c, vec({1})).state == TriState::yes);
    CHECK(cone_member(c, vec({-5})).state == TriState::yes);
    CHECK(cone_is_full(c) == TriState::yes);
  }
  SUBCASE("torsion coupling is decided exactly") {
    FgAbGroup g(IntMatrix{{0}, {2}}); // Z + Z/2
    Cone c{g, {vec({1, 1})}};
    CHECK(cone_member(c, vec({1, 0})).state == TriState::no);
    CHECK(cone_member(c, vec({2, 0})).state == TriState::yes);
    CHECK(cone_member(c, vec({3, 1})).state == TriState::yes);
  }
  SUBCASE("finite groups are decided by reachability") {
    FgAbGroup g = z_mod(6);
    Cone c{g, {vec({2})}};
    CHECK(cone_member(c, vec({4})).state == TriState::yes);
    CHECK(cone_member(c, vec({3})).state == TriState::no);
    CHECK(cone_is_full(c) == TriState::no);
    Cone full{g, {vec({1})}};
    CHECK(cone_is_full(full) == TriState::yes);
  }
  SUBCASE("full cones accept any iso image") {
    FgAbGroup g(IntMatrix{{0}, {2}});
    Cone full{g, {vec({1, 0}), vec({-1, 0}), vec({0, 1})}};
    CHECK(cone_is_full(full) == TriState::yes);
    auto autos = iso_candidates(g, g, {}, 1);
    for (const auto& h : autos.homs)
      CHECK(cone_maps_into(h, full, full) == TriState::yes);
  }
  SUBCASE("rank-2 pointed cones are decided by a separating functional") {
    FgAbGroup z2 = FgAbGroup::free_group(2);
    Cone c{z2, {vec({1, 0}), vec({-1, 1})}};
    CHECK(cone_member(c, vec({-2, 3})).state == TriState::yes);
    CHECK(cone_member(c, vec({1, -1})).state == TriState::no);
    CHECK(cone_member(c, vec({0, -1})).state == TriState::no);
    Cone std2{z2, {vec({1, 0}), vec({0, 1})}};
    CHECK(cone_member(std2, vec({3, 4})).state == TriState::yes);
    CHECK(cone_member(std2, vec({-1, 2})).state == TriState::no);
  }
  SUBCASE("rank-2 cone containing a line") {
    FgAbGroup z2 = FgAbGroup::free_group(2);
    Cone c{z2, {vec({1, 0}), vec({-1, 0}), vec({0, 1})}};
    CHECK(cone_member(c, vec({-5, 3})).state == TriState::yes);
    CHECK(cone_member(c, vec({7, 0})).state == TriState::yes);
    CHECK(cone_member(c, vec({0, -1})).state == TriState::no);
  }
  SUBCASE("composition of yes results stays yes") {
    Cone c{z, {vec({1})}};
    GroupHom f{z, z, IntMatrix{{2}}};
    GroupHom g{z, z, IntMatrix{{3}}};
    CHECK(cone_maps_into(f, c, c) == TriState::yes);
    CHECK(cone_maps_into(g, c, c) == TriState::yes);
    CHECK(cone_maps_into(compose(g, f), c, c) == TriState::yes);
  }
}
