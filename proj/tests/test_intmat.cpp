#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>
#include <vector>

#include "fkt/intmat.hpp"
#include "test_support.hpp"

using namespace fkt;

namespace {

void check_snf_contract(const IntMatrix& a) {
  SmithForm f = smith_normal_form(a);
  CHECK(f.u * a * f.v == f.d);
  Int du = determinant(f.u);
  Int dv = determinant(f.v);
  CHECK((du == 1 || du == -1));
  CHECK((dv == 1 || dv == -1));
  auto diag = f.diagonal();
  for (std::size_t i = 0; i < diag.size(); ++i) {
    CHECK(diag[i] >= 0);
    if (i + 1 < diag.size()) {
      if (diag[i] == 0) CHECK(diag[i + 1] == 0);
      else CHECK(diag[i + 1] % diag[i] == 0);
    }
  }
  // Off-diagonal of D vanishes.
  for (std::size_t i = 0; i < f.d.rows(); ++i)
    for (std::size_t j = 0; j < f.d.cols(); ++j)
      if (i != j) CHECK(f.d(i, j) == 0);
  // d1 ... dk equals the gcd of all k x k minors.
  Int prod = 1;
  for (std::size_t k = 1; k <= f.rank; ++k) {
    prod *= diag[k - 1];
    CHECK(test::minor_gcd(a, k) == prod);
  }
  if (f.rank < std::min(a.rows(), a.cols()))
    CHECK(test::minor_gcd(a, f.rank + 1) == 0);
}

} // namespace

TEST_CASE("smith normal form on the stated examples") {
  SUBCASE("identity 2x2") {
    IntMatrix a = IntMatrix::identity(2);
    SmithForm f = smith_normal_form(a);
    CHECK(f.d == IntMatrix::identity(2));
    CHECK(f.u == IntMatrix::identity(2));
    CHECK(f.v == IntMatrix::identity(2));
  }
  SUBCASE("1x1 already diagonal") {
    for (long long p : {0, 1, 2, 7}) {
      IntMatrix a(1, 1);
      a(0, 0) = p;
      SmithForm f = smith_normal_form(a);
      CHECK(f.d(0, 0) == p);
    }
  }
  SUBCASE("[[2,4],[6,8]] has D = diag(2,4)") {
    IntMatrix a{{2, 4}, {6, 8}};
    SmithForm f = smith_normal_form(a);
    CHECK(f.d(0, 0) == 2);
    CHECK(f.d(1, 1) == 4);
    CHECK(f.u * a * f.v == f.d);
    Int det_d = determinant(f.d);
    Int det_a = determinant(a);
    CHECK((det_d == det_a || det_d == -det_a));
  }
  SUBCASE("empty shapes") {
    SmithForm f0 = smith_normal_form(IntMatrix(0, 3));
    CHECK(f0.d.rows() == 0);
    CHECK(f0.v == IntMatrix::identity(3));
    SmithForm f1 = smith_normal_form(IntMatrix(3, 0));
    CHECK(f1.u == IntMatrix::identity(3));
    CHECK(f1.rank == 0);
  }
}

TEST_CASE("kernel basis on the stated examples") {
  SUBCASE("injective 1x1") {
    IntMatrix a{{5}};
    CHECK(kernel_basis(a).cols() == 0);
  }
  SUBCASE("zero 1x2 has full rank-2 kernel") {
    IntMatrix a(1, 2);
    IntMatrix k = kernel_basis(a);
    CHECK(k.cols() == 2);
    CHECK(determinant(k) != 0);
  }
  SUBCASE("[[2,-2]] kernel is primitive (1,1) direction") {
    IntMatrix a{{2, -2}};
    IntMatrix k = kernel_basis(a);
    REQUIRE(k.cols() == 1);
    CHECK(k(0, 0) == k(1, 0));
    CHECK(gcd(k(0, 0), k(1, 0)) == 1);
    CHECK((a * k).is_zero());
  }
}

TEST_CASE("solve on the stated examples") {
  SUBCASE("2x = 4") {
    auto x = solve(IntMatrix{{2}}, {Int(4)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 2);
  }
  SUBCASE("2x = 3 has no integer solution") {
    CHECK(!solve(IntMatrix{{2}}, {Int(3)}).has_value());
  }
  SUBCASE("column (1,2), b = (1,2)") {
    auto x = solve(IntMatrix{{1}, {2}}, {Int(1), Int(2)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 1);
  }
  SUBCASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS((void)solve(IntMatrix{{1, 2}}, {Int(1), Int(2)}),
                    std::invalid_argument);
  }
}

TEST_CASE("snf property suite") {
  std::mt19937_64 rng(test::seed());
  for (int it = 0; it < 300; ++it) {
    IntMatrix a = test::random_matrix(rng, 8, -20, 20);
    check_snf_contract(a);
  }
}

TEST_CASE("kernel property suite") {
  std::mt19937_64 rng(test::seed() + 1);
  std::uniform_int_distribution<long long> small(-4, 4);
  for (int it = 0; it < 200; ++it) {
    IntMatrix a = test::random_matrix(rng, 6, -6, 6);
    IntMatrix k = kernel_basis(a);
    CHECK((a.cols() == 0 || (a * k).is_zero()));
    CHECK(rank(k) == k.cols());
    // Any kernel vector found by rejection sampling lies in the span.
    LinearSolver in_kernel(k);
    int found = 0;
    for (int trial = 0; trial < 60 && found < 3; ++trial) {
      std::vector<Int> x(a.cols());
      for (auto& e : x) e = small(rng);
      if (a.mul(x) == std::vector<Int>(a.rows())) {
        ++found;
        CHECK(in_kernel.solve(x).has_value());
      }
    }
  }
}

TEST_CASE("solve property suite") {
  std::mt19937_64 rng(test::seed() + 2);
  std::uniform_int_distribution<long long> coef(-5, 5);
  for (int it = 0; it < 200; ++it) {
    IntMatrix a = test::random_matrix(rng, 6, -8, 8);
    LinearSolver solver(a);
    // Solvable instances: b = A x0.
    std::vector<Int> x0(a.cols());
    for (auto& e : x0) e = coef(rng);
    auto sol = solver.solve(a.mul(x0));
    REQUIRE(sol.has_value());
    CHECK(a.mul(*sol) == a.mul(x0));
    // Arbitrary b: a returned solution must actually solve; a refusal must
    // carry the SNF certificate (a non-divisible pivot entry or a non-zero
    // entry beyond the rank in the transformed right-hand side).
    std::vector<Int> b(a.rows());
    for (auto& e : b) e = coef(rng);
    if (auto s = solver.solve(b)) {
      CHECK(a.mul(*s) == b);
    } else {
      SmithForm f = smith_normal_form(a);
      std::vector<Int> c = f.u.mul(b);
      bool certified = false;
      const std::size_t k = std::min(a.rows(), a.cols());
      for (std::size_t i = 0; i < a.rows(); ++i) {
        if (i < k && f.d(i, i) != 0) {
          if (c[i] % f.d(i, i) != 0) certified = true;
        } else if (c[i] != 0) {
          certified = true;
        }
      }
      CHECK(certified);
    }
  }
}

TEST_CASE("lattice equality primitives") {
  IntMatrix a{{2, 0}, {0, 3}};
  IntMatrix b{{2, 2}, {3, -3}};
  CHECK(lattice_contains(a, b));
  CHECK(lattices_equal(a, b) == lattice_contains(b, a));
  IntMatrix c{{1, 0}, {0, 3}};
  CHECK(!lattice_contains(a, c));
}
