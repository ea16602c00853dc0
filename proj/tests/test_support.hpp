#pragma once

#include <algorithm>
#include <cstdlib>
#include <random>
#include <string>

#include "fkt/intmat.hpp"

namespace fkt::test {

/// Seed for randomized suites; override with the FKT_SEED environment
/// variable to reproduce a failing run.
inline std::uint64_t seed() {
  if (const char* s = std::getenv("FKT_SEED")) return std::strtoull(s, nullptr, 10);
  return 20230811u;
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t max_dim,
                               long long lo, long long hi) {
  std::uniform_int_distribution<std::size_t> dim(0, max_dim);
  std::uniform_int_distribution<long long> entry(lo, hi);
  IntMatrix m(dim(rng), dim(rng));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = entry(rng);
  return m;
}

/// Independent oracle: gcd of all k x k minors via subset enumeration and
/// Bareiss determinants.
inline Int minor_gcd(const IntMatrix& a, std::size_t k) {
  Int g = 0;
  std::vector<bool> rmask(a.rows(), false), cmask(a.cols(), false);
  std::fill(rmask.begin(), rmask.begin() + k, true);
  do {
    std::vector<std::size_t> ri;
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (rmask[i]) ri.push_back(i);
    std::fill(cmask.begin(), cmask.end(), false);
    std::fill(cmask.begin(), cmask.begin() + k, true);
    do {
      std::vector<std::size_t> ci;
      for (std::size_t j = 0; j < a.cols(); ++j)
        if (cmask[j]) ci.push_back(j);
      g = gcd(g, determinant(a.submatrix(ri, ci)));
    } while (std::prev_permutation(cmask.begin(), cmask.end()));
  } while (std::prev_permutation(rmask.begin(), rmask.end()));
  return g;
}

/// Full SNF contract: U A V = D, unimodularity, non-negative divisibility
/// chain with trailing zeros, minor-gcd characterization.
inline bool snf_contract_holds(const IntMatrix& a) {
  SmithForm f = smith_normal_form(a);
  if (!(f.u * a * f.v == f.d)) return false;
  Int du = determinant(f.u), dv = determinant(f.v);
  if (du != 1 && du != -1) return false;
  if (dv != 1 && dv != -1) return false;
  auto diag = f.diagonal();
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (diag[i] < 0) return false;
    if (i + 1 < diag.size()) {
      if (diag[i] == 0 && diag[i + 1] != 0) return false;
      if (diag[i] != 0 && diag[i + 1] % diag[i] != 0) return false;
    }
  }
  for (std::size_t i = 0; i < f.d.rows(); ++i)
    for (std::size_t j = 0; j < f.d.cols(); ++j)
      if (i != j && f.d(i, j) != 0) return false;
  Int prod = 1;
  for (std::size_t k = 1; k <= f.rank; ++k) {
    prod *= diag[k - 1];
    if (minor_gcd(a, k) != prod) return false;
  }
  if (f.rank < std::min(a.rows(), a.cols()))
    if (minor_gcd(a, f.rank + 1) != 0) return false;
  return true;
}

/// Random unimodular matrix built from elementary operations.
inline IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n,
                                   std::size_t ops = 12) {
  IntMatrix u = IntMatrix::identity(n);
  if (n < 2) return u;
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<long long> coef(-3, 3);
  for (std::size_t k = 0; k < ops; ++k) {
    std::size_t i = idx(rng), j = idx(rng);
    if (i == j) continue;
    Int c(coef(rng));
    for (std::size_t t = 0; t < n; ++t) u(i, t) += c * u(j, t);
  }
  return u;
}

} // namespace fkt::test
