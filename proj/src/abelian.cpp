#include "fkt/abelian.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fkt {

namespace {

Int ceil_div(const Int& a, const Int& b) {
  // b > 0
  Int q = a / b;
  if (a % b != 0 && a > 0) ++q;
  return q;
}

} // namespace

FgAbGroup::FgAbGroup(IntMatrix presentation) : presentation_(std::move(presentation)) {
  SmithForm f = smith_normal_form(presentation_);
  const std::size_t r = presentation_.rows();
  const std::size_t k = std::min(r, presentation_.cols());
  moduli_.resize(r);
  for (std::size_t i = 0; i < r; ++i) {
    moduli_[i] = i < k ? f.d(i, i) : Int(0);
    if (moduli_[i] == 0) ++free_rank_;
    else if (moduli_[i] > 1) factors_.push_back(moduli_[i]);
  }
  to_canonical_ = std::move(f.u);
  auto inv = solve_matrix(to_canonical_, IntMatrix::identity(r));
  from_canonical_ = std::move(*inv); // unimodular, always solvable
}

Int FgAbGroup::order() const {
  if (!is_finite()) return 0;
  Int o = 1;
  for (const Int& d : factors_) o *= d;
  return o;
}

Int FgAbGroup::torsion_exponent() const {
  Int e = 1;
  for (const Int& d : factors_) e = lcm(e, d);
  return e;
}

std::vector<Int> FgAbGroup::reduce(const std::vector<Int>& x) const {
  std::vector<Int> y = to_canonical_.mul(x);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (moduli_[i] == 1) y[i] = 0;
    else if (moduli_[i] > 1) y[i] = ((y[i] % moduli_[i]) + moduli_[i]) % moduli_[i];
  }
  return y;
}

bool FgAbGroup::is_zero_element(const std::vector<Int>& x) const {
  auto y = reduce(x);
  return std::all_of(y.begin(), y.end(), [](const Int& v) { return v == 0; });
}

bool FgAbGroup::elements_equal(const std::vector<Int>& x, const std::vector<Int>& y) const {
  return reduce(x) == reduce(y);
}

std::vector<std::vector<Int>> FgAbGroup::elements() const {
  if (!is_finite()) throw std::logic_error("elements() on an infinite group");
  std::vector<std::size_t> torsion_idx;
  for (std::size_t i = 0; i < moduli_.size(); ++i)
    if (moduli_[i] > 1) torsion_idx.push_back(i);
  std::vector<std::vector<Int>> out;
  std::vector<Int> digits(torsion_idx.size(), 0);
  for (;;) {
    std::vector<Int> y(moduli_.size(), 0);
    for (std::size_t i = 0; i < torsion_idx.size(); ++i) y[torsion_idx[i]] = digits[i];
    out.push_back(from_canonical_.mul(y));
    std::size_t pos = 0;
    while (pos < digits.size()) {
      digits[pos] += 1;
      if (digits[pos] < moduli_[torsion_idx[pos]]) break;
      digits[pos] = 0;
      ++pos;
    }
    if (pos == digits.size()) break;
    if (digits.empty()) break;
  }
  return out;
}

FgAbGroup cokernel(const IntMatrix& presentation) { return FgAbGroup(presentation); }

bool canonical_forms_equal(const FgAbGroup& a, const FgAbGroup& b) {
  return a.free_rank() == b.free_rank() && a.invariant_factors() == b.invariant_factors();
}

std::string group_to_string(const FgAbGroup& g) {
  std::ostringstream os;
  bool first = true;
  if (g.free_rank() == 1) {
    os << "Z";
    first = false;
  } else if (g.free_rank() > 1) {
    os << "Z^" << g.free_rank();
    first = false;
  }
  for (const Int& d : g.invariant_factors()) {
    if (!first) os << " x ";
    os << "Z/" << d;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

GroupHom identity_hom(const FgAbGroup& g) {
  return {g, g, IntMatrix::identity(g.generators())};
}

GroupHom zero_hom(const FgAbGroup& source, const FgAbGroup& target) {
  return {source, target, IntMatrix::zero(target.generators(), source.generators())};
}

bool is_well_defined(const GroupHom& f) {
  if (f.lift.rows() != f.target.generators() || f.lift.cols() != f.source.generators())
    return false;
  const IntMatrix& rel = f.source.presentation();
  IntMatrix image = f.lift * rel;
  for (std::size_t j = 0; j < image.cols(); ++j)
    if (!f.target.is_zero_element(image.column(j))) return false;
  return true;
}

std::vector<Int> apply(const GroupHom& f, const std::vector<Int>& x) {
  return f.lift.mul(x);
}

GroupHom compose(const GroupHom& g, const GroupHom& f) {
  if (!f.target.same_presentation(g.source))
    throw std::invalid_argument("compose: middle groups have different presentations");
  return {f.source, g.target, g.lift * f.lift};
}

bool homs_equal(const GroupHom& f, const GroupHom& g) {
  if (!f.source.same_presentation(g.source) || !f.target.same_presentation(g.target))
    throw std::invalid_argument("homs_equal: mismatched endpoints");
  IntMatrix diff = f.lift - g.lift;
  for (std::size_t j = 0; j < diff.cols(); ++j)
    if (!f.target.is_zero_element(diff.column(j))) return false;
  return true;
}

bool is_surjective(const GroupHom& f) {
  IntMatrix stacked = f.lift.hstack(f.target.presentation());
  return FgAbGroup(stacked).is_trivial();
}

bool is_isomorphism(const GroupHom& f) {
  return canonical_forms_equal(f.source, f.target) && is_surjective(f);
}

std::optional<GroupHom> hom_inverse(const GroupHom& f) {
  const std::size_t ns = f.source.generators();
  const std::size_t nt = f.target.generators();
  const IntMatrix& rs = f.source.presentation();
  const IntMatrix& rt = f.target.presentation();
  // Unknowns: G (ns x nt), slack A (cs x ct) for well-definedness, slack B
  // (cs x ns) for G*L == I mod rs.
  const std::size_t cs = rs.cols(), ct = rt.cols();
  const std::size_t nG = ns * nt, nA = cs * ct, nB = cs * ns;
  const std::size_t eq1 = ns * ct, eq2 = ns * ns;
  IntMatrix sys(eq1 + eq2, nG + nA + nB);
  std::vector<Int> rhs(eq1 + eq2);
  // G * rt - rs * A = 0
  for (std::size_t a = 0; a < ns; ++a)
    for (std::size_t b = 0; b < ct; ++b) {
      std::size_t row = a * ct + b;
      for (std::size_t i = 0; i < nt; ++i) sys(row, a * nt + i) = rt(i, b);
      for (std::size_t i = 0; i < cs; ++i) sys(row, nG + i * ct + b) -= rs(a, i);
    }
  // G * L - rs * B = I
  for (std::size_t a = 0; a < ns; ++a)
    for (std::size_t b = 0; b < ns; ++b) {
      std::size_t row = eq1 + a * ns + b;
      for (std::size_t i = 0; i < nt; ++i) sys(row, a * nt + i) = f.lift(i, b);
      for (std::size_t i = 0; i < cs; ++i) sys(row, nG + nA + i * ns + b) -= rs(a, i);
      rhs[row] = (a == b) ? 1 : 0;
    }
  auto sol = solve(sys, rhs);
  if (!sol) return std::nullopt;
  IntMatrix g(ns, nt);
  for (std::size_t a = 0; a < ns; ++a)
    for (std::size_t i = 0; i < nt; ++i) g(a, i) = (*sol)[a * nt + i];
  return GroupHom{f.target, f.source, std::move(g)};
}

// ---------------------------------------------------------------------------
// Rational linear inequality feasibility (Fourier-Motzkin), used for the
// exact cone certificates.

namespace {

using Rat = boost::multiprecision::cpp_rational;

struct FmResult {
  enum Kind { feasible, infeasible, overflow } kind;
  std::vector<Rat> point;
};

// Rows encode lhs . x >= rhs.
FmResult fm_solve(std::size_t nvars, std::vector<std::vector<Rat>> lhs,
                  std::vector<Rat> rhs, std::size_t row_cap = 4000) {
  if (nvars == 0) {
    for (const Rat& b : rhs)
      if (b > 0) return {FmResult::infeasible, {}};
    return {FmResult::feasible, {}};
  }
  const std::size_t v = nvars - 1;
  std::vector<std::vector<Rat>> lo, hi, rest;
  std::vector<Rat> lo_rhs, hi_rhs, rest_rhs;
  for (std::size_t r = 0; r < lhs.size(); ++r) {
    Rat c = lhs[r][v];
    lhs[r].pop_back();
    if (c > 0) {
      // x_v >= (rhs - rest)/c : normalize to coefficient 1
      for (auto& e : lhs[r]) e /= c;
      lo.push_back(std::move(lhs[r]));
      lo_rhs.push_back(rhs[r] / c);
    } else if (c < 0) {
      for (auto& e : lhs[r]) e /= -c;
      hi.push_back(std::move(lhs[r]));
      hi_rhs.push_back(rhs[r] / -c);
    } else {
      rest.push_back(std::move(lhs[r]));
      rest_rhs.push_back(rhs[r]);
    }
  }
  std::vector<std::vector<Rat>> next = rest;
  std::vector<Rat> next_rhs = rest_rhs;
  std::set<std::string> seen;
  auto key = [](const std::vector<Rat>& row, const Rat& b) {
    std::ostringstream os;
    for (const auto& e : row) os << e << "|";
    os << "#" << b;
    return os.str();
  };
  for (const auto& row : next) (void)row;
  for (std::size_t i = 0; i < next.size(); ++i) seen.insert(key(next[i], next_rhs[i]));
  for (std::size_t a = 0; a < lo.size(); ++a)
    for (std::size_t b = 0; b < hi.size(); ++b) {
      // lower <= upper:  (lo_rhs - lo.x) <= -(hi_rhs - hi.x) ... after
      // normalization: x >= lo_rhs - lo.x and -x >= hi_rhs - hi.x, so
      // combine to (lo + hi).x >= lo_rhs + hi_rhs with x_v eliminated.
      std::vector<Rat> row(v);
      for (std::size_t j = 0; j < v; ++j) row[j] = lo[a][j] + hi[b][j];
      Rat r = lo_rhs[a] + hi_rhs[b];
      auto k = key(row, r);
      if (seen.insert(k).second) {
        next.push_back(std::move(row));
        next_rhs.push_back(r);
        if (next.size() > row_cap) return {FmResult::overflow, {}};
      }
    }
  FmResult inner = fm_solve(v, std::move(next), std::move(next_rhs), row_cap);
  if (inner.kind != FmResult::feasible) return inner;
  // Back-substitute a value for x_v.
  std::optional<Rat> lower, upper;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    Rat bound = lo_rhs[a];
    for (std::size_t j = 0; j < v; ++j) bound -= lo[a][j] * inner.point[j];
    if (!lower || bound > *lower) lower = bound;
  }
  for (std::size_t b = 0; b < hi.size(); ++b) {
    Rat bound = -hi_rhs[b];
    for (std::size_t j = 0; j < v; ++j) bound += hi[b][j] * inner.point[j];
    if (!upper || bound < *upper) upper = bound;
  }
  Rat x;
  if (lower && upper) x = (*lower + *upper) / 2;
  else if (lower) x = *lower;
  else if (upper) x = *upper;
  inner.point.push_back(x);
  return {FmResult::feasible, std::move(inner.point)};
}

std::vector<Int> rational_point_to_integer(const std::vector<Rat>& p) {
  Int scale = 1;
  for (const Rat& r : p) scale = lcm(scale, denominator(r));
  std::vector<Int> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    out[i] = numerator(p[i]) * (scale / denominator(p[i]));
  return out;
}

// Canonical split of the cone data.
struct ConeSplit {
  std::vector<std::size_t> free_rows, torsion_rows;
  std::vector<Int> torsion_mods;
  IntMatrix free_parts;    // |free_rows| x m
  IntMatrix torsion_parts; // |torsion_rows| x m
  std::vector<Int> g_free, g_torsion;
};

ConeSplit split_cone(const Cone& cone, const std::vector<Int>& elem) {
  ConeSplit s;
  const FgAbGroup& g = cone.group;
  const auto& mods = g.canonical_moduli();
  for (std::size_t i = 0; i < mods.size(); ++i) {
    if (mods[i] == 0) s.free_rows.push_back(i);
    else if (mods[i] > 1) {
      s.torsion_rows.push_back(i);
      s.torsion_mods.push_back(mods[i]);
    }
  }
  const std::size_t m = cone.generators.size();
  s.free_parts = IntMatrix(s.free_rows.size(), m);
  s.torsion_parts = IntMatrix(s.torsion_rows.size(), m);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<Int> y = g.to_canonical().mul(cone.generators[j]);
    for (std::size_t i = 0; i < s.free_rows.size(); ++i)
      s.free_parts(i, j) = y[s.free_rows[i]];
    for (std::size_t i = 0; i < s.torsion_rows.size(); ++i) {
      const Int& mod = s.torsion_mods[i];
      s.torsion_parts(i, j) = ((y[s.torsion_rows[i]] % mod) + mod) % mod;
    }
  }
  std::vector<Int> ye = g.to_canonical().mul(elem);
  for (std::size_t i : s.free_rows) s.g_free.push_back(ye[i]);
  for (std::size_t i = 0; i < s.torsion_rows.size(); ++i) {
    const Int& mod = s.torsion_mods[i];
    s.g_torsion.push_back(((ye[s.torsion_rows[i]] % mod) + mod) % mod);
  }
  return s;
}

// Order of a torsion vector in the product of Z/mod groups.
Int torsion_order(const std::vector<Int>& v, const std::vector<Int>& mods) {
  Int o = 1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Int g = gcd(v[i], mods[i]);
    o = lcm(o, mods[i] / g);
  }
  return o;
}

} // namespace

MembershipResult cone_member(const Cone& cone, const std::vector<Int>& elem,
                             const ConeOptions& opts) {
  const FgAbGroup& g = cone.group;
  const std::size_t m = cone.generators.size();
  if (elem.size() != g.generators())
    throw std::invalid_argument("cone_member: element length mismatch");
  for (const auto& c : cone.generators)
    if (c.size() != g.generators())
      throw std::invalid_argument("cone_member: cone generator length mismatch");

  auto verified_yes = [&](std::vector<Int> coeff) -> MembershipResult {
    std::vector<Int> total(g.generators(), 0);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < g.generators(); ++i)
        total[i] += coeff[j] * cone.generators[j][i];
    if (!g.elements_equal(total, elem))
      throw std::logic_error("cone_member: witness verification failed");
    return {TriState::yes, std::move(coeff)};
  };

  if (g.is_zero_element(elem)) return verified_yes(std::vector<Int>(m, 0));
  if (m == 0) return {TriState::no, {}};

  // 1. Subgroup check with coefficient extraction.
  IntMatrix cols = from_columns(g.generators(), cone.generators);
  IntMatrix stacked = cols.hstack(g.presentation());
  auto sub = solve(stacked, elem);
  if (!sub) return {TriState::no, {}};
  std::vector<Int> z(sub->begin(), sub->begin() + m);

  ConeSplit s = split_cone(cone, elem);
  const std::size_t k = s.free_rows.size();
  const std::size_t t = s.torsion_rows.size();

  // Generator order ignoring free parts (for non-negative lifting).
  auto gen_order = [&](std::size_t j) {
    return torsion_order(s.torsion_parts.column(j), s.torsion_mods);
  };

  // 3. Finite group: exact monoid reachability.
  if (k == 0) {
    Int order = g.order();
    if (order <= opts.finite_order_cap) {
      std::map<std::vector<Int>, std::pair<std::vector<Int>, std::size_t>> parent;
      std::vector<std::vector<Int>> frontier;
      std::vector<Int> zero(t, 0);
      parent[zero] = {zero, m};
      frontier.push_back(zero);
      std::vector<Int> goal = s.g_torsion;
      while (!frontier.empty()) {
        std::vector<std::vector<Int>> next;
        for (const auto& st : frontier)
          for (std::size_t j = 0; j < m; ++j) {
            std::vector<Int> nx(t);
            for (std::size_t i = 0; i < t; ++i)
              nx[i] = (st[i] + s.torsion_parts(i, j)) % s.torsion_mods[i];
            if (parent.emplace(nx, std::make_pair(st, j)).second) next.push_back(nx);
          }
        frontier = std::move(next);
      }
      auto it = parent.find(goal);
      if (it == parent.end()) return {TriState::no, {}};
      std::vector<Int> coeff(m, 0);
      std::vector<Int> cur = goal;
      while (cur != zero) {
        auto& pr = parent[cur];
        coeff[pr.second] += 1;
        cur = pr.first;
      }
      return verified_yes(std::move(coeff));
    }
  }

  std::vector<std::size_t> n0, s0;
  for (std::size_t j = 0; j < m; ++j) {
    bool zero_free = true;
    for (std::size_t i = 0; i < k; ++i)
      if (s.free_parts(i, j) != 0) zero_free = false;
    (zero_free ? s0 : n0).push_back(j);
  }

  // Torsion residual check modulo the subgroup generated by zero-free-part
  // generators: solve tau_S0 * c + diag(mods) * l = diff.
  IntMatrix tor_sys(t, s0.size() + t);
  for (std::size_t a = 0; a < t; ++a) {
    for (std::size_t j = 0; j < s0.size(); ++j) tor_sys(a, j) = s.torsion_parts(a, s0[j]);
    tor_sys(a, s0.size() + a) = s.torsion_mods[a];
  }
  LinearSolver tor_solver(tor_sys);
  auto torsion_match = [&](const std::vector<Int>& diff) -> std::optional<std::vector<Int>> {
    auto sol = tor_solver.solve(diff);
    if (!sol) return std::nullopt;
    std::vector<Int> c(s0.size());
    for (std::size_t j = 0; j < s0.size(); ++j) {
      c[j] = (*sol)[j];
      if (c[j] < 0) {
        Int o = gen_order(s0[j]);
        c[j] += ceil_div(-c[j], o) * o;
      }
    }
    return c;
  };

  if (n0.empty()) {
    // Pure-torsion generators: monoid equals subgroup; g_free is forced 0.
    std::vector<Int> coeff(m, 0);
    for (std::size_t j = 0; j < m; ++j) {
      coeff[j] = z[j];
      if (coeff[j] < 0) {
        Int o = gen_order(j);
        if (o == 0) o = 1;
        coeff[j] += ceil_div(-coeff[j], o) * o;
      }
    }
    return verified_yes(std::move(coeff));
  }

  // 5. Strictly positive rational kernel combination over the free parts:
  // subgroup membership then upgrades to monoid membership.
  {
    std::vector<std::vector<Rat>> lhs;
    std::vector<Rat> rhs;
    for (std::size_t a = 0; a < k; ++a) {
      std::vector<Rat> row(n0.size()), neg(n0.size());
      for (std::size_t j = 0; j < n0.size(); ++j) {
        row[j] = Rat(s.free_parts(a, n0[j]));
        neg[j] = -row[j];
      }
      lhs.push_back(row);
      rhs.push_back(0);
      lhs.push_back(neg);
      rhs.push_back(0);
    }
    for (std::size_t j = 0; j < n0.size(); ++j) {
      std::vector<Rat> row(n0.size());
      row[j] = 1;
      lhs.push_back(row);
      rhs.push_back(1);
    }
    FmResult fm = fm_solve(n0.size(), std::move(lhs), std::move(rhs));
    if (fm.kind == FmResult::feasible) {
      std::vector<Int> w = rational_point_to_integer(fm.point);
      Int e = g.torsion_exponent();
      std::vector<Int> coeff(m, 0);
      for (std::size_t j = 0; j < m; ++j) coeff[j] = z[j];
      // h * e * w pushes all n0 coefficients non-negative without changing
      // the represented element.
      Int h = 0;
      for (std::size_t j = 0; j < n0.size(); ++j)
        if (coeff[n0[j]] < 0) h = std::max(h, ceil_div(-coeff[n0[j]], e * w[j]));
      for (std::size_t j = 0; j < n0.size(); ++j) coeff[n0[j]] += h * e * w[j];
      for (std::size_t j : s0)
        if (coeff[j] < 0) {
          Int o = gen_order(j);
          if (o == 0) o = 1;
          coeff[j] += ceil_div(-coeff[j], o) * o;
        }
      return verified_yes(std::move(coeff));
    }
  }

  // 6. Separating functional: bounded total budget makes the search exact.
  {
    std::vector<std::vector<Rat>> lhs;
    std::vector<Rat> rhs;
    for (std::size_t j = 0; j < n0.size(); ++j) {
      std::vector<Rat> row(k);
      for (std::size_t a = 0; a < k; ++a) row[a] = Rat(s.free_parts(a, n0[j]));
      lhs.push_back(row);
      rhs.push_back(1);
    }
    FmResult fm = fm_solve(k, std::move(lhs), std::move(rhs));
    if (fm.kind == FmResult::feasible) {
      Rat budget_r = 0;
      for (std::size_t a = 0; a < k; ++a) budget_r += fm.point[a] * Rat(s.g_free[a]);
      if (budget_r < 0) return {TriState::no, {}};
      Int budget = numerator(budget_r) / denominator(budget_r);
      std::size_t nodes = 0;
      std::vector<Int> c(n0.size(), 0);
      std::optional<std::vector<Int>> witness;
      // DFS over coefficients of the separated generators.
      auto rec = [&](auto&& self, std::size_t pos, Int used) -> bool {
        if (++nodes > opts.node_cap) return false;
        if (pos == n0.size()) {
          std::vector<Int> fsum(k, 0), tsum(t, 0);
          for (std::size_t j = 0; j < n0.size(); ++j) {
            for (std::size_t a = 0; a < k; ++a) fsum[a] += c[j] * s.free_parts(a, n0[j]);
            for (std::size_t a = 0; a < t; ++a) tsum[a] += c[j] * s.torsion_parts(a, n0[j]);
          }
          if (fsum != s.g_free) return false;
          std::vector<Int> diff(t);
          for (std::size_t a = 0; a < t; ++a) {
            const Int& mod = s.torsion_mods[a];
            diff[a] = ((s.g_torsion[a] - tsum[a]) % mod + mod) % mod;
          }
          auto extra = torsion_match(diff);
          if (!extra) return false;
          std::vector<Int> coeff(m, 0);
          for (std::size_t j = 0; j < n0.size(); ++j) coeff[n0[j]] = c[j];
          for (std::size_t j = 0; j < s0.size(); ++j) coeff[s0[j]] = (*extra)[j];
          witness = std::move(coeff);
          return true;
        }
        for (Int v = 0; used + v <= budget; ++v) {
          c[pos] = v;
          if (self(self, pos + 1, used + v)) return true;
        }
        c[pos] = 0;
        return false;
      };
      bool found = rec(rec, 0, 0);
      if (found) return verified_yes(std::move(*witness));
      if (nodes <= opts.node_cap) return {TriState::no, {}};
    }
  }

  // 8. Fallback: heuristic search for yes, rational infeasibility for no.
  {
    std::size_t nodes = 0;
    std::vector<Int> c(m, 0);
    std::optional<std::vector<Int>> witness;
    auto rec = [&](auto&& self, std::size_t pos) -> bool {
      if (++nodes > opts.node_cap) return false;
      if (pos == m) {
        std::vector<Int> total(g.generators(), 0);
        for (std::size_t j = 0; j < m; ++j)
          for (std::size_t i = 0; i < g.generators(); ++i)
            total[i] += c[j] * cone.generators[j][i];
        if (g.elements_equal(total, elem)) {
          witness = c;
          return true;
        }
        return false;
      }
      for (Int v = 0; v <= opts.yes_budget; ++v) {
        c[pos] = v;
        if (self(self, pos + 1)) return true;
      }
      c[pos] = 0;
      return false;
    };
    if (rec(rec, 0)) return verified_yes(std::move(*witness));
  }
  {
    // Real feasibility of {c >= 0, free_parts * c = g_free}.
    std::vector<std::vector<Rat>> lhs;
    std::vector<Rat> rhs;
    for (std::size_t a = 0; a < k; ++a) {
      std::vector<Rat> row(m), neg(m);
      for (std::size_t j = 0; j < m; ++j) {
        row[j] = Rat(s.free_parts(a, j));
        neg[j] = -row[j];
      }
      lhs.push_back(row);
      rhs.push_back(Rat(s.g_free[a]));
      lhs.push_back(neg);
      rhs.push_back(-Rat(s.g_free[a]));
    }
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<Rat> row(m);
      row[j] = 1;
      lhs.push_back(row);
      rhs.push_back(0);
    }
    FmResult fm = fm_solve(m, std::move(lhs), std::move(rhs));
    if (fm.kind == FmResult::infeasible) return {TriState::no, {}};
  }
  return {TriState::unknown, {}};
}

TriState cone_is_full(const Cone& cone, const ConeOptions& opts) {
  bool any_unknown = false;
  for (std::size_t i = 0; i < cone.group.generators(); ++i) {
    for (int sign : {1, -1}) {
      std::vector<Int> e(cone.group.generators(), 0);
      e[i] = sign;
      auto r = cone_member(cone, e, opts);
      if (r.state == TriState::no) return TriState::no;
      if (r.state == TriState::unknown) any_unknown = true;
    }
  }
  return any_unknown ? TriState::unknown : TriState::yes;
}

TriState cone_maps_into(const GroupHom& f, const Cone& src, const Cone& tgt,
                        const ConeOptions& opts) {
  bool any_unknown = false;
  for (const auto& gen : src.generators) {
    auto r = cone_member(tgt, apply(f, gen), opts);
    if (r.state == TriState::no) return TriState::no;
    if (r.state == TriState::unknown) any_unknown = true;
  }
  return any_unknown ? TriState::unknown : TriState::yes;
}

// ---------------------------------------------------------------------------
// Constrained hom enumeration.

namespace {

struct AffineFamily {
  bool feasible = false;
  IntMatrix l0;
  struct Direction {
    IntMatrix delta;
    Int modulus; // 0 free, > 1 torsion
  };
  std::vector<Direction> dirs;
};

IntMatrix unvec(const std::vector<Int>& v, std::size_t rows, std::size_t cols) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = v[i * cols + j];
  return m;
}

AffineFamily analyze_homs(const FgAbGroup& source, const FgAbGroup& target,
                          const std::vector<SquareConstraint>& constraints) {
  const std::size_t ns = source.generators(), nt = target.generators();
  const IntMatrix& rs = source.presentation();
  const IntMatrix& rt = target.presentation();
  const std::size_t cs = rs.cols(), ct = rt.cols();
  const std::size_t nL = nt * ns;

  // Every condition is expressed in the canonical coordinates of the group it
  // lands in: killed coordinates impose nothing, free coordinates give exact
  // equations, torsion coordinates need one slack variable per entry.
  struct Row {
    std::vector<std::pair<std::size_t, Int>> lift_coeffs; // (vec(L) index, coeff)
    Int modulus; // 0 exact, d > 1 congruence mod d
    Int rhs;
  };
  std::vector<Row> rows;

  // Well-definedness: (U_T L rs)(i, c) = 0 mod m_i.
  const IntMatrix& ut = target.to_canonical();
  const auto& mt = target.canonical_moduli();
  for (std::size_t c = 0; c < cs; ++c)
    for (std::size_t i = 0; i < nt; ++i) {
      if (mt[i] == 1) continue;
      Row r;
      r.modulus = mt[i];
      r.rhs = 0;
      for (std::size_t k = 0; k < nt; ++k) {
        if (ut(i, k) == 0) continue;
        for (std::size_t j = 0; j < ns; ++j)
          if (rs(j, c) != 0) r.lift_coeffs.emplace_back(k * ns + j, ut(i, k) * rs(j, c));
      }
      rows.push_back(std::move(r));
    }
  // Constraints: (U_B post L pre)(i, b) = (U_B fixed)(i, b) mod m^B_i.
  for (const auto& c : constraints) {
    const IntMatrix pb = c.post.target.to_canonical() * c.post.lift; // rows: canon coords
    const IntMatrix rb = c.post.target.to_canonical() * c.fixed.lift;
    const auto& mb = c.post.target.canonical_moduli();
    const IntMatrix& q = c.pre.lift;
    const std::size_t na = c.pre.source.generators();
    for (std::size_t i = 0; i < pb.rows(); ++i) {
      if (mb[i] == 1) continue;
      for (std::size_t b = 0; b < na; ++b) {
        Row r;
        r.modulus = mb[i];
        r.rhs = rb(i, b);
        for (std::size_t k = 0; k < nt; ++k) {
          if (pb(i, k) == 0) continue;
          for (std::size_t j = 0; j < ns; ++j)
            if (q(j, b) != 0) r.lift_coeffs.emplace_back(k * ns + j, pb(i, k) * q(j, b));
        }
        rows.push_back(std::move(r));
      }
    }
  }

  std::size_t slack = 0;
  for (const auto& r : rows)
    if (r.modulus > 1) ++slack;
  IntMatrix sys(rows.size(), nL + slack);
  std::vector<Int> rhs(rows.size());
  std::size_t next_slack = nL;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& [idx, coeff] : rows[r].lift_coeffs) sys(r, idx) += coeff;
    if (rows[r].modulus > 1) sys(r, next_slack++) = rows[r].modulus;
    rhs[r] = rows[r].rhs;
  }

  AffineFamily out;
  LinearSolver solver(sys);
  auto part = solver.solve(rhs);
  if (!part) return out;
  out.feasible = true;
  out.l0 = unvec(std::vector<Int>(part->begin(), part->begin() + nL), nt, ns);

  IntMatrix kern = kernel_basis(sys);
  const std::size_t q = kern.cols();
  IntMatrix kl(nL, q);
  for (std::size_t i = 0; i < nL; ++i)
    for (std::size_t j = 0; j < q; ++j) kl(i, j) = kern(i, j);

  // Lift-trivial directions: columns of rt times an elementary matrix.
  IntMatrix triv(nL, ct * ns);
  for (std::size_t l = 0; l < ct; ++l)
    for (std::size_t j = 0; j < ns; ++j)
      for (std::size_t i = 0; i < nt; ++i) triv(i * ns + j, l * ns + j) = rt(i, l);

  if (q == 0) return out;
  IntMatrix combined = kl.hstack(triv);
  IntMatrix comb_kernel = kernel_basis(combined);
  IntMatrix sa(q, comb_kernel.cols());
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < comb_kernel.cols(); ++j) sa(i, j) = comb_kernel(i, j);

  SmithForm fa = smith_normal_form(sa);
  auto ua_inv = solve_matrix(fa.u, IntMatrix::identity(q));
  for (std::size_t i = 0; i < q; ++i) {
    Int mod = (i < std::min(sa.rows(), sa.cols())) ? fa.d(i, i) : Int(0);
    if (mod == 1) continue;
    std::vector<Int> a = ua_inv->column(i);
    std::vector<Int> delta_vec = kl.mul(a);
    out.dirs.push_back({unvec(delta_vec, nt, ns), mod});
  }
  return out;
}

// Enumerate the affine family; calls visit(lift) for each candidate.
template <typename Visit>
bool enumerate_family(const AffineFamily& fam, const Int& bound, std::size_t cap,
                      Visit&& visit) {
  std::vector<Int> y(fam.dirs.size(), 0);
  for (std::size_t i = 0; i < fam.dirs.size(); ++i)
    if (fam.dirs[i].modulus == 0) y[i] = -bound;
  std::size_t emitted = 0;
  for (;;) {
    IntMatrix l = fam.l0;
    for (std::size_t i = 0; i < fam.dirs.size(); ++i)
      if (y[i] != 0) {
        for (std::size_t r = 0; r < l.rows(); ++r)
          for (std::size_t c = 0; c < l.cols(); ++c)
            l(r, c) += y[i] * fam.dirs[i].delta(r, c);
      }
    visit(std::move(l));
    if (++emitted >= cap) return false;
    std::size_t pos = 0;
    for (; pos < y.size(); ++pos) {
      y[pos] += 1;
      Int limit = fam.dirs[pos].modulus == 0 ? bound : fam.dirs[pos].modulus - 1;
      if (y[pos] <= limit) break;
      y[pos] = fam.dirs[pos].modulus == 0 ? -bound : Int(0);
    }
    if (pos == y.size()) return true;
  }
}

} // namespace

HomEnumeration hom_candidates(const FgAbGroup& source, const FgAbGroup& target,
                              const std::vector<SquareConstraint>& constraints,
                              const Int& bound, const EnumOptions& opts) {
  AffineFamily fam = analyze_homs(source, target, constraints);
  HomEnumeration out;
  if (!fam.feasible) return out;
  bool has_free = std::any_of(fam.dirs.begin(), fam.dirs.end(),
                              [](const auto& d) { return d.modulus == 0; });
  bool finished = enumerate_family(fam, bound, opts.max_candidates, [&](IntMatrix l) {
    out.homs.push_back(GroupHom{source, target, std::move(l)});
  });
  out.complete = finished && !has_free;
  return out;
}

HomEnumeration iso_candidates(const FgAbGroup& source, const FgAbGroup& target,
                              const std::vector<SquareConstraint>& constraints,
                              const Int& bound, const EnumOptions& opts) {
  HomEnumeration out;
  if (!canonical_forms_equal(source, target)) return out;
  AffineFamily fam = analyze_homs(source, target, constraints);
  if (!fam.feasible) return out;
  std::vector<std::size_t> free_dirs;
  for (std::size_t i = 0; i < fam.dirs.size(); ++i)
    if (fam.dirs[i].modulus == 0) free_dirs.push_back(i);
  if (free_dirs.empty()) {
    bool finished = enumerate_family(fam, bound, opts.max_candidates, [&](IntMatrix l) {
      GroupHom h{source, target, std::move(l)};
      if (is_isomorphism(h)) out.homs.push_back(std::move(h));
    });
    out.complete = finished;
    return out;
  }
  if (source.free_rank() == 1 && free_dirs.size() == 1) {
    // An isomorphism must induce +1 or -1 on the rank-1 free quotient, and
    // only the free direction moves that block (torsion directions carry
    // finite-order homs, whose free block vanishes).  Pinning it leaves a
    // finite torsion sweep.
    std::size_t fs = 0, ft = 0;
    for (std::size_t i = 0; i < source.canonical_moduli().size(); ++i)
      if (source.canonical_moduli()[i] == 0) fs = i;
    for (std::size_t i = 0; i < target.canonical_moduli().size(); ++i)
      if (target.canonical_moduli()[i] == 0) ft = i;
    auto free_block = [&](const IntMatrix& l) {
      Int v = 0;
      for (std::size_t k = 0; k < l.rows(); ++k) {
        if (target.to_canonical()(ft, k) == 0) continue;
        for (std::size_t j = 0; j < l.cols(); ++j)
          if (l(k, j) != 0)
            v += target.to_canonical()(ft, k) * l(k, j) * source.from_canonical()(j, fs);
      }
      return v;
    };
    const std::size_t fd = free_dirs[0];
    Int a0 = free_block(fam.l0);
    Int ad = free_block(fam.dirs[fd].delta);
    if (ad == 0) throw std::logic_error("free direction with vanishing free block");
    AffineFamily torsion_only;
    torsion_only.feasible = true;
    for (std::size_t i = 0; i < fam.dirs.size(); ++i)
      if (i != fd) torsion_only.dirs.push_back(fam.dirs[i]);
    bool finished = true;
    for (Int t : {Int(1), Int(-1)}) {
      if ((t - a0) % ad != 0) continue;
      Int y0 = (t - a0) / ad;
      torsion_only.l0 = fam.l0;
      for (std::size_t r = 0; r < torsion_only.l0.rows(); ++r)
        for (std::size_t c = 0; c < torsion_only.l0.cols(); ++c)
          torsion_only.l0(r, c) += y0 * fam.dirs[fd].delta(r, c);
      finished = enumerate_family(torsion_only, bound, opts.max_candidates,
                                  [&](IntMatrix l) {
                                    GroupHom h{source, target, std::move(l)};
                                    if (is_isomorphism(h))
                                      out.homs.push_back(std::move(h));
                                  }) &&
                 finished;
    }
    out.complete = finished;
    return out;
  }
  bool finished = enumerate_family(fam, bound, opts.max_candidates, [&](IntMatrix l) {
    GroupHom h{source, target, std::move(l)};
    if (is_isomorphism(h)) out.homs.push_back(std::move(h));
  });
  (void)finished;
  out.complete = false;
  return out;
}

} // namespace fkt
