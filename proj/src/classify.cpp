#include "fkt/classify.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace fkt {

namespace {

bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void check_case_params(long long p, const std::array<long long, 3>& a,
                       const std::array<long long, 3>& b) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  for (long long v : a)
    if (v <= 0) throw std::invalid_argument("parameters must be positive");
  for (long long v : b)
    if (v <= 0) throw std::invalid_argument("parameters must be positive");
}

} // namespace

bool criterion_case1(long long p, std::array<long long, 3> t1,
                     std::array<long long, 3> t2) {
  check_case_params(p, t1, t2);
  auto [x1, y1, z1] = t1;
  auto [x2, y2, z2] = t2;
  bool dx1 = x1 % p == 0, dx2 = x2 % p == 0;
  bool dz1 = z1 % p == 0, dz2 = z2 % p == 0;
  if (dx1 != dx2 || dz1 != dz2) return false;
  if (!dz1) return true;
  if (dx1) return (y1 % p == 0) == (y2 % p == 0);
  return ((y1 - x1 * (z1 / p)) % p == 0) == ((y2 - x2 * (z2 / p)) % p == 0);
}

bool criterion_case2(long long p, std::array<long long, 3> t1,
                     std::array<long long, 3> t2) {
  check_case_params(p, t1, t2);
  auto count = [p](const std::array<long long, 3>& t) {
    int c = 0;
    for (long long v : t)
      if (v % p == 0) ++c;
    return c;
  };
  return count(t1) == count(t2);
}

Graph case1_graph(long long p, long long x, long long y, long long z) {
  return Graph(IntMatrix{{0, 0, 0}, {z, p + 1, 0}, {y, x, p + 1}});
}

Graph case2_graph(long long p, long long x, long long y, long long z) {
  return Graph(IntMatrix{
      {0, 0, 0, 0}, {x, p + 1, 0, 0}, {y, 0, p + 1, 0}, {z, 0, 0, p + 1}});
}

Graph intro_graph(long long n) { return case1_graph(2, 1, 1, n); }

namespace {

std::optional<long long> small_value(const Int& v) {
  if (v > std::numeric_limits<long long>::max() || v < 0) return std::nullopt;
  return static_cast<long long>(v);
}

} // namespace

std::optional<std::array<long long, 4>> case1_template_params(const Graph& g) {
  if (g.vertices() != 3) return std::nullopt;
  const IntMatrix& a = g.adjacency();
  if (a(0, 0) != 0 || a(0, 1) != 0 || a(0, 2) != 0) return std::nullopt;
  if (a(1, 2) != 0 || a(2, 2) != a(1, 1)) return std::nullopt;
  auto loops = small_value(a(1, 1));
  auto x = small_value(a(2, 1));
  auto y = small_value(a(2, 0));
  auto z = small_value(a(1, 0));
  if (!loops || !x || !y || !z) return std::nullopt;
  long long p = *loops - 1;
  if (!is_prime(p) || *x <= 0 || *y <= 0 || *z <= 0) return std::nullopt;
  return std::array<long long, 4>{p, *x, *y, *z};
}

std::optional<std::array<long long, 4>> case2_template_params(const Graph& g) {
  if (g.vertices() != 4) return std::nullopt;
  const IntMatrix& a = g.adjacency();
  for (std::size_t j = 0; j < 4; ++j)
    if (a(0, j) != 0) return std::nullopt;
  for (std::size_t i = 1; i < 4; ++i)
    for (std::size_t j = 1; j < 4; ++j)
      if (i != j && a(i, j) != 0) return std::nullopt;
  if (a(1, 1) != a(2, 2) || a(2, 2) != a(3, 3)) return std::nullopt;
  auto loops = small_value(a(1, 1));
  auto x = small_value(a(1, 0));
  auto y = small_value(a(2, 0));
  auto z = small_value(a(3, 0));
  if (!loops || !x || !y || !z) return std::nullopt;
  long long p = *loops - 1;
  if (!is_prime(p) || *x <= 0 || *y <= 0 || *z <= 0) return std::nullopt;
  return std::array<long long, 4>{p, *x, *y, *z};
}

// ---------------------------------------------------------------------------
// Diagram isomorphism search

namespace {

Int default_bound(const KDiagram& d1, const KDiagram& d2) {
  Int b = 4;
  for (const auto& u : d1.units)
    for (const Int& f : u.group.invariant_factors()) b = std::max(b, f);
  for (const auto& u : d2.units)
    for (const Int& f : u.group.invariant_factors()) b = std::max(b, f);
  return b;
}

struct SearchState {
  const KDiagram& d1;
  const KDiagram& d2;
  std::vector<std::size_t> pair2; // d1 unit index -> d2 unit index
  SearchOptions opts;
  std::vector<std::optional<GroupHom>> assigned;
  std::vector<std::optional<TriState>> full1, full2; // cone fullness memo
  bool incomplete = false;
  std::size_t nodes = 0;

  TriState fullness(std::vector<std::optional<TriState>>& memo, const KDiagram& d,
                    std::size_t unit) {
    if (!memo[unit]) {
      const auto& cone = d.units[unit].cone;
      memo[unit] = cone ? cone_is_full(*cone, opts.cone) : TriState::yes;
    }
    return *memo[unit];
  }

  bool dfs(std::size_t depth) {
    if (depth == d1.order.size()) return true;
    const std::size_t u = d1.order[depth];
    const std::size_t u2 = pair2[u];

    std::vector<SquareConstraint> constraints;
    for (const auto& a1 : d1.arrows) {
      if (a1.src != u && a1.dst != u) continue;
      if (a1.src == u && a1.dst == u)
        throw std::logic_error("self-arrows are not supported by the search");
      // locate the matching arrow in d2 by label
      const DiagramArrow* a2 = nullptr;
      for (const auto& cand : d2.arrows)
        if (cand.label == a1.label) {
          a2 = &cand;
          break;
        }
      if (a1.src == u) {
        const std::size_t v = a1.dst;
        if (!assigned[v]) continue;
        // alpha_v o a1 = a2 o h
        GroupHom post{d2.units[u2].group, d2.units[a2->dst].group, a2->lift};
        GroupHom a1h{d1.units[u].group, d1.units[v].group, a1.lift};
        constraints.push_back(
            {identity_hom(d1.units[u].group), post, compose(*assigned[v], a1h)});
      } else {
        const std::size_t v = a1.src;
        if (!assigned[v]) continue;
        // h o a1 = a2 o alpha_v
        GroupHom pre{d1.units[v].group, d1.units[u].group, a1.lift};
        GroupHom a2h{d2.units[pair2[v]].group, d2.units[u2].group, a2->lift};
        constraints.push_back({pre, identity_hom(d2.units[u2].group),
                               compose(a2h, *assigned[v])});
      }
    }

    auto cands = iso_candidates(d1.units[u].group, d2.units[u2].group, constraints,
                                opts.bound, {.max_candidates = opts.enum_cap});
    if (!cands.complete) incomplete = true;

    const bool has_cone = d1.units[u].cone.has_value();
    const bool skip_cone =
        !has_cone || (fullness(full1, d1, u) == TriState::yes &&
                      fullness(full2, d2, u2) == TriState::yes);
    for (auto& h : cands.homs) {
      if (++nodes > opts.node_cap) {
        incomplete = true;
        return false;
      }
      if (!skip_cone) {
        TriState fwd = cone_maps_into(h, *d1.units[u].cone, *d2.units[u2].cone,
                                      opts.cone);
        if (fwd == TriState::no) continue;
        auto inv = hom_inverse(h);
        if (!inv) throw std::logic_error("isomorphism without integral inverse");
        TriState bwd = cone_maps_into(*inv, *d2.units[u2].cone, *d1.units[u].cone,
                                      opts.cone);
        if (fwd == TriState::unknown || bwd == TriState::unknown) {
          incomplete = true;
          continue;
        }
        if (bwd == TriState::no) continue;
      }
      assigned[u] = std::move(h);
      if (dfs(depth + 1)) return true;
      assigned[u].reset();
    }
    return false;
  }
};

} // namespace

bool verify_witness(const KDiagram& d1, const KDiagram& d2,
                    const std::map<std::string, GroupHom>& witness,
                    const ConeOptions& cone) {
  for (const auto& u : d1.units) {
    auto it = witness.find(u.label);
    if (it == witness.end()) return false;
    if (!is_well_defined(it->second) || !is_isomorphism(it->second)) return false;
  }
  for (const auto& a1 : d1.arrows) {
    const DiagramArrow* a2 = nullptr;
    for (const auto& cand : d2.arrows)
      if (cand.label == a1.label) a2 = &cand;
    if (!a2) return false;
    const GroupHom& as = witness.at(d1.units[a1.src].label);
    const GroupHom& ad = witness.at(d1.units[a1.dst].label);
    GroupHom a1h{d1.units[a1.src].group, d1.units[a1.dst].group, a1.lift};
    GroupHom a2h{as.target, ad.target, a2->lift};
    if (!homs_equal(compose(ad, a1h), compose(a2h, as))) return false;
  }
  for (std::size_t i = 0; i < d1.units.size(); ++i) {
    if (!d1.units[i].cone) continue;
    const GroupHom& h = witness.at(d1.units[i].label);
    const Cone& c1 = *d1.units[i].cone;
    const Cone& c2 = *d2.units[d2.unit_index(d1.units[i].label)].cone;
    if (cone_maps_into(h, c1, c2, cone) != TriState::yes) return false;
    auto inv = hom_inverse(h);
    if (!inv) return false;
    if (cone_maps_into(*inv, c2, c1, cone) != TriState::yes) return false;
  }
  return true;
}

Verdict fk_isomorphic(const KDiagram& d1, const KDiagram& d2,
                      const SearchOptions& opts0) {
  if (d1.units.size() != d2.units.size())
    throw std::invalid_argument("diagram unit counts differ");
  std::vector<std::size_t> pair2(d1.units.size());
  for (std::size_t i = 0; i < d1.units.size(); ++i)
    pair2[i] = d2.unit_index(d1.units[i].label);
  // arrow correspondence sanity
  for (const auto& a1 : d1.arrows) {
    bool found = false;
    for (const auto& a2 : d2.arrows)
      if (a2.label == a1.label) {
        if (a2.src != pair2[a1.src] || a2.dst != pair2[a1.dst])
          throw std::invalid_argument("diagram arrow endpoints differ");
        found = true;
      }
    if (!found) throw std::invalid_argument("diagram arrow sets differ");
  }

  Verdict v;
  for (std::size_t i = 0; i < d1.units.size(); ++i)
    if (!canonical_forms_equal(d1.units[i].group, d2.units[pair2[i]].group)) {
      v.status = Verdict::Status::not_isomorphic;
      v.search_complete = true;
      v.obstruction = "canonical forms differ at " + d1.units[i].label + ": " +
                      group_to_string(d1.units[i].group) + " vs " +
                      group_to_string(d2.units[pair2[i]].group);
      return v;
    }

  SearchOptions opts = opts0;
  if (opts.bound == 0) opts.bound = default_bound(d1, d2);

  KDiagram d1_ordered;
  const KDiagram* d1p = &d1;
  if (d1.order.size() != d1.units.size()) {
    d1_ordered = d1;
    d1_ordered.order.resize(d1.units.size());
    std::iota(d1_ordered.order.begin(), d1_ordered.order.end(), 0);
    d1p = &d1_ordered;
  }

  SearchState st{*d1p, d2, std::move(pair2), opts, {}, {}, {}, false, 0};
  st.assigned.resize(d1.units.size());
  st.full1.resize(d1.units.size());
  st.full2.resize(d2.units.size());

  if (st.dfs(0)) {
    v.status = Verdict::Status::isomorphic;
    v.search_complete = !st.incomplete;
    for (std::size_t i = 0; i < d1.units.size(); ++i)
      v.witness.emplace(d1.units[i].label, *st.assigned[i]);
    if (!verify_witness(d1, d2, v.witness, opts.cone))
      throw std::logic_error("witness failed independent verification");
    return v;
  }
  if (!st.incomplete) {
    v.status = Verdict::Status::not_isomorphic;
    v.search_complete = true;
    v.obstruction =
        "exhaustive search over complete candidate sets found no isomorphism";
    return v;
  }
  v.status = Verdict::Status::unknown;
  v.search_complete = false;
  return v;
}

Verdict fk_isomorphic(const FkDiagram& d1, const FkDiagram& d2,
                      const SearchOptions& opts) {
  if (d1.n() != d2.n())
    throw std::invalid_argument("fk_isomorphic: lattice lengths differ");
  return fk_isomorphic(to_kdiagram(d1), to_kdiagram(d2), opts);
}

Verdict case2_isomorphic(const Case2Diagram& d1, const Case2Diagram& d2,
                         const SearchOptions& opts) {
  KDiagram base = to_kdiagram(d1, {1, 2, 3});
  std::array<std::size_t, 3> perm = {1, 2, 3};
  bool all_complete = true;
  do {
    Verdict v = fk_isomorphic(base, to_kdiagram(d2, perm), opts);
    if (v.status == Verdict::Status::isomorphic) return v;
    if (!v.search_complete) all_complete = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  Verdict v;
  if (all_complete) {
    v.status = Verdict::Status::not_isomorphic;
    v.search_complete = true;
    v.obstruction = "no diagram isomorphism under any of the 6 relabelings";
  } else {
    v.status = Verdict::Status::unknown;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Pair classification

namespace {

bool graphs_isomorphic(const Graph& a, const Graph& b) {
  if (a.vertices() != b.vertices()) return false;
  if (a.adjacency() == b.adjacency()) return true;
  const std::size_t n = a.vertices();
  if (n > 8) return false;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j)
        if (a.edges(i, j) != b.edges(perm[i], perm[j])) ok = false;
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

int exit_code_for(const Verdict& v, bool applicable) {
  switch (v.status) {
    case Verdict::Status::isomorphic: return applicable ? 0 : 3;
    case Verdict::Status::not_isomorphic: return 1; // sound without the theorem
    case Verdict::Status::unknown: return applicable ? 2 : 3;
  }
  return 3;
}

} // namespace

ClassifyReport classify_pair(const Graph& e1, const Graph& e2,
                             const SearchOptions& opts) {
  ClassifyReport r;
  if (graphs_isomorphic(e1, e2)) {
    r.verdict.status = Verdict::Status::isomorphic;
    r.verdict.search_complete = true;
    r.applicable = true;
    r.path = "graph isomorphism";
    r.notes = "the graphs are isomorphic, so the algebras agree";
    r.exit_code = 0;
    return r;
  }
  const bool k1 = condition_K(e1), k2 = condition_K(e2);
  if (!k1 || !k2) {
    r.path = "not applicable";
    r.notes = std::string("Condition (K) fails for ") +
              (!k1 && !k2 ? "both graphs" : (!k1 ? "the first graph" : "the second graph"));
    r.exit_code = 3;
    return r;
  }
  IdealLattice l1 = hereditary_saturated_subsets(e1);
  IdealLattice l2 = hereditary_saturated_subsets(e2);
  if (!lattices_isomorphic(l1, l2)) {
    r.verdict.status = Verdict::Status::not_isomorphic;
    r.verdict.search_complete = true;
    r.verdict.obstruction = "ideal lattices are not order-isomorphic";
    r.path = "pre-invariant (ideal lattice)";
    r.exit_code = 1;
    return r;
  }

  if (l1.is_linear) {
    CnMembership m1 = class_Cn_membership(e1);
    CnMembership m2 = class_Cn_membership(e2);
    r.applicable = m1.member && m2.member;
    if (!r.applicable)
      r.notes = "class membership fails: " + (m1.member ? m2.reason : m1.reason);
    FkDiagram d1 = filtered_k_theory(e1);
    FkDiagram d2 = filtered_k_theory(e2);
    r.verdict = fk_isomorphic(d1, d2, opts);
    r.path = "filtered ordered K-theory search";
    auto t1 = case1_template_params(e1);
    auto t2 = case1_template_params(e2);
    if (t1 && t2 && (*t1)[0] == (*t2)[0] && r.verdict.status != Verdict::Status::unknown) {
      bool cf = criterion_case1((*t1)[0], {(*t1)[1], (*t1)[2], (*t1)[3]},
                                {(*t2)[1], (*t2)[2], (*t2)[3]});
      if (cf != (r.verdict.status == Verdict::Status::isomorphic))
        throw std::logic_error(
            "Case I closed-form criterion disagrees with the generic search");
      r.path = "generic search + Case I closed form (agree)";
    }
    r.exit_code = exit_code_for(r.verdict, r.applicable);
    return r;
  }

  bool case2_shape = true;
  try {
    Case2Diagram c1 = case2_diagram(e1);
    Case2Diagram c2 = case2_diagram(e2);
    CnMembership m1 = class_Cn_membership(e1);
    CnMembership m2 = class_Cn_membership(e2);
    r.applicable =
        m1.least_ideal_extension_eligible && m2.least_ideal_extension_eligible;
    if (!r.applicable)
      r.notes = "minimal-ideal extension setting does not apply";
    r.verdict = case2_isomorphic(c1, c2, opts);
    r.path = "Case II diagram search over point relabelings";
    auto t1 = case2_template_params(e1);
    auto t2 = case2_template_params(e2);
    if (t1 && t2 && (*t1)[0] == (*t2)[0] && r.verdict.status != Verdict::Status::unknown) {
      bool cf = criterion_case2((*t1)[0], {(*t1)[1], (*t1)[2], (*t1)[3]},
                                {(*t2)[1], (*t2)[2], (*t2)[3]});
      if (cf != (r.verdict.status == Verdict::Status::isomorphic))
        throw std::logic_error(
            "Case II closed-form criterion disagrees with the generic search");
      r.path = "Case II search + closed form (agree)";
    }
    r.exit_code = exit_code_for(r.verdict, r.applicable);
    return r;
  } catch (const std::invalid_argument&) {
    case2_shape = false;
  }
  (void)case2_shape;
  r.path = "unsupported lattice shape";
  r.notes = "invariants computed per ideal only; no classification route applies";
  r.exit_code = 3;
  return r;
}

// ---------------------------------------------------------------------------
// Family sweeps

SweepResult sweep(SweepTemplate templ, long long p, long long lo, long long hi,
                  bool verify, const SearchOptions& opts) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("sweep: bad parameter range");
  if (templ == SweepTemplate::intro) p = 2;
  if (!is_prime(p)) throw std::invalid_argument("sweep: p must be prime");

  SweepResult out;
  out.templ = templ;
  out.p = p;
  if (templ == SweepTemplate::intro) {
    for (long long n = lo; n <= hi; ++n) out.tuples.push_back({1, 1, n});
  } else {
    for (long long x = lo; x <= hi; ++x)
      for (long long y = lo; y <= hi; ++y)
        for (long long z = lo; z <= hi; ++z) out.tuples.push_back({x, y, z});
  }
  const bool use_case1 = templ != SweepTemplate::case_ii;
  out.criterion = use_case1 ? "case1" : "case2";
  auto equivalent = [&](std::size_t i, std::size_t j) {
    return use_case1 ? criterion_case1(p, out.tuples[i], out.tuples[j])
                     : criterion_case2(p, out.tuples[i], out.tuples[j]);
  };

  const std::size_t n = out.tuples.size();
  std::vector<std::vector<bool>> eq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) eq[i][j] = equivalent(i, j);
  for (std::size_t i = 0; i < n; ++i) {
    if (!eq[i][i]) throw std::logic_error("sweep: criterion is not reflexive");
    for (std::size_t j = 0; j < n; ++j) {
      if (eq[i][j] != eq[j][i]) throw std::logic_error("sweep: criterion is not symmetric");
      for (std::size_t k = 0; k < n; ++k)
        if (eq[i][j] && eq[j][k] && !eq[i][k])
          throw std::logic_error("sweep: criterion is not transitive");
    }
  }

  std::vector<bool> placed(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (placed[i]) continue;
    std::vector<std::size_t> cls;
    for (std::size_t j = i; j < n; ++j)
      if (eq[i][j]) {
        cls.push_back(j);
        placed[j] = true;
      }
    out.classes.push_back(std::move(cls));
  }

  if (verify) {
    auto make_graph = [&](std::size_t i) {
      const auto& t = out.tuples[i];
      return templ == SweepTemplate::case_ii ? case2_graph(p, t[0], t[1], t[2])
                                             : case1_graph(p, t[0], t[1], t[2]);
    };
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<int> got(pairs.size(), -1);
    const std::size_t workers =
        std::max<std::size_t>(1, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    std::exception_ptr worker_error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        for (;;) {
          std::size_t k = next.fetch_add(1);
          if (k >= pairs.size()) return;
          try {
            auto [i, j] = pairs[k];
            ClassifyReport rep = classify_pair(make_graph(i), make_graph(j), opts);
            if (rep.verdict.status == Verdict::Status::isomorphic) got[k] = 1;
            else if (rep.verdict.status == Verdict::Status::not_isomorphic) got[k] = 0;
            else got[k] = 2;
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!worker_error) worker_error = std::current_exception();
            next.store(pairs.size());
            return;
          }
        }
      });
    for (auto& t : pool) t.join();
    if (worker_error) std::rethrow_exception(worker_error);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      auto [i, j] = pairs[k];
      if (got[k] == 2)
        throw std::logic_error("sweep verification hit an unknown verdict");
      if ((got[k] == 1) != static_cast<bool>(eq[i][j]))
        throw std::logic_error("sweep verification disagrees with the criterion");
    }
    out.verified = true;
  }
  return out;
}

} // namespace fkt
