#include "fkt/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace fkt {

Graph::Graph(IntMatrix adjacency) : n_(adjacency.rows()), adj_(std::move(adjacency)) {
  if (adj_.rows() != adj_.cols())
    throw std::invalid_argument("adjacency matrix must be square");
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (adj_(i, j) < 0) throw std::invalid_argument("adjacency entries must be >= 0");
}

bool Graph::is_sink(std::size_t v) const {
  for (std::size_t j = 0; j < n_; ++j)
    if (adj_(v, j) != 0) return false;
  return true;
}

std::vector<std::size_t> Graph::regular_vertices() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < n_; ++v)
    if (!is_sink(v)) out.push_back(v);
  return out;
}

bool Graph::on_cycle(std::size_t v) const {
  // v is reachable from one of its own targets
  std::vector<bool> seen(n_, false);
  std::vector<std::size_t> stack;
  for (std::size_t w = 0; w < n_; ++w)
    if (adj_(v, w) != 0 && !seen[w]) {
      seen[w] = true;
      stack.push_back(w);
    }
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    if (u == v) return true;
    for (std::size_t w = 0; w < n_; ++w)
      if (adj_(u, w) != 0 && !seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  return false;
}

bool Graph::has_cycle() const {
  for (std::size_t v = 0; v < n_; ++v)
    if (on_cycle(v)) return true;
  return false;
}

namespace {

using Mask = std::uint32_t;

Mask set_to_mask(const VertexSet& s) {
  Mask m = 0;
  for (std::size_t v : s) m |= Mask(1) << v;
  return m;
}

VertexSet mask_to_set(Mask m, std::size_t n) {
  VertexSet out;
  for (std::size_t v = 0; v < n; ++v)
    if (m & (Mask(1) << v)) out.push_back(v);
  return out;
}

Mask hs_closure(const Graph& e, Mask m) {
  const std::size_t n = e.vertices();
  for (;;) {
    Mask before = m;
    // hereditary: add edge targets
    for (std::size_t v = 0; v < n; ++v)
      if (m & (Mask(1) << v))
        for (std::size_t w = 0; w < n; ++w)
          if (e.edges(v, w) != 0) m |= Mask(1) << w;
    // saturated: add regular vertices emitting only into m
    for (std::size_t v = 0; v < n; ++v) {
      if (m & (Mask(1) << v)) continue;
      if (e.is_sink(v)) continue;
      bool inside = true;
      for (std::size_t w = 0; w < n && inside; ++w)
        if (e.edges(v, w) != 0 && !(m & (Mask(1) << w))) inside = false;
      if (inside) m |= Mask(1) << v;
    }
    if (m == before) return m;
  }
}

int popcount(Mask m) {
  int c = 0;
  while (m) {
    m &= m - 1;
    ++c;
  }
  return c;
}

} // namespace

IdealLattice hereditary_saturated_subsets(const Graph& e) {
  const std::size_t n = e.vertices();
  if (n > 20)
    throw std::invalid_argument("hereditary_saturated_subsets: graph too large "
                                "for exhaustive lattice enumeration");
  std::set<Mask> closed;
  for (Mask m = 0; m < (Mask(1) << n); ++m) closed.insert(hs_closure(e, m));

  std::vector<Mask> sorted(closed.begin(), closed.end());
  std::sort(sorted.begin(), sorted.end(), [n](Mask a, Mask b) {
    int pa = popcount(a), pb = popcount(b);
    if (pa != pb) return pa < pb;
    return mask_to_set(a, n) < mask_to_set(b, n);
  });

  IdealLattice lat;
  for (Mask m : sorted) lat.subsets.push_back(mask_to_set(m, n));

  auto subset_of = [&](std::size_t i, std::size_t j) {
    return (sorted[i] & ~sorted[j]) == 0;
  };
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      if (i == j || !subset_of(i, j)) continue;
      bool covering = true;
      for (std::size_t k = 0; k < sorted.size() && covering; ++k)
        if (k != i && k != j && subset_of(i, k) && subset_of(k, j)) covering = false;
      if (covering) lat.covers.emplace_back(i, j);
    }

  lat.is_linear = true;
  for (std::size_t i = 0; i + 1 < sorted.size() && lat.is_linear; ++i)
    if (!subset_of(i, i + 1)) lat.is_linear = false;
  if (lat.is_linear) {
    lat.chain.resize(lat.subsets.size());
    for (std::size_t i = 0; i < lat.chain.size(); ++i) lat.chain[i] = i;
  }
  return lat;
}

bool is_hereditary_saturated(const Graph& e, const VertexSet& h) {
  Mask m = set_to_mask(h);
  return hs_closure(e, m) == m;
}

namespace {

// Number (clamped at 2) of vertex-simple return paths based at v, counted as
// edge sequences; records the intermediate vertices of the unique path when
// the count is exactly 1.
int simple_return_paths(const Graph& e, std::size_t v, std::vector<std::size_t>& unique_path) {
  const std::size_t n = e.vertices();
  std::vector<bool> visited(n, false);
  std::vector<std::size_t> path;
  int count = 0;
  visited[v] = true;
  // ways = product of edge multiplicities along the current path, clamped at 2
  auto rec = [&](auto&& self, std::size_t u, int ways) -> bool {
    for (std::size_t w = 0; w < n; ++w) {
      const Int& mult = e.edges(u, w);
      if (mult == 0) continue;
      int here = (mult > 1 || ways > 1) ? 2 : 1;
      if (w == v) {
        count += here;
        if (count == 1) unique_path = path;
        if (count >= 2) return true;
      } else if (!visited[w]) {
        visited[w] = true;
        path.push_back(w);
        bool done = self(self, w, here);
        path.pop_back();
        visited[w] = false;
        if (done) return true;
      }
    }
    return false;
  };
  rec(rec, v, 1);
  return std::min(count, 2);
}

bool cycle_through_avoiding(const Graph& e, std::size_t w, std::size_t avoid) {
  const std::size_t n = e.vertices();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack;
  for (std::size_t t = 0; t < n; ++t)
    if (t != avoid && e.edges(w, t) != 0 && !seen[t]) {
      seen[t] = true;
      stack.push_back(t);
    }
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    if (u == w) return true;
    for (std::size_t t = 0; t < n; ++t)
      if (t != avoid && e.edges(u, t) != 0 && !seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
  }
  return false;
}

} // namespace

bool condition_K(const Graph& e) {
  for (std::size_t v = 0; v < e.vertices(); ++v) {
    std::vector<std::size_t> unique_path;
    int count = simple_return_paths(e, v, unique_path);
    if (count == 0 || count >= 2) continue;
    // A single simple return path; a second return path exists iff some
    // intermediate vertex lies on a cycle avoiding v.
    bool pumped = false;
    for (std::size_t w : unique_path)
      if (cycle_through_avoiding(e, w, v)) {
        pumped = true;
        break;
      }
    if (!pumped) return false;
  }
  return true;
}

Graph subquotient_graph(const Graph& e, const VertexSet& big, const VertexSet& small) {
  Mask mb = set_to_mask(big), ms = set_to_mask(small);
  if ((ms & ~mb) != 0)
    throw std::invalid_argument("subquotient_graph: sets are not nested");
  if (!is_hereditary_saturated(e, big) || !is_hereditary_saturated(e, small))
    throw std::invalid_argument("subquotient_graph: sets must be hereditary and saturated");
  VertexSet keep;
  for (std::size_t v : big)
    if (!(ms & (Mask(1) << v))) keep.push_back(v);
  return Graph(e.adjacency().submatrix(keep, keep));
}

SubquotientType subquotient_type(const Graph& e) {
  if (!e.has_cycle()) return SubquotientType::AF;
  if (!condition_K(e)) return SubquotientType::Mixed;
  IdealLattice lat = hereditary_saturated_subsets(e);
  for (auto [lo, hi] : lat.covers) {
    Graph simple = subquotient_graph(e, lat.subsets[hi], lat.subsets[lo]);
    if (!simple.has_cycle()) return SubquotientType::Mixed;
  }
  return SubquotientType::PurelyInfiniteSimpleLike;
}

std::string to_string(SubquotientType t) {
  switch (t) {
    case SubquotientType::AF: return "AF";
    case SubquotientType::PurelyInfiniteSimpleLike: return "purely infinite";
    case SubquotientType::Mixed: return "mixed";
  }
  return "?";
}

CnMembership class_Cn_membership(const Graph& e) {
  CnMembership r;
  if (!condition_K(e)) {
    r.reason = "Condition (K) fails";
    return r;
  }
  IdealLattice lat = hereditary_saturated_subsets(e);

  // Minimal-ideal extension eligibility (non-linear fallback route).
  std::vector<std::size_t> atoms;
  for (auto [lo, hi] : lat.covers)
    if (lat.subsets[lo].empty()) atoms.push_back(hi);
  if (atoms.size() == 1) {
    const VertexSet& a = lat.subsets[atoms[0]];
    VertexSet full = lat.subsets.back();
    Graph ideal = subquotient_graph(e, a, {});
    Graph quotient = subquotient_graph(e, full, a);
    if (!ideal.has_cycle() &&
        (quotient.vertices() == 0 ||
         subquotient_type(quotient) == SubquotientType::PurelyInfiniteSimpleLike))
      r.least_ideal_extension_eligible = true;
  }

  if (!lat.is_linear) {
    r.reason = "ideal lattice is not linear";
    return r;
  }
  const std::size_t n = lat.length();
  r.n = n;

  auto cover_has_cycle = [&](std::size_t i) {
    // chain step i: subsets[i-1] < subsets[i]
    Graph g = subquotient_graph(e, lat.subsets[i], lat.subsets[i - 1]);
    return g.has_cycle();
  };
  for (std::size_t j = 0; j <= n; ++j) {
    Graph lower = subquotient_graph(e, lat.subsets[j], {});
    Graph upper = subquotient_graph(e, lat.subsets[n], lat.subsets[j]);
    bool af_lower = !lower.has_cycle();
    bool af_upper = !upper.has_cycle();
    bool pi_lower = true, pi_upper = true;
    for (std::size_t i = 1; i <= j; ++i)
      if (!cover_has_cycle(i)) pi_lower = false;
    for (std::size_t i = j + 1; i <= n; ++i)
      if (!cover_has_cycle(i)) pi_upper = false;
    if (af_lower && pi_upper) {
      r.member = true;
      r.split = j;
      r.orientation = SplitOrientation::af_ideal;
      return r;
    }
    if (pi_lower && af_upper) {
      r.member = true;
      r.split = j;
      r.orientation = SplitOrientation::af_quotient;
      return r;
    }
  }
  r.reason = "no single AF / purely-infinite transition along the chain";
  return r;
}

bool lattices_isomorphic(const IdealLattice& a, const IdealLattice& b) {
  const std::size_t m = a.subsets.size();
  if (m != b.subsets.size()) return false;
  auto leq = [](const IdealLattice& l, std::size_t i, std::size_t j) {
    return std::includes(l.subsets[j].begin(), l.subsets[j].end(),
                         l.subsets[i].begin(), l.subsets[i].end());
  };
  // invariant per element: (#below, #above)
  auto profile = [&](const IdealLattice& l, std::size_t i) {
    std::pair<int, int> p{0, 0};
    for (std::size_t j = 0; j < m; ++j) {
      if (leq(l, j, i)) ++p.first;
      if (leq(l, i, j)) ++p.second;
    }
    return p;
  };
  std::vector<std::pair<int, int>> pa(m), pb(m);
  for (std::size_t i = 0; i < m; ++i) {
    pa[i] = profile(a, i);
    pb[i] = profile(b, i);
  }
  {
    auto sa = pa, sb = pb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  std::vector<std::size_t> img(m, m);
  std::vector<bool> used(m, false);
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == m) return true;
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j] || pa[i] != pb[j]) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k) {
        if (leq(a, i, k) != leq(b, j, img[k])) ok = false;
        if (leq(a, k, i) != leq(b, img[k], j)) ok = false;
      }
      if (!ok) continue;
      img[i] = j;
      used[j] = true;
      if (self(self, i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  return rec(rec, 0);
}

} // namespace fkt
