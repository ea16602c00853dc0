#include "fkt/ktheory.hpp"

#include <algorithm>
#include <sstream>

namespace fkt {

namespace {

std::string interval_str(std::size_t a, std::size_t b) {
  std::ostringstream os;
  os << "[" << a << "," << b << "]";
  return os.str();
}

IntMatrix image_lattice(const GroupHom& f) {
  return f.lift.hstack(f.target.presentation());
}

IntMatrix kernel_lattice(const GroupHom& g) {
  IntMatrix stacked = g.lift.hstack(g.target.presentation());
  IntMatrix kern = kernel_basis(stacked);
  IntMatrix proj(g.source.generators(), kern.cols());
  for (std::size_t i = 0; i < proj.rows(); ++i)
    for (std::size_t j = 0; j < kern.cols(); ++j) proj(i, j) = kern(i, j);
  return proj.hstack(g.source.presentation());
}

bool exact_at(const GroupHom& incoming, const GroupHom& outgoing) {
  return lattices_equal(image_lattice(incoming), kernel_lattice(outgoing));
}

} // namespace

KData make_kdata(const Graph& e, VertexSet vertices) {
  std::sort(vertices.begin(), vertices.end());
  KData kd;
  kd.vertices = std::move(vertices);
  const std::size_t m = kd.vertices.size();
  IntMatrix sub = e.adjacency().submatrix(kd.vertices, kd.vertices);
  Graph f(sub);
  for (std::size_t v = 0; v < m; ++v)
    if (!f.is_sink(v)) kd.regular.push_back(v);
  kd.b = IntMatrix(m, kd.regular.size());
  for (std::size_t c = 0; c < kd.regular.size(); ++c) {
    std::size_t v = kd.regular[c];
    for (std::size_t w = 0; w < m; ++w)
      kd.b(w, c) = sub(v, w) - (v == w ? 1 : 0);
  }
  kd.kernel = kernel_basis(kd.b);
  kd.k0 = FgAbGroup(kd.b);
  kd.k1 = FgAbGroup::free_group(kd.kernel.cols());
  kd.cone.group = kd.k0;
  for (std::size_t v = 0; v < m; ++v) {
    std::vector<Int> gen(m, 0);
    gen[v] = 1;
    kd.cone.generators.push_back(std::move(gen));
  }
  return kd;
}

namespace {

std::vector<std::size_t> global_regular(const KData& kd) {
  std::vector<std::size_t> out;
  for (std::size_t r : kd.regular) out.push_back(kd.vertices[r]);
  return out;
}

std::size_t position_of(const std::vector<std::size_t>& v, std::size_t x) {
  return std::lower_bound(v.begin(), v.end(), x) - v.begin();
}

bool contains(const std::vector<std::size_t>& v, std::size_t x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  return it != v.end() && *it == x;
}

} // namespace

SixTerm make_six_term(const Graph& e, const KData& ideal, const KData& middle,
                      const KData& quotient, Triple label) {
  SixTerm st;
  st.triple = label;

  // Degree-0 canonical maps: coordinate inclusion and projection.
  IntMatrix inc(middle.vertices.size(), ideal.vertices.size());
  for (std::size_t j = 0; j < ideal.vertices.size(); ++j)
    inc(position_of(middle.vertices, ideal.vertices[j]), j) = 1;
  st.iota0 = GroupHom{ideal.k0, middle.k0, std::move(inc)};

  IntMatrix proj(quotient.vertices.size(), middle.vertices.size());
  for (std::size_t j = 0; j < middle.vertices.size(); ++j)
    if (contains(quotient.vertices, middle.vertices[j]))
      proj(position_of(quotient.vertices, middle.vertices[j]), j) = 1;
  st.pi0 = GroupHom{middle.k0, quotient.k0, std::move(proj)};

  // Degree-1 maps through the kernel bases.
  auto greg_ideal = global_regular(ideal);
  auto greg_middle = global_regular(middle);
  auto greg_quot = global_regular(quotient);

  IntMatrix padded(greg_middle.size(), ideal.kernel.cols());
  for (std::size_t r = 0; r < greg_middle.size(); ++r)
    if (contains(greg_ideal, greg_middle[r]))
      for (std::size_t c = 0; c < ideal.kernel.cols(); ++c)
        padded(r, c) = ideal.kernel(position_of(greg_ideal, greg_middle[r]), c);
  auto iota1_lift = solve_matrix(middle.kernel, padded);
  if (!iota1_lift) throw ExactnessError("K1 inclusion is not integral", label);
  st.iota1 = GroupHom{ideal.k1, middle.k1, std::move(*iota1_lift)};

  IntMatrix projected(greg_quot.size(), middle.kernel.cols());
  for (std::size_t r = 0; r < greg_quot.size(); ++r) {
    std::size_t pos = position_of(greg_middle, greg_quot[r]);
    for (std::size_t c = 0; c < middle.kernel.cols(); ++c)
      projected(r, c) = middle.kernel(pos, c);
  }
  auto pi1_lift = solve_matrix(quotient.kernel, projected);
  if (!pi1_lift) throw ExactnessError("K1 restriction is not integral", label);
  st.pi1 = GroupHom{middle.k1, quotient.k1, std::move(*pi1_lift)};

  // Index map from the off-diagonal block of adj^T - I, paired with the
  // quotient's kernel basis; the exponential map vanishes for graph algebras.
  IntMatrix block(ideal.vertices.size(), greg_quot.size());
  for (std::size_t i = 0; i < ideal.vertices.size(); ++i)
    for (std::size_t j = 0; j < greg_quot.size(); ++j)
      block(i, j) = e.edges(greg_quot[j], ideal.vertices[i]);
  st.delta = GroupHom{quotient.k1, ideal.k0, block * quotient.kernel};
  st.exp = GroupHom{quotient.k0, ideal.k1,
                    IntMatrix::zero(ideal.k1.generators(), quotient.k0.generators())};

  struct Node {
    const char* name;
    const GroupHom* in;
    const GroupHom* out;
  };
  const Node nodes[] = {
      {"K0(ideal)", &st.delta, &st.iota0},   {"K0(middle)", &st.iota0, &st.pi0},
      {"K0(quotient)", &st.pi0, &st.exp},    {"K1(ideal)", &st.exp, &st.iota1},
      {"K1(middle)", &st.iota1, &st.pi1},    {"K1(quotient)", &st.pi1, &st.delta}};
  for (const auto& node : nodes)
    if (!exact_at(*node.in, *node.out)) throw ExactnessError(node.name, label);
  return st;
}

KData k_pair(const Graph& e, const IdealLattice& chain, std::size_t a, std::size_t b) {
  if (!chain.is_linear)
    throw NonLinearLatticeError(chain);
  const std::size_t n = chain.length();
  if (a < 1 || a > b || b > n)
    throw std::invalid_argument("k_pair: interval out of range");
  const VertexSet& hi = chain.subsets[n - a + 1];
  const VertexSet& lo = chain.subsets[n - b];
  VertexSet diff;
  std::set_difference(hi.begin(), hi.end(), lo.begin(), lo.end(),
                      std::back_inserter(diff));
  return make_kdata(e, std::move(diff));
}

namespace {

KData interval_kdata(const Graph& e, const IdealLattice& chain, std::size_t a,
                     std::size_t b) {
  if (a > b) return make_kdata(e, {}); // empty piece: zero groups
  return k_pair(e, chain, a, b);
}

} // namespace

SixTerm six_term(const Graph& e, const IdealLattice& chain, std::size_t u,
                 std::size_t v, std::size_t w) {
  if (!chain.is_linear) throw NonLinearLatticeError(chain);
  const std::size_t n = chain.length();
  if (!(1 <= u && u <= v && v <= w && w <= n + 1))
    throw std::invalid_argument("six_term: triple out of range");
  KData y1 = interval_kdata(e, chain, v, w - 1);
  KData y2 = interval_kdata(e, chain, u, w - 1);
  KData y3 = interval_kdata(e, chain, u, v - 1);
  return make_six_term(e, y1, y2, y3, Triple{u, v, w});
}

const KData& FkDiagram::at(std::size_t a, std::size_t b) const {
  auto it = groups_.find(Interval{a, b});
  if (it == groups_.end()) throw std::invalid_argument("interval out of range");
  return it->second;
}

namespace {

void verify_naturality(const FkDiagram& d);

} // namespace

FkDiagram filtered_k_theory(const Graph& e) {
  IdealLattice lat = hereditary_saturated_subsets(e);
  if (!lat.is_linear) throw NonLinearLatticeError(std::move(lat));
  FkDiagram d;
  d.graph_ = e;
  d.lattice_ = std::move(lat);
  d.n_ = d.lattice_.length();
  for (std::size_t a = 1; a <= d.n_; ++a)
    for (std::size_t b = a; b <= d.n_; ++b)
      d.groups_.emplace(Interval{a, b}, k_pair(e, d.lattice_, a, b));
  for (std::size_t u = 1; u + 1 <= d.n_; ++u)
    for (std::size_t v = u + 1; v <= d.n_; ++v)
      for (std::size_t w = v + 1; w <= d.n_ + 1; ++w) {
        const KData& y1 = d.at(v, w - 1);
        const KData& y2 = d.at(u, w - 1);
        const KData& y3 = d.at(u, v - 1);
        d.maps_.emplace(Triple{u, v, w}, make_six_term(e, y1, y2, y3, Triple{u, v, w}));
      }
  verify_naturality(d);
  return d;
}

namespace {

void verify_naturality(const FkDiagram& d) {
  const std::size_t n = d.n();
  auto st = [&](std::size_t u, std::size_t v, std::size_t w) -> const SixTerm& {
    return d.maps().at(Triple{u, v, w});
  };
  auto fail = [&](const char* what, std::size_t u, std::size_t v, std::size_t w,
                  std::size_t t) {
    std::ostringstream os;
    os << what << " naturality fails at (" << u << "," << v << "," << w << ","
       << t << ")";
    throw ExactnessError(os.str(), Triple{u, v, w});
  };
  for (std::size_t u = 1; u <= n; ++u)
    for (std::size_t v = u + 1; v <= n; ++v)
      for (std::size_t w = v + 1; w <= n + 1; ++w)
        for (std::size_t t = w + 1; t <= n + 1; ++t) {
          // iota and pi composites agree with the direct canonical maps
          if (!homs_equal(compose(st(u, v, t).iota0, st(v, w, t).iota0),
                          st(u, w, t).iota0) ||
              !homs_equal(compose(st(u, v, t).iota1, st(v, w, t).iota1),
                          st(u, w, t).iota1))
            fail("iota", u, v, w, t);
          if (!homs_equal(compose(st(u, v, w).pi0, st(u, w, t).pi0),
                          st(u, v, t).pi0) ||
              !homs_equal(compose(st(u, v, w).pi1, st(u, w, t).pi1),
                          st(u, v, t).pi1))
            fail("pi", u, v, w, t);
          // mixed square: restrict-then-include equals include-then-restrict
          if (!homs_equal(compose(st(u, w, t).pi0, st(u, v, t).iota0),
                          compose(st(u, v, w).iota0, st(v, w, t).pi0)) ||
              !homs_equal(compose(st(u, w, t).pi1, st(u, v, t).iota1),
                          compose(st(u, v, w).iota1, st(v, w, t).pi1)))
            fail("iota/pi square", u, v, w, t);
          // index-map naturality
          if (!homs_equal(compose(st(v, w, t).pi0, st(u, v, t).delta),
                          st(u, v, w).delta))
            fail("delta/pi", u, v, w, t);
          if (!homs_equal(compose(st(u, v, t).delta, st(u, v, w).pi1),
                          compose(st(v, w, t).iota0, st(u, w, t).delta)))
            fail("delta/iota", u, v, w, t);
        }
}

} // namespace

// ---------------------------------------------------------------------------
// Case II

Case2Diagram case2_diagram(const Graph& e) {
  IdealLattice lat = hereditary_saturated_subsets(e);
  const char* reject = "case2_diagram: lattice is not of the Case II shape";
  if (lat.subsets.size() != 9) throw std::invalid_argument(reject);

  std::vector<std::size_t> atoms, mids;
  for (auto [lo, hi] : lat.covers) {
    if (lat.subsets[lo].empty()) atoms.push_back(hi);
  }
  if (atoms.size() != 1) throw std::invalid_argument(reject);
  const VertexSet& atom = lat.subsets[atoms[0]];
  for (auto [lo, hi] : lat.covers)
    if (lo == atoms[0]) mids.push_back(hi);
  if (mids.size() != 3) throw std::invalid_argument(reject);

  Case2Diagram d;
  d.graph = e;
  d.parts[0] = atom;
  for (std::size_t i = 0; i < 3; ++i) {
    VertexSet diff;
    const VertexSet& mid = lat.subsets[mids[i]];
    std::set_difference(mid.begin(), mid.end(), atom.begin(), atom.end(),
                        std::back_inserter(diff));
    d.parts[i + 1] = diff;
  }
  // The full vertex set must be the disjoint union of the four parts.
  VertexSet all;
  for (const auto& p : d.parts) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end());
  if (all != lat.subsets.back() ||
      std::adjacent_find(all.begin(), all.end()) != all.end())
    throw std::invalid_argument(reject);

  auto mask_vertices = [&](std::uint8_t mask) {
    VertexSet out;
    for (std::size_t bit = 0; bit < 4; ++bit)
      if (mask & (1u << bit))
        out.insert(out.end(), d.parts[bit].begin(), d.parts[bit].end());
    std::sort(out.begin(), out.end());
    return out;
  };

  const std::uint8_t lc_masks[] = {1, 2, 4, 8, 3, 5, 9, 7, 11, 13, 15};
  for (std::uint8_t m : lc_masks) d.groups.emplace(m, make_kdata(e, mask_vertices(m)));

  // Sanity: the sets containing the least point must be hereditary saturated
  // (they correspond to open subsets / ideals).
  for (std::uint8_t m : lc_masks)
    if ((m & 1) && !is_hereditary_saturated(e, mask_vertices(m)))
      throw std::invalid_argument(reject);

  // iota arrows for every relatively open inclusion.
  for (std::uint8_t s : lc_masks) {
    if (!(s & 1)) continue;
    for (std::uint8_t t : lc_masks) {
      if (s == t || (s & ~t) != 0) continue;
      const KData& ks = d.groups.at(s);
      const KData& kt = d.groups.at(t);
      IntMatrix inc(kt.vertices.size(), ks.vertices.size());
      for (std::size_t j = 0; j < ks.vertices.size(); ++j)
        inc(position_of(kt.vertices, ks.vertices[j]), j) = 1;
      d.arrows.push_back({s, t, 0, "iota", GroupHom{ks.k0, kt.k0, std::move(inc)}});
      // Degree 1 through the kernel bases (reuse the six-term machinery when
      // the complement is connected; otherwise build the inclusion directly).
      auto gs = global_regular(ks);
      auto gt = global_regular(kt);
      IntMatrix padded(gt.size(), ks.kernel.cols());
      for (std::size_t r = 0; r < gt.size(); ++r)
        if (contains(gs, gt[r]))
          for (std::size_t c = 0; c < ks.kernel.cols(); ++c)
            padded(r, c) = ks.kernel(position_of(gs, gt[r]), c);
      auto lift = solve_matrix(kt.kernel, padded);
      if (!lift)
        throw ExactnessError("K1 inclusion is not integral", Triple{s, t, 0});
      d.arrows.push_back({s, t, 1, "iota", GroupHom{ks.k1, kt.k1, std::move(*lift)}});
    }
  }
  // pi / delta / exp arrows from the extensions with connected quotient.
  for (std::uint8_t t : lc_masks) {
    if (!(t & 1)) continue;
    for (std::uint8_t q : {std::uint8_t(2), std::uint8_t(4), std::uint8_t(8)}) {
      if ((q & t) == 0) continue;
      std::uint8_t s = t & ~q;
      SixTerm st = make_six_term(e, d.groups.at(s), d.groups.at(t), d.groups.at(q),
                                 Triple{s, t, q});
      d.arrows.push_back({t, q, 0, "pi", st.pi0});
      d.arrows.push_back({t, q, 1, "pi", st.pi1});
      d.arrows.push_back({q, s, 0, "delta", st.delta});
      d.arrows.push_back({q, s, 1, "exp", st.exp});
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Flattened search views

std::size_t KDiagram::unit_index(const std::string& label) const {
  for (std::size_t i = 0; i < units.size(); ++i)
    if (units[i].label == label) return i;
  throw std::invalid_argument("unknown diagram unit " + label);
}

KDiagram to_kdiagram(const FkDiagram& d) {
  KDiagram out;
  std::map<std::pair<int, Interval>, std::size_t> index;
  auto add_unit = [&](int degree, Interval iv, const KData& kd) {
    DiagramUnit u;
    u.label = (degree == 0 ? "K0" : "K1") + interval_str(iv.a, iv.b);
    u.group = degree == 0 ? kd.k0 : kd.k1;
    if (degree == 0) u.cone = kd.cone;
    index[{degree, iv}] = out.units.size();
    out.units.push_back(std::move(u));
  };
  for (const auto& [iv, kd] : d.groups()) add_unit(0, iv, kd);
  for (const auto& [iv, kd] : d.groups()) add_unit(1, iv, kd);

  auto push_arrow = [&](const char* kind, Triple t, int deg_src, Interval src,
                        int deg_dst, Interval dst, const GroupHom& h) {
    std::ostringstream os;
    os << kind << "(" << t.u << "," << t.v << "," << t.w << ")";
    out.arrows.push_back(
        {os.str(), index.at({deg_src, src}), index.at({deg_dst, dst}), h.lift});
  };
  for (const auto& [t, st] : d.maps()) {
    Interval y1{t.v, t.w - 1}, y2{t.u, t.w - 1}, y3{t.u, t.v - 1};
    push_arrow("iota0", t, 0, y1, 0, y2, st.iota0);
    push_arrow("pi0", t, 0, y2, 0, y3, st.pi0);
    push_arrow("exp", t, 0, y3, 1, y1, st.exp);
    push_arrow("iota1", t, 1, y1, 1, y2, st.iota1);
    push_arrow("pi1", t, 1, y2, 1, y3, st.pi1);
    push_arrow("delta", t, 1, y3, 0, y1, st.delta);
  }

  // Assignment order: the K0 ideal chain from the least ideal upward, then
  // the remaining K0 units, then K1.
  const std::size_t n = d.n();
  std::vector<Interval> chain_order;
  for (std::size_t a = n; a >= 1; --a) chain_order.push_back(Interval{a, n});
  std::vector<Interval> rest;
  for (const auto& [iv, kd] : d.groups())
    if (iv.b != n) rest.push_back(iv);
  std::sort(rest.begin(), rest.end(), [](Interval x, Interval y) {
    if (x.b - x.a != y.b - y.a) return x.b - x.a < y.b - y.a;
    return x.a > y.a;
  });
  for (Interval iv : chain_order) out.order.push_back(index.at({0, iv}));
  for (Interval iv : rest) out.order.push_back(index.at({0, iv}));
  for (Interval iv : chain_order) out.order.push_back(index.at({1, iv}));
  for (Interval iv : rest) out.order.push_back(index.at({1, iv}));
  return out;
}

KDiagram to_kdiagram(const Case2Diagram& d, const std::array<std::size_t, 3>& perm) {
  KDiagram out;
  auto relabel = [&](std::uint8_t mask) {
    std::uint8_t m = mask & 1;
    for (std::size_t i = 0; i < 3; ++i)
      if (mask & (1u << (i + 1))) m |= 1u << perm[i];
    return m;
  };
  auto mask_label = [&](int degree, std::uint8_t mask) {
    std::uint8_t m = relabel(mask);
    std::ostringstream os;
    os << (degree == 0 ? "K0{" : "K1{");
    bool first = true;
    if (m & 1) {
      os << "w";
      first = false;
    }
    for (std::size_t i = 1; i < 4; ++i)
      if (m & (1u << i)) {
        if (!first) os << ",";
        os << "q" << i;
        first = false;
      }
    os << "}";
    return os.str();
  };
  std::map<std::pair<int, std::uint8_t>, std::size_t> index;
  for (int degree : {0, 1})
    for (const auto& [mask, kd] : d.groups) {
      DiagramUnit u;
      u.label = mask_label(degree, mask);
      u.group = degree == 0 ? kd.k0 : kd.k1;
      if (degree == 0) u.cone = kd.cone;
      index[{degree, mask}] = out.units.size();
      out.units.push_back(std::move(u));
    }
  for (const auto& a : d.arrows) {
    int deg_dst = a.degree;
    int deg_src = a.degree;
    if (a.kind == "delta") { deg_src = 1; deg_dst = 0; }
    if (a.kind == "exp") { deg_src = 0; deg_dst = 1; }
    std::ostringstream os;
    os << a.kind << a.degree << "(" << mask_label(0, a.src) << "->"
       << mask_label(0, a.dst) << ")";
    out.arrows.push_back(
        {os.str(), index.at({deg_src, a.src}), index.at({deg_dst, a.dst}), a.hom.lift});
  }
  // Order: least ideal, then singletons, mids, co-atoms, full; K0 then K1.
  const std::uint8_t order_masks[] = {1, 2, 4, 8, 3, 5, 9, 7, 11, 13, 15};
  for (int degree : {0, 1})
    for (std::uint8_t m : order_masks) out.order.push_back(index.at({degree, m}));
  return out;
}

} // namespace fkt
