#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fkt/abelian.hpp"
#include "fkt/graph.hpp"

namespace fkt {

/// Locally closed interval [a, b] of the n-point linear space; indexes the
/// subquotient on H_{n-a+1} \ H_{n-b} (so [n, n] is the least ideal).
struct Interval {
  std::size_t a = 0, b = 0;
  auto operator<=>(const Interval&) const = default;
};

struct Triple {
  std::size_t u = 0, v = 0, w = 0;
  auto operator<=>(const Triple&) const = default;
};

/// K-theory data of one subquotient: presentation B = adj^T - I with columns
/// restricted to the non-sink vertices, K0 = cok B, K1 = ker B, and the
/// positive cone generated by the vertex classes.
struct KData {
  VertexSet vertices;               // global vertex ids, sorted
  std::vector<std::size_t> regular; // positions into `vertices`
  IntMatrix b;
  IntMatrix kernel;                 // basis of ker b
  FgAbGroup k0, k1;
  Cone cone;
};

struct SixTerm {
  Triple triple;
  GroupHom iota0, pi0, exp, iota1, pi1, delta;
};

class ExactnessError : public std::runtime_error {
public:
  ExactnessError(const std::string& node, Triple t)
      : std::runtime_error("six-term sequence fails exactness at " + node),
        node(node), triple(t) {}
  std::string node;
  Triple triple;
};

class NonLinearLatticeError : public std::runtime_error {
public:
  explicit NonLinearLatticeError(IdealLattice lat)
      : std::runtime_error("ideal lattice is not linear"), lattice(std::move(lat)) {}
  IdealLattice lattice;
};

KData make_kdata(const Graph& e, VertexSet vertices);

/// Six-term data for the extension ideal -> middle -> quotient; the three
/// KData vertex sets must satisfy middle = ideal + quotient with the ideal
/// part hereditary inside the middle.  Exactness is verified and a failure
/// throws ExactnessError.
SixTerm make_six_term(const Graph& e, const KData& ideal, const KData& middle,
                      const KData& quotient, Triple label);

/// The filtered, ordered K-theory of a graph with a linear ideal lattice.
class FkDiagram {
public:
  std::size_t n() const { return n_; }
  const Graph& graph() const { return graph_; }
  const IdealLattice& lattice() const { return lattice_; }
  const KData& at(std::size_t a, std::size_t b) const;
  const std::map<Interval, KData>& groups() const { return groups_; }
  const std::map<Triple, SixTerm>& maps() const { return maps_; }

  friend FkDiagram filtered_k_theory(const Graph& e);

private:
  Graph graph_;
  IdealLattice lattice_;
  std::size_t n_ = 0;
  std::map<Interval, KData> groups_;
  std::map<Triple, SixTerm> maps_;
};

KData k_pair(const Graph& e, const IdealLattice& chain, std::size_t a, std::size_t b);

SixTerm six_term(const Graph& e, const IdealLattice& chain, std::size_t u,
                 std::size_t v, std::size_t w);

/// Groups and maps for all intervals and triples; six-term exactness and
/// naturality of the canonical maps are verified on construction.
FkDiagram filtered_k_theory(const Graph& e);

/// The 4-point non-linear space of Case II: a least point w under three
/// incomparable points q1, q2, q3.  Connected locally closed subsets are
/// encoded as bitmasks (bit 0 = w, bit i = q_i).
struct Case2Diagram {
  Graph graph;
  std::array<VertexSet, 4> parts; // parts[0] = least-ideal part, parts[i] = q_i part
  std::map<std::uint8_t, KData> groups;
  struct Arrow {
    std::uint8_t src, dst;
    int degree; // 0 or 1
    std::string kind; // "iota", "pi", "delta", "exp"
    GroupHom hom;
  };
  std::vector<Arrow> arrows;
};

/// All connected locally closed subsets of the Case II space with canonical
/// maps; rejects graphs whose lattice does not have the Case II shape.
Case2Diagram case2_diagram(const Graph& e);

/// Flattened diagram view used by the isomorphism search: one unit per
/// (subset, K-degree), arrows between units, cones on degree-0 units.
struct DiagramUnit {
  std::string label;
  FgAbGroup group;
  std::optional<Cone> cone;
};
struct DiagramArrow {
  std::string label;
  std::size_t src = 0, dst = 0;
  IntMatrix lift;
};
struct KDiagram {
  std::vector<DiagramUnit> units;
  std::vector<DiagramArrow> arrows;
  std::vector<std::size_t> order; // suggested assignment order for the search
  std::size_t unit_index(const std::string& label) const;
};

KDiagram to_kdiagram(const FkDiagram& d);
/// perm[i] gives the canonical label (1..3) of this diagram's point q_{i+1}.
KDiagram to_kdiagram(const Case2Diagram& d, const std::array<std::size_t, 3>& perm);

} // namespace fkt
