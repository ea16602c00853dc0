#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fkt/intmat.hpp"

namespace fkt {

/// Finite directed graph; adj(i, j) counts edges from vertex i to vertex j.
/// A zero row is a sink.
class Graph {
public:
  Graph() = default;
  explicit Graph(IntMatrix adjacency);

  std::size_t vertices() const { return n_; }
  const IntMatrix& adjacency() const { return adj_; }
  const Int& edges(std::size_t from, std::size_t to) const { return adj_(from, to); }

  bool is_sink(std::size_t v) const;
  std::vector<std::size_t> regular_vertices() const;
  bool has_cycle() const;
  /// Whether v lies on a cycle (a return path through v exists).
  bool on_cycle(std::size_t v) const;

private:
  std::size_t n_ = 0;
  IntMatrix adj_;
};

using VertexSet = std::vector<std::size_t>; // sorted vertex ids

/// The lattice of hereditary and saturated vertex sets, ordered by inclusion.
struct IdealLattice {
  std::vector<VertexSet> subsets;                       // sorted by (size, lex)
  std::vector<std::pair<std::size_t, std::size_t>> covers; // (lower, upper) indices
  bool is_linear = false;
  std::vector<std::size_t> chain; // subset indices, increasing, when linear
  std::size_t length() const { return subsets.empty() ? 0 : subsets.size() - 1; }
};

IdealLattice hereditary_saturated_subsets(const Graph& e);

bool is_hereditary_saturated(const Graph& e, const VertexSet& h);

/// Every vertex on a cycle admits at least two distinct return paths.
bool condition_K(const Graph& e);

/// Induced subgraph on big \ small; both sets must be hereditary saturated
/// and nested.
Graph subquotient_graph(const Graph& e, const VertexSet& big, const VertexSet& small);

enum class SubquotientType { AF, PurelyInfiniteSimpleLike, Mixed };

/// AF when cycle-free; purely-infinite-like when every simple subquotient of
/// the gauge lattice contains a cycle and Condition (K) holds; Mixed else.
SubquotientType subquotient_type(const Graph& e);

std::string to_string(SubquotientType t);

enum class SplitOrientation { af_ideal, af_quotient };

struct CnMembership {
  bool member = false;
  std::size_t n = 0;          // lattice chain length when member
  std::size_t split = 0;      // chain index j: the ideal side is chain[0..j]
  SplitOrientation orientation = SplitOrientation::af_ideal;
  std::string reason;         // set when not a member
  /// Non-linear lattice fallback: unique least ideal is AF and the quotient
  /// is purely infinite throughout (the minimal-ideal extension setting).
  bool least_ideal_extension_eligible = false;
};

CnMembership class_Cn_membership(const Graph& e);

/// Order isomorphism of two ideal lattices (pure poset structure).
bool lattices_isomorphic(const IdealLattice& a, const IdealLattice& b);

} // namespace fkt
