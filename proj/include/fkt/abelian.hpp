#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fkt/intmat.hpp"

namespace fkt {

/// Finitely generated abelian group presented as Z^gens / colspan(presentation).
/// Canonical data (free rank, invariant factors, change of basis) is computed
/// once from the Smith normal form of the presentation.
class FgAbGroup {
public:
  explicit FgAbGroup(IntMatrix presentation);
  FgAbGroup() : FgAbGroup(IntMatrix(0, 0)) {}

  static FgAbGroup free_group(std::size_t rank) {
    return FgAbGroup(IntMatrix(rank, 0));
  }
  static FgAbGroup trivial() { return free_group(0); }

  const IntMatrix& presentation() const { return presentation_; }
  std::size_t generators() const { return presentation_.rows(); }
  std::size_t free_rank() const { return free_rank_; }
  const std::vector<Int>& invariant_factors() const { return factors_; }

  /// Unimodular map from generator coordinates to canonical coordinates.
  const IntMatrix& to_canonical() const { return to_canonical_; }
  const IntMatrix& from_canonical() const { return from_canonical_; }
  /// Per canonical coordinate: 1 killed, d > 1 torsion of order d, 0 free.
  const std::vector<Int>& canonical_moduli() const { return moduli_; }

  bool is_trivial() const { return free_rank_ == 0 && factors_.empty(); }
  bool is_finite() const { return free_rank_ == 0; }
  /// Group order; 0 means infinite.
  Int order() const;
  Int torsion_exponent() const;

  /// Canonical normal form of an element given in generator coordinates;
  /// two vectors represent the same element iff their reductions agree.
  std::vector<Int> reduce(const std::vector<Int>& x) const;
  bool is_zero_element(const std::vector<Int>& x) const;
  bool elements_equal(const std::vector<Int>& x, const std::vector<Int>& y) const;

  /// All elements, in generator coordinates; only valid for finite groups.
  std::vector<std::vector<Int>> elements() const;

  bool same_presentation(const FgAbGroup& other) const {
    return presentation_ == other.presentation_;
  }

private:
  IntMatrix presentation_;
  std::size_t free_rank_ = 0;
  std::vector<Int> factors_;
  std::vector<Int> moduli_;
  IntMatrix to_canonical_, from_canonical_;
};

FgAbGroup cokernel(const IntMatrix& presentation);
bool canonical_forms_equal(const FgAbGroup& a, const FgAbGroup& b);
std::string group_to_string(const FgAbGroup& g);

/// Homomorphism carried by a lift matrix on generators: column j is the image
/// of source generator j in target generator coordinates.
struct GroupHom {
  FgAbGroup source;
  FgAbGroup target;
  IntMatrix lift;
};

GroupHom identity_hom(const FgAbGroup& g);
GroupHom zero_hom(const FgAbGroup& source, const FgAbGroup& target);
bool is_well_defined(const GroupHom& f);
std::vector<Int> apply(const GroupHom& f, const std::vector<Int>& x);
GroupHom compose(const GroupHom& g, const GroupHom& f);
bool homs_equal(const GroupHom& f, const GroupHom& g);
bool is_surjective(const GroupHom& f);
bool is_isomorphism(const GroupHom& f);
std::optional<GroupHom> hom_inverse(const GroupHom& f);

/// Distinguished positive classes on a group.
struct Cone {
  FgAbGroup group;
  std::vector<std::vector<Int>> generators;
};

enum class TriState { yes, no, unknown };

struct ConeOptions {
  Int yes_budget = 64;          // coefficient budget for the heuristic search
  std::size_t node_cap = 200000; // enumeration node cap before giving up
  Int finite_order_cap = 1 << 17;
};

struct MembershipResult {
  TriState state = TriState::unknown;
  std::vector<Int> coefficients; // witness over cone generators when yes
};

/// Decide whether elem is a non-negative integer combination of the cone
/// generators.  yes and no are certified exactly; unknown is only possible
/// when the free quotient has rank >= 2 and no certificate route applies.
MembershipResult cone_member(const Cone& cone, const std::vector<Int>& elem,
                             const ConeOptions& opts = {});

/// Whether the cone's monoid is the whole group (the O-infinity regime,
/// where order carries no information).
TriState cone_is_full(const Cone& cone, const ConeOptions& opts = {});

/// Whether f maps the source cone into the target cone.
TriState cone_maps_into(const GroupHom& f, const Cone& src, const Cone& tgt,
                        const ConeOptions& opts = {});

/// Commuting-square constraint on a candidate hom h: post o h o pre == fixed.
struct SquareConstraint {
  GroupHom pre;   // A -> source(h)
  GroupHom post;  // target(h) -> B
  GroupHom fixed; // A -> B
};

struct HomEnumeration {
  std::vector<GroupHom> homs;
  bool complete = true;
};

struct EnumOptions {
  std::size_t max_candidates = 2000000;
};

/// All well-defined homs satisfying the constraints, enumerated exactly up to
/// hom equality.  Free directions of the solution space are swept over
/// [-bound, bound] and flagged incomplete; torsion directions are exhausted.
HomEnumeration hom_candidates(const FgAbGroup& source, const FgAbGroup& target,
                              const std::vector<SquareConstraint>& constraints,
                              const Int& bound, const EnumOptions& opts = {});

/// All isomorphisms satisfying the constraints.  Complete whenever the
/// constrained solution space has no free direction or the groups have free
/// rank <= 1 (the free block of an iso is then forced into {+1,-1}).
HomEnumeration iso_candidates(const FgAbGroup& source, const FgAbGroup& target,
                              const std::vector<SquareConstraint>& constraints,
                              const Int& bound, const EnumOptions& opts = {});

} // namespace fkt
