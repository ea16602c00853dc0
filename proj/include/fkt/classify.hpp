#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fkt/ktheory.hpp"

namespace fkt {

struct SearchOptions {
  Int bound = 0;                  // 0: max invariant factor across inputs, min 4
  std::size_t node_cap = 2000000; // candidate assignments before giving up
  std::size_t enum_cap = 200000;  // per-unit enumeration cap
  ConeOptions cone;
};

struct Verdict {
  enum class Status { isomorphic, not_isomorphic, unknown };
  Status status = Status::unknown;
  bool search_complete = false;
  std::map<std::string, GroupHom> witness; // per unit label, when isomorphic
  std::string obstruction;                 // when not_isomorphic
};

/// Decide whether two flattened K-diagrams are isomorphic as filtered,
/// ordered K-theories: per-unit isomorphisms commuting with every arrow,
/// order-isomorphisms on every cone-carrying unit.  not_isomorphic is only
/// reported with a complete argument; bounded-search exhaustion yields
/// unknown.
Verdict fk_isomorphic(const KDiagram& d1, const KDiagram& d2,
                      const SearchOptions& opts = {});

Verdict fk_isomorphic(const FkDiagram& d1, const FkDiagram& d2,
                      const SearchOptions& opts = {});

/// Case II comparison: tries all 6 relabelings of the three incomparable
/// points.
Verdict case2_isomorphic(const Case2Diagram& d1, const Case2Diagram& d2,
                         const SearchOptions& opts = {});

/// Independent re-verification of a returned witness family.
bool verify_witness(const KDiagram& d1, const KDiagram& d2,
                    const std::map<std::string, GroupHom>& witness,
                    const ConeOptions& cone = {});

/// Closed-form stable-isomorphism criterion for the Case I family
/// [[0,0,0],[z,p+1,0],[y,x,p+1]].
bool criterion_case1(long long p, std::array<long long, 3> xyz,
                     std::array<long long, 3> xyz2);

/// Closed-form criterion for the Case II family: the counts of p-divisible
/// entries among {x,y,z} must agree.
bool criterion_case2(long long p, std::array<long long, 3> xyz,
                     std::array<long long, 3> xyz2);

Graph case1_graph(long long p, long long x, long long y, long long z);
Graph case2_graph(long long p, long long x, long long y, long long z);
Graph intro_graph(long long n);

std::optional<std::array<long long, 4>> case1_template_params(const Graph& g); // p,x,y,z
std::optional<std::array<long long, 4>> case2_template_params(const Graph& g);

struct ClassifyReport {
  Verdict verdict;
  bool applicable = false; // a classification theorem licenses the positive direction
  std::string path;        // deciding route
  std::string notes;
  int exit_code = 3;       // 0 iso, 1 not iso, 2 unknown, 3 not applicable
};

/// Full decision procedure for a pair of graphs: applicability checks,
/// pre-invariant lattice comparison, generic search, and closed-form
/// cross-checks on template instances (disagreement is a hard error).
ClassifyReport classify_pair(const Graph& e1, const Graph& e2,
                             const SearchOptions& opts = {});

enum class SweepTemplate { intro, case_i, case_ii };

struct SweepResult {
  SweepTemplate templ;
  long long p;
  std::vector<std::array<long long, 3>> tuples; // (x,y,z); intro uses (1,1,n)
  std::vector<std::vector<std::size_t>> classes; // indices into tuples
  std::string criterion; // which closed form bucketed the tuples
  bool verified = false; // generic search cross-checked every pair
};

/// Partition a template family into stable-isomorphism classes using the
/// closed-form criterion; optionally cross-check every pair with the generic
/// search (hard error on any disagreement or unknown).
SweepResult sweep(SweepTemplate templ, long long p, long long lo, long long hi,
                  bool verify = false, const SearchOptions& opts = {});

} // namespace fkt
