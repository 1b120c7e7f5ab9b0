#pragma once

// Path-ordered products, consistency checking, order-by-order completion,
// equivalence. Exact in ambient rank 2; ambient rank 3 is available behind
// an experimental joint-reduction flag and is excluded from acceptance.

#include <optional>
#include <string>
#include <vector>

#include "scatterdt/diagram.hpp"

namespace scatterdt {

struct EngineOptions {
  bool experimental_rank3 = false;
  int max_passes_per_degree = 64;  // guard for the experimental joint iteration
};

// One transverse crossing of a path with the support arrangement.
struct PathCrossing {
  QVec point;     // crossing point, not in Sing
  QVec velocity;  // path velocity there; pairing with the wall normal must be nonzero
};

// A composite wall-crossing automorphism, represented by the multipliers of
// the generator monomials: z^{g_j} -> z^{g_j} · multiplier[j], mod m^{order+1}.
struct Automorphism {
  std::vector<IVec> generators;  // s_j (quiver) or the dual basis f_j (seed)
  std::vector<TruncatedSeries> multipliers;

  bool is_identity() const;
};

struct DefectTerm {
  Exponent exponent;
  int generator = 0;
  Rat coefficient;
};

struct ConsistencyReport {
  bool consistent = true;
  int defect_degree = 0;           // lowest nonzero defect degree when inconsistent
  IVec defect_direction;           // primitive direction of one lowest-degree defect term
  std::vector<DefectTerm> terms;   // all lowest-degree defect terms
  std::optional<IVec> joint;       // rank-3: joint ray the defect was found at
  std::string to_string() const;
};

// Quiver-side predicates.
bool is_incoming(const ScatteringDiagram& d, const Wall& w);
bool is_central(const Wall& w, const Quiver& q);
ScatteringDiagram remove_central_walls(const ScatteringDiagram& d);

// Product of f_d over all walls whose support contains x; x must avoid Sing.
TruncatedSeries chamber_function(const ScatteringDiagram& d, const QVec& x);
// Throws SingularPointError naming offending walls when x ∈ Sing(D).
void require_nonsingular(const ScatteringDiagram& d, const QVec& x);

// Composite automorphism along an explicit crossing list (ordered by path
// parameter; the product is read left-to-right, so the last crossing acts
// first as a function).
Automorphism path_ordered_product(const ScatteringDiagram& d,
                                  const std::vector<PathCrossing>& path);

// The crossing list of the full counterclockwise origin loop (rank 2).
std::vector<PathCrossing> origin_loop(const ScatteringDiagram& d);

ConsistencyReport check_consistency(const ScatteringDiagram& d, const EngineOptions& opts = {});

// Order-by-order completion: adds non-incoming walls until every loop is the
// identity mod m^{order+1}. Rank 2 required unless opts.experimental_rank3.
ScatteringDiagram complete(const ScatteringDiagram& initial, int order,
                           const EngineOptions& opts = {});

// Merge walls of equal support and direction, drop trivial functions, sort.
ScatteringDiagram canonical_form(const ScatteringDiagram& d);

struct EquivalenceResult {
  bool equal = true;
  QVec witness;  // first disagreeing certified sample point when not equal
};
EquivalenceResult equivalent(const ScatteringDiagram& a, const ScatteringDiagram& b);

// Diagram truncated to a lower order (wall functions truncated, trivial walls dropped).
ScatteringDiagram truncate_diagram(const ScatteringDiagram& d, int order);

}  // namespace scatterdt
