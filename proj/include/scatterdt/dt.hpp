#pragma once

// The DT dictionary: initial cluster diagrams, wall functions <-> DT
// invariants, rational <-> integer conversion, chamber queries.

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "scatterdt/engine.hpp"

namespace scatterdt {

struct DTMultiple {
  Int k = 0;        // the multiple k·γ_0
  Rat omega_bar;    // rational invariant
  Int omega = 0;    // integer invariant
};

struct DTRecord {
  DimensionVector gamma;
  Covector theta;
  Rat omega_bar;
  Int omega = 0;
  std::string chamber_note;  // attractor | anti-attractor | generic | kernel-class
  std::vector<DTMultiple> multiples;  // invariants of k·γ_0 up to the diagram order
};

// Walls {(s_i^⊥, 1+z^{s_i})} for i ∈ I; requires the trivial-attractor flag.
ScatteringDiagram initial_cluster_diagram(const Quiver& q, int order);

// Ω̄_{kγ0} = Σ_{k = k'·j} sign^{j-1}·(-1)^{j-1}/j² · Ω_{k'γ0}; γ0 must be
// primitive. The default sign -1 is the (-1)^{j-1}/j² multi-cover pattern;
// passing cover_sign(q, γ0) grades the sum by the quadratic refinement
// (unsigned 1/j² on σ = +1 classes).
std::map<Int, Rat> rational_from_integer(const std::map<Int, Int>& omega,
                                         const DimensionVector& gamma0, int sign = -1);
// Exact triangular inverse; values are integral whenever the input comes from
// integer invariants.
std::map<Int, Rat> integer_from_rational(const std::map<Int, Rat>& omega_bar,
                                         const DimensionVector& gamma0, int sign = -1);
// Same, insisting on integrality.
std::map<Int, Int> integer_from_rational_strict(const std::map<Int, Rat>& omega_bar,
                                                const DimensionVector& gamma0, int sign = -1);

// f = exp(Σ_k k·Ω̄_{kγ0} z^{kγ0}).
TruncatedSeries assemble_wall_function(const std::map<Int, Rat>& omega_bar,
                                       const DimensionVector& gamma0, int vertex_count,
                                       int order);
// Ω̄_{kγ0} = [z^{kγ0}] log f / k; errors unless f is supported on powers of z^{γ0}.
std::map<Int, Rat> extract_dt(const TruncatedSeries& f, const DimensionVector& gamma0);

// Read-mostly cache of completed cluster diagrams per quiver.
class DtEngine {
 public:
  explicit DtEngine(Quiver q) : quiver_(std::move(q)) { quiver_.validate(); }

  const Quiver& quiver() const { return quiver_; }
  // Completed cluster diagram at >= order (cached snapshots, highest order kept).
  std::shared_ptr<const ScatteringDiagram> completed(int order);

  DTRecord dt_invariants(const DimensionVector& gamma, const Covector& theta, int order);

  struct AuditEntry {
    DimensionVector gamma;
    std::string chamber;
    Int omega = 0;
    bool ok = true;
  };
  struct AuditReport {
    int checked = 0;
    std::vector<AuditEntry> violations;
    bool ok() const { return violations.empty(); }
  };
  // Ω ∈ Z_{>=0} for every γ ∉ ker ω_Q up to the degree bound, at sampled
  // general θ in both chambers of γ^⊥ (theta_samples per chamber).
  AuditReport positivity_audit(int degree_bound, int theta_samples = 1,
                               unsigned long long seed = 1);

 private:
  Quiver quiver_;
  std::mutex mutex_;
  std::shared_ptr<const ScatteringDiagram> cache_;
};

DTRecord dt_invariants(const Quiver& q, const DimensionVector& gamma, const Covector& theta,
                       int order);

std::string chamber_note(const Quiver& q, const DimensionVector& gamma, const Covector& theta);

}  // namespace scatterdt
