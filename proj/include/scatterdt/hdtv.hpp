#pragma once

// Seed-side scattering: initial diagram, the f_in/f_out split, curve-class
// bookkeeping on the fan, and the aggregate punctured-GW wall coefficient.

#include <memory>
#include <mutex>
#include <utility>

#include "scatterdt/engine.hpp"

namespace scatterdt {

// For each i ∈ I one wall (R_{>=0} v_i, 1 + t_i z^{v_i}). In rank 2 the
// quotient fan Σ_i in M_R/R·v_i ≅ R has {0} as its unique codimension-one
// cone, and the corresponding cone of Σ containing v_i is the ray through
// v_i, so each blowup locus contributes exactly this one initial wall.
// Walls with coincident support but distinct i stay separate records.
ScatteringDiagram initial_hdtv_diagram(const SymplecticSeed& s, int order);

// f_in = product over initial walls through x, f_out over added walls;
// f_in · f_out = chamber_function(x).
std::pair<TruncatedSeries, TruncatedSeries> split_in_out(const ScatteringDiagram& completed,
                                                         const QVec& x);

struct CurveClassRecord {
  // β̄·D' per fan ray, parallel to seed.fan_rays.
  std::vector<Int> intersection_numbers;
  // The a_i multiplying [E_i], indexed by I.
  IVec exceptional_multiplicities;
};

// Curve class β_A^x data: m_A = -Σ a_i v_i expressed in the basis of the
// minimal fan cone σ_x, intersection numbers per the toric formula
// β̄·D' = Σ_{i ∈ I_{D'}} a_i + Σ_{j ∈ J_{D'}} b_j. σ_x must be unimodular.
CurveClassRecord curve_class(const SymplecticSeed& s, const IVec& A, const QVec& x);

class HdtvEngine {
 public:
  explicit HdtvEngine(SymplecticSeed s);

  const SymplecticSeed& seed() const { return seed_; }
  std::shared_ptr<const ScatteringDiagram> completed(int order);

  // Coefficient of z^{Σ a_i v_i} Π t_i^{a_i} in log f_out at x: the aggregate
  // Σ_τ k_τ N_{τ,β_A^x}, equal to |γ|·Ω̄_γ for γ = A under the correspondence.
  // Requires A not a multiple of a coordinate vector (γ ∉ Z_{>=1} s_i).
  Rat gw_combination(const IVec& A, const QVec& x, int order);

 private:
  SymplecticSeed seed_;
  std::mutex mutex_;
  std::shared_ptr<const ScatteringDiagram> cache_;
};

Rat gw_combination(const SymplecticSeed& s, const IVec& A, const QVec& x, int order);

}  // namespace scatterdt
