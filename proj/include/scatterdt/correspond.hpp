#pragma once

// Pullback of quiver diagrams along ψ, the comparison check, the main-theorem
// verification harness, and the worked presets.

#include <string>
#include <vector>

#include "scatterdt/dt.hpp"
#include "scatterdt/hdtv.hpp"

namespace scatterdt {

struct Preset {
  std::string name;
  Quiver quiver;
  SymplecticSeed seed;
  CompatibilityMap psi;
};

Preset make_kronecker(int m);  // m ∈ {1,2,3} ship with curated fans
Preset make_local_p2();
Preset make_cubic();
// "kronecker1".."kronecker3", "local_p2", "cubic".
Preset preset_by_name(const std::string& name);
std::vector<std::string> preset_names();

// (ψ∨)⋆ of a quiver diagram without central walls: each wall
// (𝔡, 1+Σ c_k z^{kγ}) maps to ((ψ∨)^{-1}(𝔡), 1+Σ c_k z^{k·ι_{ψγ}ω} Π t_i^{kγ_i}).
ScatteringDiagram pullback(const ScatteringDiagram& qdiag, const CompatibilityMap& psi,
                           const SymplecticSeed& seed);

struct VerifyCheck {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Completed-and-stripped quiver diagram pulled back along ψ is equivalent to
// the completed HDTV diagram at the given order. Rank-2 quiver side.
VerifyReport verify_comparison(const Preset& p, int order);

// For each γ and one certified sample point per chamber of γ^⊥ ∩ ψ∨(M_R):
// the quiver-route |γ|·Ω̄ equals gw_combination. For rank-2 quivers both
// independent pipelines run; for higher rank the quiver route is the
// pullback route.
VerifyReport verify_main(const Preset& p, const std::vector<DimensionVector>& gammas, int order);

// All γ ∈ N^⊕ of total degree <= bound with γ ∉ ker ω_Q and γ ∉ Z_{>=1}s_i.
std::vector<DimensionVector> main_gamma_candidates(const Preset& p, int degree_bound);

struct GammaOfChern {
  IVec gamma;       // (-χ, r+d-χ, r+2d-χ)
  bool effective;   // lies in N_Q^⊕
};
GammaOfChern gamma_of_chern(Int r, Int d, Int chi);

// Sheaf-counting route on the local projective plane: requires r > 0 and
// slope μ = d/r with -1 < μ <= 0; evaluates at θ in the anti-attractor
// chamber -R_{>0}·ι_{γ(v)}ω_Q.
DTRecord local_p2_sheaf_dt(Int r, Int d, Int chi, int order);

}  // namespace scatterdt
