#pragma once

// Lattices, skew forms, quivers, symplectic seeds and compatibility maps.
//
// Coordinate conventions used throughout the project:
//  * Dimension vectors γ live in N_Q = Z^{Q_0} (standard basis s_i); seed
//    vectors e_i live in N = Z^rank.
//  * Covectors (stability parameters θ, points of M_R) are stored in the
//    dual basis, so the pairing <θ, γ> is the coordinate dot product.
//  * ι_γ ω = ω(γ,-) has dual-basis coordinates γ^T Ω where Ω is the skew
//    matrix of the form. For ω = det on Z^2 this is the 90° rotation
//    (a,b) -> (-b,a).

#include <optional>
#include <string>
#include <vector>

#include "scatterdt/base.hpp"

namespace scatterdt {

struct DimensionVector {
  IVec coords;

  DimensionVector() = default;
  explicit DimensionVector(IVec c) : coords(std::move(c)) {}

  size_t size() const { return coords.size(); }
  bool in_positive_cone() const;  // membership in N_Q^+: coords >= 0, not all 0
  Int divisibility() const;       // |γ| = gcd of coordinates (>= 1 for nonzero γ)
  bool operator==(const DimensionVector&) const = default;
};

struct Covector {
  QVec coords;

  Covector() = default;
  explicit Covector(QVec c) : coords(std::move(c)) {}
  explicit Covector(const IVec& c) : coords(to_qvec(c)) {}

  size_t size() const { return coords.size(); }
  Rat pair(const DimensionVector& g) const { return dotq(coords, g.coords); }
  bool is_zero() const;
  bool operator==(const Covector&) const = default;
};

struct Quiver {
  int vertex_count = 0;
  // arrow_counts[i][j] = number of arrows i -> j, entries >= 0.
  std::vector<IVec> arrow_counts;
  // Hypothesis flag: the attractor invariants are 1 on the simples of I and 0
  // elsewhere off ker ω_Q. Never computed here, always asserted by the input.
  bool trivial_attractor = false;
  // Free-text provenance for the flag on shipped presets.
  std::string attractor_note;

  void validate() const;  // shape and non-negativity of arrow_counts
  // ω_Q(s_i, s_j) = a_ij - a_ji.
  Int skew_entry(int i, int j) const { return arrow_counts[i][j] - arrow_counts[j][i]; }
  // I = { i : ι_{s_i} ω_Q != 0 }.
  std::vector<int> index_set() const;
};

// ω_Q(γ, γ') = Σ_{i,j} (a_ij - a_ji) γ_i γ'_j.
Int skew_form(const Quiver& q, const DimensionVector& g, const DimensionVector& h);

// Attractor point ι_γ ω_Q = ω_Q(γ,-); integer covector, pairs to 0 with γ.
Covector attractor_point(const Quiver& q, const DimensionVector& g);
IVec attractor_point_int(const Quiver& q, const DimensionVector& g);

bool in_kernel(const Quiver& q, const DimensionVector& g);

// Order-relative γ-generality: no γ' in N_Q^+ of total degree <= bound,
// non-collinear with γ, has θ(γ') = 0. Requires θ(γ) = 0.
bool is_gamma_general(const Quiver& q, const Covector& theta, const DimensionVector& g,
                      int bound);

// Quadratic refinement sign σ(γ) = (-1)^{Σγ_i + Σ_{i<j} ω_ij γ_i γ_j}, the
// unique refinement of ω_Q mod 2 with σ(s_i) = -1. It grades the multi-cover
// sum relating Ω̄ to Ω: classes with σ = -1 follow the (-1)^{j-1}/j² pattern,
// classes with σ = +1 the unsigned 1/j² pattern. (The two specializations of
// the refined invariants differ by (-1)^{dim}, and even covers see the
// opposite one; K(2)'s imaginary root is the smallest case where it matters.)
int cover_sign(const Quiver& q, const DimensionVector& gamma0);

struct SymplecticSeed {
  int rank = 0;                 // rank of N
  std::vector<IVec> e_vectors;  // e_i indexed by I = {0..|I|-1}
  std::vector<IVec> omega;      // rank x rank integer skew matrix
  std::vector<IVec> fan_rays;   // primitive rays of a complete 2D fan, CCW

  int index_count() const { return static_cast<int>(e_vectors.size()); }
  // v_i = ι_{e_i} ω in dual coordinates.
  IVec v(int i) const;
  IVec iota_omega(const IVec& n) const;  // n^T Ω for any n in N
  // ν^{-1}(m): the n ∈ N with ι_n ω = m; errors when m ∉ ν(N). For rank-2
  // seeds the primitivity assumption |v_i| = 1 forces ω unimodular, so the
  // preimage of an integer vector is integral.
  IVec nu_inverse(const IVec& m) const;
};

struct ValidationReport {
  std::vector<std::string> issues;
  // Set by validate_compatibility when ψ⊗Q is surjective.
  std::optional<Int> cokernel_order;

  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

ValidationReport validate_seed(const SymplecticSeed& s);

struct CompatibilityMap {
  // matrix rows index N's basis, columns index N_Q's basis; ψ(γ) = matrix·γ.
  std::vector<IVec> matrix;

  int rows() const { return static_cast<int>(matrix.size()); }
  int cols() const { return matrix.empty() ? 0 : static_cast<int>(matrix.front().size()); }
  IVec apply(const IVec& gamma) const;          // ψ(γ) in N
  QVec dual_apply(const QVec& x) const;          // ψ∨(x) = x ∘ ψ in M_Q
  // Solve ψ∨(x) = θ when θ lies in ψ∨(M_R); empty optional otherwise.
  std::optional<QVec> dual_preimage(const QVec& theta) const;
};

ValidationReport validate_compatibility(const Quiver& q, const SymplecticSeed& s,
                                        const CompatibilityMap& psi);

// |coker| of an integer matrix with full row rank (product of elementary
// divisors); nullopt when the rational rank is deficient.
std::optional<Int> cokernel_order(const std::vector<IVec>& matrix);

// Rank over Q of an integer matrix.
int rational_rank(std::vector<IVec> matrix);

// Exact angular order on nonzero 2-vectors, angle measured from (1,0) in
// [0, 2π). Returns -1, 0, +1.
int angle_compare(const IVec& a, const IVec& b);

}  // namespace scatterdt
