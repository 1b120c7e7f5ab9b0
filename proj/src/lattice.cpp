#include "scatterdt/lattice.hpp"

#include <algorithm>

namespace scatterdt {

bool DimensionVector::in_positive_cone() const {
  bool nonzero = false;
  for (Int x : coords) {
    if (x < 0) return false;
    if (x > 0) nonzero = true;
  }
  return nonzero;
}

Int DimensionVector::divisibility() const {
  Int g = gcd_vec(coords);
  if (g == 0) throw DomainError("divisibility |γ| is undefined for γ = 0");
  return g;
}

bool Covector::is_zero() const {
  for (const Rat& r : coords)
    if (r != 0) return false;
  return true;
}

void Quiver::validate() const {
  if (vertex_count <= 0) throw DomainError("quiver needs a positive vertex count");
  if (static_cast<int>(arrow_counts.size()) != vertex_count)
    throw DimensionError("arrow_counts must be vertex_count x vertex_count");
  for (const IVec& row : arrow_counts) {
    if (static_cast<int>(row.size()) != vertex_count)
      throw DimensionError("arrow_counts must be vertex_count x vertex_count");
    for (Int a : row)
      if (a < 0) throw DomainError("arrow counts must be >= 0");
  }
}

std::vector<int> Quiver::index_set() const {
  std::vector<int> idx;
  for (int i = 0; i < vertex_count; ++i) {
    for (int j = 0; j < vertex_count; ++j) {
      if (skew_entry(i, j) != 0) {
        idx.push_back(i);
        break;
      }
    }
  }
  return idx;
}

Int skew_form(const Quiver& q, const DimensionVector& g, const DimensionVector& h) {
  if (static_cast<int>(g.size()) != q.vertex_count ||
      static_cast<int>(h.size()) != q.vertex_count)
    throw DimensionError("skew_form: dimension vector length must equal vertex count");
  Int s = 0;
  for (int i = 0; i < q.vertex_count; ++i) {
    if (g.coords[i] == 0) continue;
    for (int j = 0; j < q.vertex_count; ++j)
      s += q.skew_entry(i, j) * g.coords[i] * h.coords[j];
  }
  return s;
}

IVec attractor_point_int(const Quiver& q, const DimensionVector& g) {
  if (static_cast<int>(g.size()) != q.vertex_count)
    throw DimensionError("attractor_point: dimension vector length must equal vertex count");
  if (is_zero(g.coords)) throw DomainError("attractor point is undefined for γ = 0");
  IVec c(q.vertex_count, 0);
  for (int j = 0; j < q.vertex_count; ++j)
    for (int i = 0; i < q.vertex_count; ++i) c[j] += q.skew_entry(i, j) * g.coords[i];
  return c;
}

Covector attractor_point(const Quiver& q, const DimensionVector& g) {
  return Covector(attractor_point_int(q, g));
}

bool in_kernel(const Quiver& q, const DimensionVector& g) {
  return is_zero(attractor_point_int(q, g));
}

namespace {

bool collinear(const IVec& a, const IVec& b) {
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j)
      if (a[i] * b[j] != a[j] * b[i]) return false;
  return true;
}

// Enumerate N^+ vectors of total degree <= bound, calling f on each.
template <typename F>
void for_each_positive(int len, int bound, F&& f) {
  IVec cur(len, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == len) {
      if (!is_zero(cur)) f(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[pos] = v;
      self(self, pos + 1, left - v);
    }
    cur[pos] = 0;
  };
  rec(rec, 0, bound);
}

}  // namespace

bool is_gamma_general(const Quiver& q, const Covector& theta, const DimensionVector& g,
                      int bound) {
  if (static_cast<int>(theta.size()) != q.vertex_count)
    throw DimensionError("is_gamma_general: covector length must equal vertex count");
  if (theta.pair(g) != 0)
    throw DomainError("is_gamma_general requires θ(γ) = 0");
  bool general = true;
  for_each_positive(q.vertex_count, bound, [&](const IVec& cand) {
    if (!general) return;
    if (collinear(cand, g.coords)) return;
    if (dotq(theta.coords, cand) == 0) general = false;
  });
  return general;
}

int cover_sign(const Quiver& q, const DimensionVector& gamma0) {
  if (static_cast<int>(gamma0.size()) != q.vertex_count)
    throw DimensionError("cover_sign: dimension vector length must equal vertex count");
  Int p = 0;
  for (int i = 0; i < q.vertex_count; ++i) {
    p += gamma0.coords[i];
    for (int j = i + 1; j < q.vertex_count; ++j)
      p += q.skew_entry(i, j) * gamma0.coords[i] * gamma0.coords[j];
  }
  return (p % 2 + 2) % 2 == 0 ? 1 : -1;
}

IVec SymplecticSeed::iota_omega(const IVec& n) const {
  if (static_cast<int>(n.size()) != rank)
    throw DimensionError("seed vector length must equal seed rank");
  IVec c(rank, 0);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < rank; ++i) c[j] += n[i] * omega[i][j];
  return c;
}

IVec SymplecticSeed::v(int i) const { return iota_omega(e_vectors.at(i)); }

IVec SymplecticSeed::nu_inverse(const IVec& m) const {
  if (static_cast<int>(m.size()) != rank)
    throw DimensionError("covector length must equal seed rank");
  // Solve n^T Ω = m exactly over Q, then require integrality.
  std::vector<QVec> aug(rank, QVec(rank + 1, Rat(0)));
  for (int j = 0; j < rank; ++j) {
    for (int i = 0; i < rank; ++i) aug[j][i] = to_rat(omega[i][j]);
    aug[j][rank] = to_rat(m[j]);
  }
  int row = 0;
  std::vector<int> pivot(rank, -1);
  for (int ccol = 0; ccol < rank && row < rank; ++ccol) {
    int p = -1;
    for (int r = row; r < rank; ++r)
      if (aug[r][ccol] != 0) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(aug[row], aug[p]);
    for (int r = 0; r < rank; ++r) {
      if (r == row || aug[r][ccol] == 0) continue;
      Rat f = aug[r][ccol] / aug[row][ccol];
      for (int cc = 0; cc <= rank; ++cc) aug[r][cc] -= f * aug[row][cc];
    }
    pivot[ccol] = row;
    ++row;
  }
  IVec n(rank, 0);
  for (int i = 0; i < rank; ++i) {
    if (pivot[i] < 0) throw DomainError("degenerate ω: ν is not invertible");
    Rat x = aug[pivot[i]][rank] / aug[pivot[i]][i];
    if (x.get_den() != 1)
      throw DomainError("ν^{-1}(" + ivec_str(m) + ") is not integral");
    n[i] = static_cast<Int>(x.get_num().get_si());
  }
  if (iota_omega(n) != m) throw InternalError("nu_inverse solve failed");
  return n;
}

std::string ValidationReport::to_string() const {
  if (ok()) return "valid";
  std::string s;
  for (const auto& i : issues) {
    if (!s.empty()) s += "; ";
    s += i;
  }
  return s;
}

namespace {

// Fraction-free Gaussian elimination rank.
int rank_of(std::vector<QVec> m) {
  int rows = static_cast<int>(m.size());
  if (rows == 0) return 0;
  int cols = static_cast<int>(m.front().size());
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (m[r][c] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int r = rank + 1; r < rows; ++r) {
      if (m[r][c] == 0) continue;
      Rat f = m[r][c] / m[rank][c];
      for (int cc = c; cc < cols; ++cc) m[r][cc] -= f * m[rank][cc];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

int rational_rank(std::vector<IVec> matrix) {
  std::vector<QVec> m;
  m.reserve(matrix.size());
  for (const IVec& row : matrix) m.push_back(to_qvec(row));
  return rank_of(std::move(m));
}

std::optional<Int> cokernel_order(const std::vector<IVec>& matrix) {
  // Smith-style reduction with gmp integers; small matrices only.
  int rows = static_cast<int>(matrix.size());
  if (rows == 0) return 1;
  int cols = static_cast<int>(matrix.front().size());
  std::vector<std::vector<mpz_class>> m(rows, std::vector<mpz_class>(cols));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m[r][c] = static_cast<long>(matrix[r][c]);

  mpz_class order = 1;
  int top = 0;
  while (top < rows) {
    // Find a nonzero entry in the submatrix.
    int pr = -1, pc = -1;
    for (int r = top; r < rows && pr < 0; ++r)
      for (int c = top; c < cols; ++c)
        if (m[r][c] != 0) {
          pr = r;
          pc = c;
          break;
        }
    if (pr < 0) return std::nullopt;  // zero submatrix but rows remain: rank deficient
    std::swap(m[top], m[pr]);
    for (int r = 0; r < rows; ++r) std::swap(m[r][top], m[r][pc]);
    // Clear row and column by gcd steps.
    bool again = true;
    while (again) {
      again = false;
      for (int r = top + 1; r < rows; ++r) {
        while (m[r][top] != 0) {
          mpz_class qz = 0;
          if (m[top][top] != 0) qz = m[r][top] / m[top][top];
          for (int c = top; c < cols; ++c) m[r][c] -= qz * m[top][c];
          if (m[r][top] != 0) {
            std::swap(m[r], m[top]);
            again = true;
          }
        }
      }
      for (int c = top + 1; c < cols; ++c) {
        while (m[top][c] != 0) {
          mpz_class qz = 0;
          if (m[top][top] != 0) qz = m[top][c] / m[top][top];
          for (int r = top; r < rows; ++r) m[r][c] -= qz * m[r][top];
          if (m[top][c] != 0) {
            for (int r = top; r < rows; ++r) std::swap(m[r][c], m[r][top]);
            again = true;
          }
        }
      }
    }
    order *= abs(m[top][top]);
    ++top;
  }
  if (!order.fits_slong_p()) throw InternalError("cokernel order overflow");
  return static_cast<Int>(order.get_si());
}

int angle_compare(const IVec& a, const IVec& b) {
  auto half = [](const IVec& v) {
    // 0 for angle in [0, π), 1 for [π, 2π).
    if (v[1] > 0 || (v[1] == 0 && v[0] > 0)) return 0;
    return 1;
  };
  int ha = half(a), hb = half(b);
  if (ha != hb) return ha < hb ? -1 : 1;
  Int c = cross2(a, b);
  if (c > 0) return -1;
  if (c < 0) return 1;
  return 0;
}

ValidationReport validate_seed(const SymplecticSeed& s) {
  ValidationReport rep;
  if (s.rank <= 0) {
    rep.issues.push_back("seed rank must be positive");
    return rep;
  }
  if (static_cast<int>(s.omega.size()) != s.rank) {
    rep.issues.push_back("omega must be rank x rank");
    return rep;
  }
  for (const IVec& row : s.omega)
    if (static_cast<int>(row.size()) != s.rank) {
      rep.issues.push_back("omega must be rank x rank");
      return rep;
    }
  for (const IVec& e : s.e_vectors)
    if (static_cast<int>(e.size()) != s.rank) {
      rep.issues.push_back("e_vectors must have length rank");
      return rep;
    }

  for (int i = 0; i < s.rank; ++i)
    for (int j = 0; j < s.rank; ++j)
      if (s.omega[i][j] != -s.omega[j][i]) {
        rep.issues.push_back("omega is not skew-symmetric");
        return rep;
      }

  // ker ω = 0 over Q.
  if (rational_rank(s.omega) < s.rank)
    rep.issues.push_back("degenerate skew form: ker ω ≠ 0");

  for (int i = 0; i < s.index_count(); ++i) {
    IVec vi = s.v(i);
    if (is_zero(vi))
      rep.issues.push_back("v_" + std::to_string(i + 1) + " = ι_{e_i}ω is zero");
    else if (gcd_vec(vi) != 1)
      rep.issues.push_back("v_" + std::to_string(i + 1) + " = ι_{e_i}ω is not primitive (|v_i|=1 required)");
  }

  // Fans are supported in rank 2 only.
  if (s.rank != 2) {
    rep.issues.push_back("fans in rank ≠ 2 are not supported; rank must be 2");
    return rep;
  }
  if (s.fan_rays.size() < 3) {
    rep.issues.push_back("fan needs at least 3 rays to be complete");
    return rep;
  }
  for (const IVec& r : s.fan_rays) {
    if (r.size() != 2 || is_zero(r)) {
      rep.issues.push_back("fan rays must be nonzero 2-vectors");
      return rep;
    }
    if (gcd_vec(r) != 1) rep.issues.push_back("fan ray " + ivec_str(r) + " is not primitive");
  }
  int k = static_cast<int>(s.fan_rays.size());
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (s.fan_rays[i] == s.fan_rays[j])
        rep.issues.push_back("fan rays are not pairwise distinct");
  // Counterclockwise with every consecutive gap < π, winding exactly once:
  // strictly increasing angle after rotating the minimum to the front.
  int minpos = 0;
  for (int i = 1; i < k; ++i)
    if (angle_compare(s.fan_rays[i], s.fan_rays[minpos]) < 0) minpos = i;
  bool sorted = true;
  for (int i = 0; i + 1 < k; ++i) {
    const IVec& a = s.fan_rays[(minpos + i) % k];
    const IVec& b = s.fan_rays[(minpos + i + 1) % k];
    if (angle_compare(a, b) >= 0) sorted = false;
  }
  if (!sorted) rep.issues.push_back("fan rays are not listed counterclockwise");
  bool gaps_ok = true;
  for (int i = 0; i < k; ++i)
    if (cross2(s.fan_rays[i], s.fan_rays[(i + 1) % k]) <= 0) gaps_ok = false;
  if (sorted && !gaps_ok)
    rep.issues.push_back("fan is not complete: an angular gap of at least π remains");

  // Every ray R_{>=0} v_i must be a fan ray.
  for (int i = 0; i < s.index_count(); ++i) {
    IVec vi = s.v(i);
    if (is_zero(vi)) continue;
    IVec p = primitive(vi);
    bool found = false;
    for (const IVec& r : s.fan_rays)
      if (r == p) found = true;
    if (!found)
      rep.issues.push_back("fan is missing the ray through v_" + std::to_string(i + 1) + " = " +
                           ivec_str(p));
  }
  return rep;
}

IVec CompatibilityMap::apply(const IVec& gamma) const {
  if (static_cast<int>(gamma.size()) != cols())
    throw DimensionError("ψ: dimension vector length must equal quiver vertex count");
  IVec out(rows(), 0);
  for (int r = 0; r < rows(); ++r) out[r] = dot(matrix[r], gamma);
  return out;
}

QVec CompatibilityMap::dual_apply(const QVec& x) const {
  if (static_cast<int>(x.size()) != rows())
    throw DimensionError("ψ∨: point length must equal seed rank");
  QVec out(cols(), Rat(0));
  for (int c = 0; c < cols(); ++c)
    for (int r = 0; r < rows(); ++r) out[c] += x[r] * to_rat(matrix[r][c]);
  return out;
}

std::optional<QVec> CompatibilityMap::dual_preimage(const QVec& theta) const {
  if (static_cast<int>(theta.size()) != cols())
    throw DimensionError("ψ∨ preimage: covector length must equal vertex count");
  // Solve x^T P = theta^T, i.e. P^T x = theta, by elimination on the
  // augmented (cols x rows) system.
  int n = rows(), m = cols();
  std::vector<QVec> aug(m, QVec(n + 1, Rat(0)));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = Rat(static_cast<long>(matrix[j][i]));
    aug[i][n] = theta[i];
  }
  int row = 0;
  std::vector<int> pivot_col(n, -1);
  for (int c = 0; c < n && row < m; ++c) {
    int p = -1;
    for (int r = row; r < m; ++r)
      if (aug[r][c] != 0) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(aug[row], aug[p]);
    for (int r = 0; r < m; ++r) {
      if (r == row || aug[r][c] == 0) continue;
      Rat f = aug[r][c] / aug[row][c];
      for (int cc = 0; cc <= n; ++cc) aug[r][cc] -= f * aug[row][cc];
    }
    pivot_col[c] = row;
    ++row;
  }
  QVec x(n, Rat(0));
  for (int c = 0; c < n; ++c)
    if (pivot_col[c] >= 0) x[c] = aug[pivot_col[c]][n] / aug[pivot_col[c]][c];
  // Verify (the system may be inconsistent when θ ∉ ψ∨(M_R)).
  QVec check = dual_apply(x);
  for (int i = 0; i < m; ++i)
    if (check[i] != theta[i]) return std::nullopt;
  return x;
}

ValidationReport validate_compatibility(const Quiver& q, const SymplecticSeed& s,
                                        const CompatibilityMap& psi) {
  ValidationReport rep;
  q.validate();
  if (psi.rows() != s.rank || psi.cols() != q.vertex_count) {
    rep.issues.push_back("ψ matrix must be rank x vertex_count");
    return rep;
  }
  std::vector<int> I = q.index_set();
  if (static_cast<int>(I.size()) != s.index_count()) {
    rep.issues.push_back("seed index set size differs from quiver index set I");
    return rep;
  }
  for (size_t k = 0; k < I.size(); ++k) {
    IVec unit(q.vertex_count, 0);
    unit[I[k]] = 1;
    if (psi.apply(unit) != s.e_vectors[k])
      rep.issues.push_back("ψ(s_" + std::to_string(I[k] + 1) + ") ≠ e_" + std::to_string(k + 1));
  }
  // ψ*ω = ω_Q on all basis pairs.
  std::vector<IVec> images(q.vertex_count);
  for (int i = 0; i < q.vertex_count; ++i) {
    IVec unit(q.vertex_count, 0);
    unit[i] = 1;
    images[i] = psi.apply(unit);
  }
  for (int i = 0; i < q.vertex_count; ++i)
    for (int j = 0; j < q.vertex_count; ++j) {
      Int lhs = dot(s.iota_omega(images[i]), images[j]);
      if (lhs != q.skew_entry(i, j)) {
        rep.issues.push_back("ψ⋆ω ≠ ω_Q");
        i = q.vertex_count;
        break;
      }
    }
  if (rational_rank(psi.matrix) < s.rank)
    rep.issues.push_back("ψ ⊗ Q is not surjective");
  else
    rep.cokernel_order = cokernel_order(psi.matrix);
  return rep;
}

}  // namespace scatterdt
