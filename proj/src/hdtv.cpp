#include "scatterdt/hdtv.hpp"

#include <algorithm>

namespace scatterdt {

ScatteringDiagram initial_hdtv_diagram(const SymplecticSeed& s, int order) {
  ValidationReport rep = validate_seed(s);
  if (!rep.ok()) throw DomainError("invalid seed: " + rep.to_string());
  ScatteringDiagram d{DiagramContext::for_seed(s), {}, order};
  SeriesContext sctx = d.ctx.series_ctx();
  for (int i = 0; i < s.index_count(); ++i) {
    IVec vi = s.v(i);
    IVec ti(s.index_count(), 0);
    ti[i] = 1;
    TruncatedSeries f = TruncatedSeries::one(sctx, order);
    f.add_term(Exponent{vi, ti}, Rat(1));
    d.walls.emplace_back(vi, vi, ti, Support::ray(vi), std::move(f), WallTag::initial);
  }
  return d;
}

std::pair<TruncatedSeries, TruncatedSeries> split_in_out(const ScatteringDiagram& completed,
                                                         const QVec& x) {
  if (completed.ctx.side != DiagramContext::Side::seed)
    throw DomainError("f_in/f_out split applies to seed-side diagrams");
  require_nonsingular(completed, x);
  SeriesContext sctx = completed.ctx.series_ctx();
  TruncatedSeries fin = TruncatedSeries::one(sctx, completed.order);
  TruncatedSeries fout = TruncatedSeries::one(sctx, completed.order);
  for (const Wall& w : completed.walls) {
    if (!support_contains(w.support, w, completed.ctx, x)) continue;
    if (w.tag == WallTag::initial)
      fin = mul(fin, w.function);
    else
      fout = mul(fout, w.function);
  }
  return {fin, fout};
}

CurveClassRecord curve_class(const SymplecticSeed& s, const IVec& A, const QVec& x) {
  ValidationReport rep = validate_seed(s);
  if (!rep.ok()) throw DomainError("invalid seed: " + rep.to_string());
  if (static_cast<int>(A.size()) != s.index_count())
    throw DimensionError("multiplicity vector A must be indexed by I");
  bool nonzero = false;
  for (Int a : A) {
    if (a < 0) throw DomainError("multiplicities a_i must be >= 0");
    if (a > 0) nonzero = true;
  }
  if (!nonzero) throw DomainError("A must be nonzero");
  if (x.size() != 2) throw DimensionError("x must be a point of M_R, rank 2");
  bool xzero = x[0] == 0 && x[1] == 0;
  if (xzero) throw DomainError("x must be nonzero");

  IVec mA(s.rank, 0);
  for (int i = 0; i < s.index_count(); ++i) mA = add(mA, scale(s.v(i), -A[i]));

  // Minimal fan cone σ_x containing x: a ray when x sits on one, otherwise
  // the 2D cone between the adjacent rays (the fan is complete and CCW).
  const auto& rays = s.fan_rays;
  int on_ray = -1;
  for (size_t k = 0; k < rays.size(); ++k)
    if (cross2q(x, rays[k]) == 0 && dotq(x, rays[k]) > 0) {
      on_ray = static_cast<int>(k);
      break;
    }
  std::vector<int> sigma;  // indices of σ_x's generating rays
  if (on_ray >= 0) {
    sigma = {on_ray};
  } else {
    int k2 = static_cast<int>(rays.size());
    for (int k = 0; k < k2; ++k) {
      const IVec& r1 = rays[k];
      const IVec& r2 = rays[(k + 1) % k2];
      if (cross2q(x, r1) < 0 && cross2q(x, r2) > 0) {  // r1 before x before r2 (CCW)
        sigma = {k, (k + 1) % k2};
        break;
      }
    }
    if (sigma.empty()) throw InternalError("complete fan has no cone containing x");
  }

  // m_A = Σ b_j m_j^{σ_x} in the basis of σ_x's primitive generators.
  std::vector<Int> b(sigma.size(), 0);
  if (sigma.size() == 1) {
    const IVec& r = rays[sigma[0]];
    if (cross2(mA, r) != 0)
      throw DomainError("m_A is not in the span of σ_x: x is inconsistent with A");
    int idx = r[0] != 0 ? 0 : 1;
    b[0] = mA[idx] / r[idx];
    if (scale(r, b[0]) != mA)
      throw DomainError("m_A is not an integral multiple of the σ_x generator");
  } else {
    const IVec& r1 = rays[sigma[0]];
    const IVec& r2 = rays[sigma[1]];
    Int det = cross2(r1, r2);
    if (det != 1 && det != -1)
      throw DomainError(
          "σ_x is not unimodular: a toric resolution refinement of the fan is presumed "
          "upstream and is not performed here");
    // Cramer; integral because |det| = 1.
    b[0] = cross2(mA, r2) / det;
    b[1] = cross2(r1, mA) / det;
  }

  CurveClassRecord rec;
  rec.exceptional_multiplicities = A;
  rec.intersection_numbers.assign(rays.size(), 0);
  for (size_t k = 0; k < rays.size(); ++k) {
    Int val = 0;
    for (int i = 0; i < s.index_count(); ++i)
      if (primitive(s.v(i)) == rays[k]) val += A[i];
    for (size_t j = 0; j < sigma.size(); ++j)
      if (sigma[j] == static_cast<int>(k)) val += b[j];
    rec.intersection_numbers[k] = val;
  }
  // Rational equivalence in rank 2: Σ (β̄·D')·u_ray = 0.
  IVec total(s.rank, 0);
  for (size_t k = 0; k < rays.size(); ++k)
    total = add(total, scale(rays[k], rec.intersection_numbers[k]));
  if (!is_zero(total))
    throw InternalError("curve class violates rational equivalence: Σ (β̄·D')·u = " +
                        ivec_str(total));
  return rec;
}

HdtvEngine::HdtvEngine(SymplecticSeed s) : seed_(std::move(s)) {
  ValidationReport rep = validate_seed(seed_);
  if (!rep.ok()) throw DomainError("invalid seed: " + rep.to_string());
}

std::shared_ptr<const ScatteringDiagram> HdtvEngine::completed(int order) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (cache_ && cache_->order >= order) return cache_;
  auto d = std::make_shared<ScatteringDiagram>(
      complete(initial_hdtv_diagram(seed_, order), order));
  cache_ = d;
  return d;
}

Rat HdtvEngine::gw_combination(const IVec& A, const QVec& x, int order) {
  if (static_cast<int>(A.size()) != seed_.index_count())
    throw DimensionError("multiplicity vector A must be indexed by I");
  Int total = 0;
  int support_count = 0;
  for (Int a : A) {
    if (a < 0) throw DomainError("multiplicities a_i must be >= 0");
    if (a > 0) ++support_count;
    total += a;
  }
  if (total == 0) throw DomainError("A must be nonzero");
  if (support_count == 1)
    throw DomainError(
        "A is a multiple of a coordinate vector, excluded by the hypothesis γ ∉ Z_{≥1} s_i");
  int order_eff = std::max<Int>(order, total);
  auto diag = completed(order_eff);
  ScatteringDiagram view = truncate_diagram(*diag, order_eff);
  auto [fin, fout] = split_in_out(view, x);
  (void)fin;
  TruncatedSeries lg = log_series(fout);
  IVec m(seed_.rank, 0);
  for (int i = 0; i < seed_.index_count(); ++i) m = add(m, scale(seed_.v(i), A[i]));
  return lg.coefficient(Exponent{m, A});
}

Rat gw_combination(const SymplecticSeed& s, const IVec& A, const QVec& x, int order) {
  HdtvEngine e(s);
  return e.gw_combination(A, x, order);
}

}  // namespace scatterdt
