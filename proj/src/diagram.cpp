#include "scatterdt/diagram.hpp"

#include <algorithm>

namespace scatterdt {

Support Support::line(IVec d) {
  IVec p = primitive(std::move(d));
  // Canonical sign for dedup: first nonzero coordinate positive.
  for (Int x : p) {
    if (x > 0) break;
    if (x < 0) {
      p = negate(p);
      break;
    }
  }
  return Support{Kind::line2, std::move(p), {}};
}

std::string Support::to_string() const {
  switch (kind) {
    case Kind::ray2: return "ray " + ivec_str(a);
    case Kind::line2: return "line " + ivec_str(a);
    case Kind::hyperplane: return "hyperplane";
    case Kind::halfplane3: return "halfplane line " + ivec_str(a) + " + ray " + ivec_str(b);
  }
  return "?";
}

bool DiagramContext::operator==(const DiagramContext& o) const {
  if (side != o.side) return false;
  if (side == Side::quiver)
    return quiver.vertex_count == o.quiver.vertex_count &&
           quiver.arrow_counts == o.quiver.arrow_counts;
  return seed.rank == o.seed.rank && seed.e_vectors == o.seed.e_vectors &&
         seed.omega == o.seed.omega;
}

namespace {

bool qvec_is_zero(const QVec& x) {
  for (const Rat& r : x)
    if (r != 0) return false;
  return true;
}

// x = α·g + β·ρ in rank 3 with exact rationals; returns (solvable, β).
struct HalfplaneCoords {
  bool in_span = false;
  Rat alpha, beta;
};

HalfplaneCoords halfplane_coords(const IVec& g, const IVec& rho, const QVec& x) {
  HalfplaneCoords out;
  // Find a 2x2 invertible minor of [g rho].
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      Int det = g[i] * rho[j] - g[j] * rho[i];
      if (det == 0) continue;
      Rat dq(static_cast<long>(det));
      out.alpha = (x[i] * to_rat(rho[j]) - x[j] * to_rat(rho[i])) / dq;
      out.beta = (to_rat(g[i]) * x[j] - to_rat(g[j]) * x[i]) / dq;
      // Verify the remaining coordinate.
      for (int k = 0; k < 3; ++k) {
        if (k == i || k == j) continue;
        if (out.alpha * to_rat(g[k]) + out.beta * to_rat(rho[k]) != x[k]) return out;  // in_span stays false
      }
      out.in_span = true;
      return out;
    }
  return out;
}

}  // namespace

bool support_contains(const Support& s, const Wall& w, const DiagramContext& ctx, const QVec& x) {
  switch (s.kind) {
    case Support::Kind::ray2: {
      if (cross2q(x, s.a) != 0) return false;
      // Same closed half of the line: <x, a> >= 0 once collinear.
      return dotq(x, s.a) >= 0;
    }
    case Support::Kind::line2:
      return cross2q(x, s.a) == 0;
    case Support::Kind::hyperplane:
      // The support is the full hyperplane perpendicular to the direction
      // (quiver side: γ_d^⊥).
      return dotq(x, w.direction) == 0;
    case Support::Kind::halfplane3: {
      auto c = halfplane_coords(s.a, s.b, x);
      return c.in_span && c.beta >= 0;
    }
  }
  return false;
}

bool support_boundary_contains(const Support& s, const Wall& w, const DiagramContext& ctx,
                               const QVec& x) {
  switch (s.kind) {
    case Support::Kind::ray2:
      return qvec_is_zero(x);
    case Support::Kind::line2:
    case Support::Kind::hyperplane:
      return false;
    case Support::Kind::halfplane3: {
      auto c = halfplane_coords(s.a, s.b, x);
      return c.in_span && c.beta == 0;
    }
  }
  return false;
}

bool same_span(const Wall& a, const Wall& b, const DiagramContext& ctx) {
  auto is2 = [](const Support& s) {
    return s.kind == Support::Kind::ray2 || s.kind == Support::Kind::line2;
  };
  if (is2(a.support) && is2(b.support)) return cross2(a.support.a, b.support.a) == 0;
  // Rank >= 3: spans of codim-1 central walls coincide iff the perpendicular
  // directions are collinear.
  const IVec& da = a.direction;
  const IVec& db = b.direction;
  for (size_t i = 0; i < da.size(); ++i)
    for (size_t j = i + 1; j < da.size(); ++j)
      if (da[i] * db[j] != da[j] * db[i]) return false;
  return true;
}

void validate_wall(const Wall& w, const DiagramContext& ctx, int order) {
  const int dim = ctx.ambient_dim();
  if (static_cast<int>(w.direction.size()) != dim)
    throw DimensionError("wall direction has wrong length");
  if (is_zero(w.direction)) throw DomainError("wall direction must be nonzero");
  if (gcd_vec(w.direction) != 1) throw DomainError("wall direction must be primitive");
  if (!(w.function.context() == ctx.series_ctx()))
    throw ContextError("wall function context does not match the diagram");
  if (w.function.order() != order)
    throw ContextError("wall function order does not match the diagram");
  if (w.function.constant_term() != 1)
    throw DomainError("wall function must have constant term 1");

  if (ctx.side == DiagramContext::Side::quiver) {
    for (Int x : w.direction)
      if (x < 0) throw DomainError("quiver wall direction γ_d must lie in N_Q^+");
  }

  // Support ⊂ direction-perpendicular hyperplane.
  switch (w.support.kind) {
    case Support::Kind::ray2:
    case Support::Kind::line2:
      if (dim != 2) throw DomainError("ray/line supports require ambient rank 2");
      if (ctx.side == DiagramContext::Side::quiver) {
        if (dot(w.support.a, w.direction) != 0)
          throw DomainError("support is not contained in γ_d^⊥");
      } else {
        // Seed side: m_0 lies on the support line.
        if (cross2(w.support.a, w.direction) != 0)
          throw DomainError("wall monomial direction m_0 must span the support line");
      }
      break;
    case Support::Kind::hyperplane:
      if (ctx.side != DiagramContext::Side::quiver)
        throw DomainError("hyperplane supports occur on the quiver side only");
      break;
    case Support::Kind::halfplane3:
      if (dim != 3 || ctx.side != DiagramContext::Side::quiver)
        throw DomainError("half-plane supports require quiver side ambient rank 3");
      if (dot(w.support.a, w.direction) != 0 || dot(w.support.b, w.direction) != 0)
        throw DomainError("support is not contained in γ_d^⊥");
      break;
  }

  // Wall function monomials run over non-negative multiples of the direction.
  for (const auto& [e, c] : w.function.terms()) {
    if (is_zero(e.lat)) continue;
    if (primitive(e.lat) != w.direction)
      throw DomainError("wall function monomial " + ivec_str(e.lat) +
                        " is not a positive multiple of the wall direction " +
                        ivec_str(w.direction));
  }

  if (ctx.side == DiagramContext::Side::seed) {
    // The (m, A) exponent pair generator must be set, jointly primitive, and
    // generate every term.
    if (w.pair_m.size() != w.direction.size() ||
        w.pair_t.size() != static_cast<size_t>(ctx.series_ctx().t_dim))
      throw DomainError("seed wall is missing its (m, A) pair generator");
    IVec joint = w.pair_m;
    joint.insert(joint.end(), w.pair_t.begin(), w.pair_t.end());
    if (is_zero(joint) || gcd_vec(joint) != 1)
      throw DomainError("seed wall pair generator must be jointly primitive");
    if (!is_zero(w.pair_m) && primitive(w.pair_m) != w.direction)
      throw DomainError("seed wall pair m-part must be a multiple of the direction");
    for (const auto& [e, c] : w.function.terms()) {
      if (is_zero(e.lat) && is_zero(e.t)) continue;
      IVec full = e.lat;
      full.insert(full.end(), e.t.begin(), e.t.end());
      Int g = gcd_vec(full);
      if (g < 1 || scale(w.pair_m, g) != e.lat || scale(w.pair_t, g) != e.t)
        throw DomainError("seed wall term is not a positive multiple of the pair generator");
    }
  }
}

}  // namespace scatterdt
