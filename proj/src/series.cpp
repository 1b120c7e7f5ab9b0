#include "scatterdt/series.hpp"

#include <unordered_map>

namespace scatterdt {

std::string SeriesContext::to_string() const {
  std::string s = side == Side::quiver ? "quiver" : "seed";
  s += "[" + std::to_string(lattice_dim);
  if (t_dim) s += ";t^" + std::to_string(t_dim);
  return s + "]";
}

Exponent exp_add(const Exponent& a, const Exponent& b) {
  return Exponent{add(a.lat, b.lat), a.t.empty() && b.t.empty() ? IVec{} : add(a.t, b.t)};
}

Exponent exp_scale(const Exponent& e, Int k) {
  return Exponent{scale(e.lat, k), scale(e.t, k)};
}

void TruncatedSeries::check_exponent(const Exponent& e) const {
  if (static_cast<int>(e.lat.size()) != ctx_.lattice_dim)
    throw DimensionError("exponent lattice part has wrong length");
  if (static_cast<int>(e.t.size()) != ctx_.t_dim)
    throw DimensionError("exponent t part has wrong length");
  if (ctx_.side == SeriesContext::Side::quiver) {
    for (Int x : e.lat)
      if (x < 0) throw DomainError("quiver-side exponents must lie in N_Q^⊕ (entries >= 0)");
  } else {
    for (Int x : e.t)
      if (x < 0) throw DomainError("t-exponents must be >= 0");
  }
}

int TruncatedSeries::degree_of(const Exponent& e) const {
  Int d = 0;
  if (ctx_.side == SeriesContext::Side::quiver)
    for (Int x : e.lat) d += x;
  else
    for (Int x : e.t) d += x;
  return static_cast<int>(d);
}

TruncatedSeries TruncatedSeries::one(SeriesContext ctx, int order) {
  TruncatedSeries s(ctx, order);
  s.add_term(Exponent{IVec(ctx.lattice_dim, 0), IVec(ctx.t_dim, 0)}, Rat(1));
  return s;
}

TruncatedSeries TruncatedSeries::monomial(SeriesContext ctx, int order, const Exponent& e,
                                          const Rat& c) {
  TruncatedSeries s(ctx, order);
  s.add_term(e, c);
  return s;
}

Rat TruncatedSeries::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rat(0) : it->second;
}

Rat TruncatedSeries::constant_term() const {
  return coefficient(Exponent{IVec(ctx_.lattice_dim, 0), IVec(ctx_.t_dim, 0)});
}

bool TruncatedSeries::is_one() const { return terms_.size() == 1 && constant_term() == 1; }

bool TruncatedSeries::is_unit_shape() const {
  if (constant_term() != 1) return false;
  for (const auto& [e, c] : terms_)
    if (degree_of(e) == 0 && !scatterdt::is_zero(e.lat)) return false;
  return true;
}

void TruncatedSeries::add_term(const Exponent& e, const Rat& c) {
  if (c == 0) return;
  check_exponent(e);
  if (degree_of(e) > order_) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

TruncatedSeries TruncatedSeries::truncated(int new_order) const {
  if (new_order > order_)
    throw DomainError("cannot extend a truncated series to a higher order");
  TruncatedSeries out(ctx_, new_order);
  for (const auto& [e, c] : terms_)
    if (degree_of(e) <= new_order) out.terms_.emplace(e, c);
  return out;
}

std::string TruncatedSeries::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [e, c] : terms_) {
    if (!s.empty()) s += " + ";
    s += c.get_str() + "*z^" + ivec_str(e.lat);
    if (!e.t.empty()) s += "*t^" + ivec_str(e.t);
  }
  return s;
}

namespace {

void require_same(const TruncatedSeries& f, const TruncatedSeries& g) {
  if (!(f.context() == g.context()))
    throw ContextError("series context mismatch: " + f.context().to_string() + " vs " +
                       g.context().to_string());
  if (f.order() != g.order())
    throw ContextError("series order mismatch: " + std::to_string(f.order()) + " vs " +
                       std::to_string(g.order()));
}

}  // namespace

TruncatedSeries add(const TruncatedSeries& f, const TruncatedSeries& g) {
  require_same(f, g);
  TruncatedSeries out = f;
  for (const auto& [e, c] : g.terms()) out.add_term(e, c);
  return out;
}

TruncatedSeries mul(const TruncatedSeries& f, const TruncatedSeries& g) {
  require_same(f, g);
  TruncatedSeries out(f.context(), f.order());
  for (const auto& [ef, cf] : f.terms()) {
    int df = f.degree_of(ef);
    for (const auto& [eg, cg] : g.terms()) {
      if (df + g.degree_of(eg) > f.order()) continue;
      out.add_term(exp_add(ef, eg), cf * cg);
    }
  }
  return out;
}

TruncatedSeries int_pow(const TruncatedSeries& f, Int n) {
  if (n < 0 && f.constant_term() != 1)
    throw DomainError("int_pow with negative exponent requires constant term 1");
  if (n == 0) return TruncatedSeries::one(f.context(), f.order());
  TruncatedSeries base = f;
  if (n < 0) {
    if (!f.is_unit_shape())
      throw DomainError("inversion requires a unit-shaped series (constant term 1, rest of positive degree)");
    // Geometric inversion: 1/f = Σ (1 - f)^k, finite under truncation.
    TruncatedSeries one = TruncatedSeries::one(f.context(), f.order());
    TruncatedSeries u = one;  // (1-f)^0
    TruncatedSeries inv = one;
    TruncatedSeries neg(f.context(), f.order());
    for (const auto& [e, c] : f.terms()) neg.add_term(e, -c);
    neg.add_term(Exponent{IVec(f.context().lattice_dim, 0), IVec(f.context().t_dim, 0)}, Rat(1));
    for (int k = 1; k <= f.order(); ++k) {
      u = mul(u, neg);
      if (u.is_zero()) break;
      inv = add(inv, u);
    }
    base = inv;
    n = -n;
  }
  TruncatedSeries acc = TruncatedSeries::one(f.context(), f.order());
  while (n > 0) {
    if (n & 1) acc = mul(acc, base);
    n >>= 1;
    if (n) base = mul(base, base);
  }
  return acc;
}

TruncatedSeries exp_series(const TruncatedSeries& f) {
  if (f.constant_term() != 0) throw DomainError("exp requires constant term 0");
  for (const auto& [e, c] : f.terms())
    if (f.degree_of(e) == 0)
      throw DomainError("exp requires all terms of positive degree");
  TruncatedSeries out = TruncatedSeries::one(f.context(), f.order());
  TruncatedSeries p = TruncatedSeries::one(f.context(), f.order());
  Rat fact(1);
  for (int k = 1; k <= f.order(); ++k) {
    p = mul(p, f);
    if (p.is_zero()) break;
    fact *= k;
    for (const auto& [e, c] : p.terms()) out.add_term(e, c / fact);
  }
  return out;
}

TruncatedSeries log_series(const TruncatedSeries& f) {
  if (f.constant_term() != 1) throw DomainError("log requires constant term 1");
  if (!f.is_unit_shape())
    throw DomainError("log requires a unit-shaped series (constant term 1, rest of positive degree)");
  TruncatedSeries g(f.context(), f.order());  // f - 1
  for (const auto& [e, c] : f.terms())
    if (f.degree_of(e) > 0 || !is_zero(e.lat)) g.add_term(e, c);
  TruncatedSeries out(f.context(), f.order());
  TruncatedSeries p = TruncatedSeries::one(f.context(), f.order());
  for (int k = 1; k <= f.order(); ++k) {
    p = mul(p, g);
    if (p.is_zero()) break;
    Rat coef = rat_of(k % 2 == 1 ? 1 : -1, k);
    for (const auto& [e, c] : p.terms()) out.add_term(e, c * coef);
  }
  return out;
}

TruncatedSeries apply_wall_crossing(const TruncatedSeries& target, const TruncatedSeries& wall_fn,
                                    const std::function<Int(const Exponent&)>& exponent_of) {
  require_same(target, wall_fn);
  if (wall_fn.constant_term() != 1)
    throw DomainError("wall function must have constant term 1");
  TruncatedSeries out(target.context(), target.order());
  std::unordered_map<Int, TruncatedSeries> pow_cache;
  for (const auto& [e, c] : target.terms()) {
    Int n = exponent_of(e);
    auto it = pow_cache.find(n);
    if (it == pow_cache.end()) it = pow_cache.emplace(n, int_pow(wall_fn, n)).first;
    int de = target.degree_of(e);
    for (const auto& [ew, cw] : it->second.terms()) {
      if (de + target.degree_of(ew) > target.order()) continue;
      out.add_term(exp_add(e, ew), c * cw);
    }
  }
  return out;
}

}  // namespace scatterdt
