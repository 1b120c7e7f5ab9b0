#pragma once

// Truncated power series over exact rationals on monoid exponents.
//
// Two exponent contexts share one representation:
//  * quiver side: exponents are γ ∈ N_Q^⊕ (entries >= 0), t_part empty,
//    total degree = Σ γ_i;
//  * seed side: exponents are pairs (m, A) with m ∈ M (any sign) and
//    A ∈ N^I, total degree = Σ a_i (the t-adic grading). The pair is stored
//    as given; m = Σ a_i v_i is a property of specific diagrams, not of the
//    algebra.
//
// All coefficients are exact big rationals; no floating point.

#include <functional>
#include <map>
#include <string>

#include "scatterdt/base.hpp"

namespace scatterdt {

struct SeriesContext {
  enum class Side { quiver, seed };
  Side side = Side::quiver;
  int lattice_dim = 0;
  int t_dim = 0;  // 0 on the quiver side

  bool operator==(const SeriesContext&) const = default;
  std::string to_string() const;
};

inline SeriesContext quiver_context(int vertex_count) {
  return SeriesContext{SeriesContext::Side::quiver, vertex_count, 0};
}
inline SeriesContext seed_context(int rank, int index_count) {
  return SeriesContext{SeriesContext::Side::seed, rank, index_count};
}

struct Exponent {
  IVec lat;  // lattice part (γ or m)
  IVec t;    // t-exponents, empty on the quiver side

  auto operator<=>(const Exponent&) const = default;
};

Exponent exp_add(const Exponent& a, const Exponent& b);
Exponent exp_scale(const Exponent& e, Int k);

class TruncatedSeries {
 public:
  TruncatedSeries(SeriesContext ctx, int order) : ctx_(ctx), order_(order) {
    if (order < 0) throw DomainError("truncation order must be >= 0");
  }

  static TruncatedSeries one(SeriesContext ctx, int order);
  static TruncatedSeries zero(SeriesContext ctx, int order) { return TruncatedSeries(ctx, order); }
  static TruncatedSeries monomial(SeriesContext ctx, int order, const Exponent& e, const Rat& c);

  const SeriesContext& context() const { return ctx_; }
  int order() const { return order_; }
  const std::map<Exponent, Rat>& terms() const { return terms_; }
  size_t term_count() const { return terms_.size(); }

  int degree_of(const Exponent& e) const;  // context grading
  Rat coefficient(const Exponent& e) const;
  Rat constant_term() const;
  bool is_one() const;
  bool is_zero() const { return terms_.empty(); }
  // Constant term 1 and every other term of positive degree (wall-function shape).
  bool is_unit_shape() const;

  void add_term(const Exponent& e, const Rat& c);  // drops degree > order and zeros

  TruncatedSeries truncated(int new_order) const;

  bool operator==(const TruncatedSeries& o) const {
    return ctx_ == o.ctx_ && order_ == o.order_ && terms_ == o.terms_;
  }

  std::string to_string() const;  // debugging aid

 private:
  SeriesContext ctx_;
  int order_;
  std::map<Exponent, Rat> terms_;  // canonical sparse form: no zero coefficients

  void check_exponent(const Exponent& e) const;
  friend TruncatedSeries mul(const TruncatedSeries&, const TruncatedSeries&);
  friend TruncatedSeries add(const TruncatedSeries&, const TruncatedSeries&);
};

TruncatedSeries add(const TruncatedSeries& f, const TruncatedSeries& g);
TruncatedSeries mul(const TruncatedSeries& f, const TruncatedSeries& g);

// f^n for integer n; requires constant term 1 when n < 0.
TruncatedSeries int_pow(const TruncatedSeries& f, Int n);

// exp: constant term 0 required; log: constant term 1 required. Mutually
// inverse up to the truncation order.
TruncatedSeries exp_series(const TruncatedSeries& f);
TruncatedSeries log_series(const TruncatedSeries& f);

// The algebra map z^E -> wall_fn^{exponent_of(E)} z^E applied term by term.
// exponent_of must be additive; wall_fn must have constant term 1.
TruncatedSeries apply_wall_crossing(const TruncatedSeries& target, const TruncatedSeries& wall_fn,
                                    const std::function<Int(const Exponent&)>& exponent_of);

}  // namespace scatterdt
