#include "scatterdt/dt.hpp"

#include <algorithm>
#include <random>

namespace scatterdt {

ScatteringDiagram initial_cluster_diagram(const Quiver& q, int order) {
  q.validate();
  if (!q.trivial_attractor)
    throw DomainError(
        "attractor invariants not asserted trivial: the cluster route needs the hypothesis "
        "Ω_{s_i}^{+,*} = 1 for i ∈ I and Ω_γ^{+,*} = 0 off the simples and ker ω_Q");
  ScatteringDiagram d{DiagramContext::for_quiver(q), {}, order};
  SeriesContext sctx = d.ctx.series_ctx();
  for (int i : q.index_set()) {
    IVec si(q.vertex_count, 0);
    si[i] = 1;
    TruncatedSeries f = TruncatedSeries::one(sctx, order);
    f.add_term(Exponent{si, {}}, Rat(1));
    Support sup = Support::full_hyperplane();
    if (q.vertex_count == 2) {
      // s_i^⊥ is the coordinate line {θ_i = 0}.
      IVec gen(2, 0);
      gen[1 - i] = 1;
      sup = Support::line(gen);
    }
    d.walls.emplace_back(si, sup, std::move(f), WallTag::initial);
  }
  return d;
}

namespace {

// sign^{j-1} (-1)^{j-1} / j².
Rat cover_coeff(Int j, int sign) {
  int s = (j % 2 == 1) ? 1 : (sign < 0 ? -1 : 1);
  return rat_of(s, j * j);
}

}  // namespace

std::map<Int, Rat> rational_from_integer(const std::map<Int, Int>& omega,
                                         const DimensionVector& gamma0, int sign) {
  if (gamma0.divisibility() != 1) throw DomainError("γ_0 must be primitive");
  Int kmax = 0;
  for (const auto& [k, v] : omega) {
    if (k < 1) throw DomainError("multiples must be indexed by k >= 1");
    kmax = std::max(kmax, k);
  }
  std::map<Int, Rat> out;
  for (Int k = 1; k <= kmax; ++k) {
    Rat s(0);
    for (Int j = 1; j <= k; ++j) {
      if (k % j != 0) continue;
      auto it = omega.find(k / j);
      if (it == omega.end()) continue;
      s += cover_coeff(j, sign) * to_rat(it->second);
    }
    if (s != 0 || omega.count(k)) out[k] = s;
  }
  return out;
}

std::map<Int, Rat> integer_from_rational(const std::map<Int, Rat>& omega_bar,
                                         const DimensionVector& gamma0, int sign) {
  if (gamma0.divisibility() != 1) throw DomainError("γ_0 must be primitive");
  Int kmax = 0;
  for (const auto& [k, v] : omega_bar) {
    if (k < 1) throw DomainError("multiples must be indexed by k >= 1");
    kmax = std::max(kmax, k);
  }
  std::map<Int, Rat> out;
  for (Int k = 1; k <= kmax; ++k) {
    auto it = omega_bar.find(k);
    Rat s = it == omega_bar.end() ? Rat(0) : it->second;
    for (Int j = 2; j <= k; ++j) {
      if (k % j != 0) continue;
      auto o = out.find(k / j);
      if (o == out.end()) continue;
      s -= cover_coeff(j, sign) * o->second;
    }
    if (s != 0 || omega_bar.count(k)) out[k] = s;
  }
  return out;
}

std::map<Int, Int> integer_from_rational_strict(const std::map<Int, Rat>& omega_bar,
                                                const DimensionVector& gamma0, int sign) {
  std::map<Int, Int> out;
  for (const auto& [k, v] : integer_from_rational(omega_bar, gamma0, sign)) {
    if (v.get_den() != 1)
      throw DomainError("integer DT solve produced the non-integer " + v.get_str() +
                        " at multiple " + std::to_string(k));
    out[k] = static_cast<Int>(v.get_num().get_si());
  }
  return out;
}

TruncatedSeries assemble_wall_function(const std::map<Int, Rat>& omega_bar,
                                       const DimensionVector& gamma0, int vertex_count,
                                       int order) {
  if (gamma0.divisibility() != 1) throw DomainError("γ_0 must be primitive");
  SeriesContext ctx = quiver_context(vertex_count);
  TruncatedSeries s(ctx, order);
  for (const auto& [k, v] : omega_bar) {
    if (k < 1) throw DomainError("multiples must be indexed by k >= 1");
    // |kγ0| = k for primitive γ0.
    s.add_term(Exponent{scale(gamma0.coords, k), {}}, Rat(static_cast<long>(k)) * v);
  }
  return exp_series(s);
}

std::map<Int, Rat> extract_dt(const TruncatedSeries& f, const DimensionVector& gamma0) {
  if (gamma0.divisibility() != 1) throw DomainError("γ_0 must be primitive");
  if (f.constant_term() != 1) throw DomainError("wall function must have constant term 1");
  for (const auto& [e, c] : f.terms()) {
    if (is_zero(e.lat)) continue;
    Int g = gcd_vec(e.lat);
    if (scale(gamma0.coords, g) != e.lat)
      throw DomainError("series is not supported on powers of z^{γ_0}: found " +
                        ivec_str(e.lat));
  }
  TruncatedSeries lg = log_series(f);
  std::map<Int, Rat> out;
  for (const auto& [e, c] : lg.terms()) {
    Int k = gcd_vec(e.lat);
    out[k] = c / Rat(static_cast<long>(k));
  }
  return out;
}

std::string chamber_note(const Quiver& q, const DimensionVector& gamma, const Covector& theta) {
  if (in_kernel(q, gamma)) return "kernel-class";
  IVec att = attractor_point_int(q, gamma);
  // θ ∈ R_{>0}·ι_γω_Q?
  bool collinear = true;
  for (size_t i = 0; i < theta.size() && collinear; ++i)
    for (size_t j = i + 1; j < theta.size(); ++j)
      if (theta.coords[i] * to_rat(att[j]) != theta.coords[j] * to_rat(att[i])) {
        collinear = false;
        break;
      }
  if (collinear) {
    Rat d = dotq(theta.coords, att);
    if (d > 0) return "attractor";
    if (d < 0) return "anti-attractor";
  }
  return "generic";
}

std::shared_ptr<const ScatteringDiagram> DtEngine::completed(int order) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (cache_ && cache_->order >= order) return cache_;
  auto d = std::make_shared<ScatteringDiagram>(
      complete(initial_cluster_diagram(quiver_, order), order));
  cache_ = d;
  return d;
}

DTRecord DtEngine::dt_invariants(const DimensionVector& gamma, const Covector& theta,
                                 int order) {
  if (!quiver_.trivial_attractor)
    throw DomainError("attractor invariants not asserted trivial");
  if (static_cast<int>(gamma.size()) != quiver_.vertex_count)
    throw DimensionError("dimension vector length must equal vertex count");
  if (!gamma.in_positive_cone())
    throw DomainError("γ must lie in N_Q^+ (entries >= 0, not all zero)");
  if (in_kernel(quiver_, gamma))
    throw DomainError(
        "γ ∈ ker ω_Q: such invariants do not depend on θ and do not play a role in any "
        "wall-crossing; they are outside this pipeline");
  if (quiver_.vertex_count != 2)
    throw DomainError(
        "quiver-side completion requires ambient rank 2; higher rank routes through the "
        "pullback/HDTV correspondence");
  if (theta.pair(gamma) != 0) throw DomainError("θ must lie in γ^⊥");
  Int deg = 0;
  for (Int x : gamma.coords) deg += x;
  int order_eff = std::max<Int>(order, deg);
  if (!is_gamma_general(quiver_, theta, gamma, order_eff))
    throw DomainError("θ is not γ-general at this order: θ(γ')=0 must imply γ' collinear with γ");

  auto diag = completed(order_eff);
  ScatteringDiagram view = truncate_diagram(*diag, order_eff);
  TruncatedSeries f = chamber_function(view, theta.coords);
  IVec g0 = primitive(gamma.coords);
  Int div = gamma.divisibility();
  auto obar = extract_dt(f, DimensionVector(g0));
  int sign = cover_sign(quiver_, DimensionVector(g0));
  auto oint = integer_from_rational_strict(obar, DimensionVector(g0), sign);

  DTRecord rec;
  rec.gamma = gamma;
  rec.theta = theta;
  rec.omega_bar = obar.count(div) ? obar[div] : Rat(0);
  rec.omega = oint.count(div) ? oint[div] : 0;
  rec.chamber_note = chamber_note(quiver_, gamma, theta);
  Int g0deg = 0;
  for (Int x : g0) g0deg += x;
  for (Int k = 1; k * g0deg <= order_eff; ++k)
    rec.multiples.push_back(DTMultiple{k, obar.count(k) ? obar[k] : Rat(0),
                                       oint.count(k) ? oint[k] : 0});
  return rec;
}

DtEngine::AuditReport DtEngine::positivity_audit(int degree_bound, int theta_samples,
                                                 unsigned long long seed) {
  AuditReport rep;
  std::mt19937_64 rng(seed);
  completed(degree_bound);  // one shared diagram
  IVec cur(quiver_.vertex_count, 0);
  auto scan = [&](auto&& self, int pos, int left) -> void {
    if (pos == quiver_.vertex_count) {
      if (is_zero(cur)) return;
      DimensionVector g(cur);
      if (in_kernel(quiver_, g)) return;
      IVec att = attractor_point_int(quiver_, g);
      for (int side = 0; side < 2; ++side) {
        for (int s = 0; s < theta_samples; ++s) {
          // Random positive scaling keeps the certified chamber point exact.
          Int num = 1 + static_cast<Int>(rng() % 7);
          QVec theta(att.size());
          for (size_t i = 0; i < att.size(); ++i)
            theta[i] = rat_of((side == 0 ? -1 : 1) * num * att[i], 1);
          DTRecord rec = dt_invariants(g, Covector(theta), degree_bound);
          ++rep.checked;
          for (const DTMultiple& m : rec.multiples) {
            if (m.omega < 0)
              rep.violations.push_back(AuditEntry{
                  DimensionVector(scale(primitive(cur), m.k)), rec.chamber_note, m.omega, false});
          }
        }
      }
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[pos] = v;
      self(self, pos + 1, left - v);
    }
    cur[pos] = 0;
  };
  scan(scan, 0, degree_bound);
  return rep;
}

DTRecord dt_invariants(const Quiver& q, const DimensionVector& gamma, const Covector& theta,
                       int order) {
  DtEngine e(q);
  return e.dt_invariants(gamma, theta, order);
}

}  // namespace scatterdt
