#include "scatterdt/correspond.hpp"

#include <algorithm>

namespace scatterdt {

namespace {

Quiver kronecker_quiver(int m) {
  Quiver q;
  q.vertex_count = 2;
  q.arrow_counts = {{0, m}, {0, 0}};
  q.trivial_attractor = true;
  q.attractor_note = "acyclic quiver: attractor invariants are trivial (Bridgeland)";
  return q;
}

CompatibilityMap psi_from_e(const std::vector<IVec>& e, int rank) {
  CompatibilityMap psi;
  psi.matrix.assign(rank, IVec(e.size(), 0));
  for (size_t i = 0; i < e.size(); ++i)
    for (int r = 0; r < rank; ++r) psi.matrix[r][i] = e[i][r];
  return psi;
}

IVec q_primitive(const QVec& x) {
  // Common denominator, then primitive integer direction.
  mpz_class lcm = 1;
  for (const Rat& r : x) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), r.get_den().get_mpz_t());
  IVec out;
  for (const Rat& r : x) {
    mpz_class v = r.get_num() * (lcm / r.get_den());
    if (!v.fits_slong_p()) throw InternalError("preimage coordinates overflow");
    out.push_back(static_cast<Int>(v.get_si()));
  }
  return primitive(out);
}

}  // namespace

Preset make_kronecker(int m) {
  if (m < 1 || m > 3)
    throw DomainError("kronecker presets ship for m in {1,2,3}; use custom input files otherwise");
  Preset p;
  p.name = "kronecker" + std::to_string(m);
  p.quiver = kronecker_quiver(m);
  SymplecticSeed s;
  s.rank = 2;
  s.omega = {{0, 1}, {-1, 0}};
  if (m == 1) {
    s.e_vectors = {{1, 0}, {0, 1}};
    s.fan_rays = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  } else if (m == 2) {
    s.e_vectors = {{1, 1}, {-1, 1}};
    s.fan_rays = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}};
  } else {
    s.e_vectors = {{1, 1}, {-2, 1}};
    s.fan_rays = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {-1, -2}, {0, -1}};
  }
  p.seed = s;
  p.psi = psi_from_e(s.e_vectors, 2);
  return p;
}

Preset make_local_p2() {
  Preset p;
  p.name = "local_p2";
  p.quiver.vertex_count = 3;
  p.quiver.arrow_counts = {{0, 3, 0}, {0, 0, 3}, {3, 0, 0}};
  p.quiver.trivial_attractor = true;
  p.quiver.attractor_note =
      "BPS quiver of the local projective plane: attractor invariants are trivial off "
      "ker ω_Q (Bousseau–Descombes–Le Floch–Pioline)";
  SymplecticSeed s;
  s.rank = 2;
  s.e_vectors = {{1, 1}, {-2, 1}, {1, -2}};
  s.omega = {{0, 1}, {-1, 0}};
  // The three rays through v_i plus a unimodular completion, so every σ_x
  // hit by curve-class queries is regular.
  s.fan_rays = {{1, 0}, {2, 1}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {-1, -2}, {0, -1}};
  p.seed = s;
  p.psi = psi_from_e(s.e_vectors, 2);
  return p;
}

Preset make_cubic() {
  Preset p;
  p.name = "cubic";
  p.quiver.vertex_count = 6;
  p.quiver.arrow_counts.assign(6, IVec(6, 0));
  // Octahedral quiver: three pairs {1,2}, {3,4}, {5,6}; one arrow from each
  // of 1,2 to each of 3,4; from 3,4 to 5,6; from 5,6 to 1,2.
  for (int a : {0, 1})
    for (int b : {2, 3}) p.quiver.arrow_counts[a][b] = 1;
  for (int a : {2, 3})
    for (int b : {4, 5}) p.quiver.arrow_counts[a][b] = 1;
  for (int a : {4, 5})
    for (int b : {0, 1}) p.quiver.arrow_counts[a][b] = 1;
  p.quiver.trivial_attractor = true;
  p.quiver.attractor_note =
      "quiver of an ideal triangulation of the 4-punctured sphere; admits a green-to-red "
      "sequence (Mou), so attractor invariants are trivial";
  SymplecticSeed s;
  s.rank = 2;
  s.e_vectors = {{1, 0}, {1, 0}, {0, 1}, {0, 1}, {-1, -1}, {-1, -1}};
  s.omega = {{0, 1}, {-1, 0}};
  s.fan_rays = {{0, 1}, {-1, 0}, {1, -1}};
  p.seed = s;
  p.psi = psi_from_e(s.e_vectors, 2);
  return p;
}

Preset preset_by_name(const std::string& name) {
  if (name == "kronecker1") return make_kronecker(1);
  if (name == "kronecker2") return make_kronecker(2);
  if (name == "kronecker3") return make_kronecker(3);
  if (name == "local_p2") return make_local_p2();
  if (name == "cubic") return make_cubic();
  throw DomainError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  return {"kronecker1", "kronecker2", "kronecker3", "local_p2", "cubic"};
}

ScatteringDiagram pullback(const ScatteringDiagram& qdiag, const CompatibilityMap& psi,
                           const SymplecticSeed& seed) {
  if (qdiag.ctx.side != DiagramContext::Side::quiver)
    throw DomainError("pullback consumes quiver-side diagrams");
  const Quiver& q = qdiag.ctx.quiver;
  ValidationReport rep = validate_compatibility(q, seed, psi);
  if (!rep.ok()) throw DomainError("invalid compatibility data: " + rep.to_string());
  std::vector<int> I = q.index_set();

  ScatteringDiagram out{DiagramContext::for_seed(seed), {}, qdiag.order};
  SeriesContext sctx = out.ctx.series_ctx();
  for (const Wall& w : qdiag.walls) {
    if (is_central(w, q))
      throw DomainError("central wall present: apply remove_central_walls before pullback");
    const IVec& gamma = w.direction;
    for (int i = 0; i < q.vertex_count; ++i)
      if (gamma[i] != 0 && std::find(I.begin(), I.end(), i) == I.end())
        throw DomainError(
            "wall direction is supported outside I; such walls are central and must be removed");
    IVec psig = psi.apply(gamma);
    IVec w_m = seed.iota_omega(psig);  // ι_{ψγ}ω ≠ 0 off the kernel
    if (is_zero(w_m)) throw InternalError("non-central wall mapped into ker ω");

    TruncatedSeries f = TruncatedSeries::one(sctx, out.order);
    for (const auto& [e, c] : w.function.terms()) {
      if (is_zero(e.lat)) continue;
      Int k = gcd_vec(e.lat);
      IVec tpart(I.size(), 0);
      for (size_t pos = 0; pos < I.size(); ++pos) tpart[pos] = k * gamma[I[pos]];
      f.add_term(Exponent{scale(w_m, k), tpart}, c);
    }

    // Support preimage under ψ∨.
    Support sup = Support::ray(IVec{1, 0});
    switch (w.support.kind) {
      case Support::Kind::hyperplane: {
        // (ψ∨)^{-1}(γ^⊥) = (ψγ)^⊥, a line in M_R.
        sup = Support::line(rot90(psig));
        break;
      }
      case Support::Kind::ray2:
      case Support::Kind::line2: {
        // Solve ψ∨(y) = d exactly; orientation is preserved.
        auto y = psi.dual_preimage(to_qvec(w.support.a));
        if (!y) throw InternalError("support line escapes ψ∨(M_R) on a rank-2 quiver");
        IVec gen = q_primitive(*y);
        sup = w.support.kind == Support::Kind::ray2 ? Support::ray(gen) : Support::line(gen);
        break;
      }
      case Support::Kind::halfplane3: {
        IVec gen = primitive(rot90(psig));  // the preimage line (ψγ)^⊥
        // Which part of the line lands in R·g + R_{>=0}·ρ: decompose the
        // image of the generator.
        QVec img = psi.dual_apply(to_qvec(gen));
        IVec img_i = q_primitive(img);
        // img_i = α·g + β·ρ (all inside the wall plane γ^⊥).
        const IVec& g = w.support.a;
        const IVec& rho = w.support.b;
        std::optional<Rat> beta;
        for (int i = 0; i < 3 && !beta; ++i)
          for (int j = i + 1; j < 3; ++j) {
            Int det = g[i] * rho[j] - g[j] * rho[i];
            if (det == 0) continue;
            beta = (to_rat(g[i]) * to_rat(img_i[j]) - to_rat(g[j]) * to_rat(img_i[i])) / to_rat(det);
            break;
          }
        if (!beta) throw InternalError("halfplane decomposition failed");
        if (*beta > 0)
          sup = Support::ray(gen);
        else if (*beta < 0)
          sup = Support::ray(negate(gen));
        else
          sup = Support::line(gen);
        break;
      }
    }
    IVec pair_t(I.size(), 0);
    for (size_t pos = 0; pos < I.size(); ++pos) pair_t[pos] = gamma[I[pos]];
    out.walls.emplace_back(primitive(w_m), w_m, pair_t, sup, std::move(f), w.tag);
  }
  return out;
}

VerifyReport verify_comparison(const Preset& p, int order) {
  VerifyReport rep;
  if (p.quiver.vertex_count != 2)
    throw DomainError(
        "verify_comparison requires a rank-2 quiver side so both diagrams are computable by "
        "the required engine");
  ScatteringDiagram dq = complete(initial_cluster_diagram(p.quiver, order), order);
  ScatteringDiagram dq_stripped = remove_central_walls(dq);
  ScatteringDiagram dp = pullback(dq_stripped, p.psi, p.seed);
  ScatteringDiagram dh = complete(initial_hdtv_diagram(p.seed, order), order);
  EquivalenceResult res = equivalent(dp, dh);
  VerifyCheck c;
  c.name = "comparison: (ψ∨)⋆ stripped completed cluster ≡ completed HDTV @ order " +
           std::to_string(order);
  c.pass = res.equal;
  if (!res.equal) c.detail = "first disagreeing sample point " + qvec_str(res.witness);
  rep.checks.push_back(std::move(c));
  return rep;
}

std::vector<DimensionVector> main_gamma_candidates(const Preset& p, int degree_bound) {
  std::vector<DimensionVector> out;
  int n = p.quiver.vertex_count;
  IVec cur(n, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == n) {
      if (is_zero(cur)) return;
      DimensionVector g(cur);
      if (in_kernel(p.quiver, g)) return;
      int support = 0;
      for (Int x : cur)
        if (x > 0) ++support;
      if (support == 1) return;  // γ ∈ Z_{>=1} s_i
      out.push_back(g);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[pos] = v;
      self(self, pos + 1, left - v);
    }
    cur[pos] = 0;
  };
  rec(rec, 0, degree_bound);
  return out;
}

VerifyReport verify_main(const Preset& p, const std::vector<DimensionVector>& gammas,
                         int order) {
  VerifyReport rep;
  std::vector<int> I = p.quiver.index_set();
  HdtvEngine hdtv(p.seed);
  DtEngine dt(p.quiver);

  // Pullback route diagram for quivers of rank > 2, shared across γ.
  std::shared_ptr<ScatteringDiagram> pulled;
  auto pulled_diagram = [&](int ord) {
    if (!pulled || pulled->order < ord) {
      ScatteringDiagram init = remove_central_walls(initial_cluster_diagram(p.quiver, ord));
      pulled = std::make_shared<ScatteringDiagram>(
          complete(pullback(init, p.psi, p.seed), ord));
    }
    return pulled;
  };

  for (const DimensionVector& gamma : gammas) {
    std::string gname = "γ=" + ivec_str(gamma.coords);
    // Hypothesis checks turn into per-γ diagnostics.
    if (!gamma.in_positive_cone()) {
      rep.checks.push_back({gname, false, "γ must lie in N_Q^+"});
      continue;
    }
    if (in_kernel(p.quiver, gamma)) {
      rep.checks.push_back({gname, false, "hypothesis γ ∉ ker ω_Q violated"});
      continue;
    }
    int support = 0;
    bool outside_I = false;
    for (int i = 0; i < p.quiver.vertex_count; ++i) {
      if (gamma.coords[i] > 0) {
        ++support;
        if (std::find(I.begin(), I.end(), i) == I.end()) outside_I = true;
      }
    }
    if (support == 1) {
      rep.checks.push_back({gname, false, "hypothesis γ ∉ Z_{≥1}s_i violated"});
      continue;
    }
    if (outside_I) {
      rep.checks.push_back({gname, false, "γ supported outside I"});
      continue;
    }

    IVec A(I.size(), 0);
    for (size_t pos = 0; pos < I.size(); ++pos) A[pos] = gamma.coords[I[pos]];
    Int deg = 0;
    for (Int x : gamma.coords) deg += x;
    int order_eff = std::max<Int>(order, deg);

    IVec att_m = p.seed.iota_omega(p.psi.apply(gamma.coords));  // ι_{ψγ}ω ≠ 0
    for (int side = 0; side < 2; ++side) {
      IVec x = side == 0 ? primitive(negate(att_m)) : primitive(att_m);
      const char* chamber = side == 0 ? "anti-attractor" : "attractor";
      Rat seed_route = hdtv.gw_combination(A, to_qvec(x), order_eff);
      Rat quiver_route;
      if (p.quiver.vertex_count == 2) {
        Covector theta(p.psi.dual_apply(to_qvec(x)));
        DTRecord rec = dt.dt_invariants(gamma, theta, order_eff);
        quiver_route = Rat(static_cast<long>(gamma.divisibility())) * rec.omega_bar;
      } else {
        auto pd = pulled_diagram(order_eff);
        ScatteringDiagram view = truncate_diagram(*pd, order_eff);
        TruncatedSeries lg = log_series(chamber_function(view, to_qvec(x)));
        IVec m(p.seed.rank, 0);
        for (int i = 0; i < p.seed.index_count(); ++i)
          m = add(m, scale(p.seed.v(i), A[i]));
        quiver_route = lg.coefficient(Exponent{m, A});
      }
      VerifyCheck c;
      c.name = gname + " " + chamber + " x=" + ivec_str(x);
      c.pass = (seed_route == quiver_route);
      c.detail = "quiver-route |γ|Ω̄ = " + quiver_route.get_str() +
                 ", gw_combination = " + seed_route.get_str();
      rep.checks.push_back(std::move(c));
    }
  }
  return rep;
}

GammaOfChern gamma_of_chern(Int r, Int d, Int chi) {
  GammaOfChern g;
  g.gamma = IVec{-chi, r + d - chi, r + 2 * d - chi};
  g.effective = true;
  for (Int x : g.gamma)
    if (x < 0) g.effective = false;
  if (is_zero(g.gamma)) g.effective = false;
  return g;
}

DTRecord local_p2_sheaf_dt(Int r, Int d, Int chi, int order) {
  if (r <= 0)
    throw DomainError("normalized-sheaf hypothesis needs r > 0 (slope μ := d/r with −1 < μ ≤ 0)");
  // -1 < d/r <= 0  <=>  -r < d <= 0 for r > 0.
  if (!(-r < d && d <= 0))
    throw DomainError("slope hypothesis violated: μ := d/r must satisfy −1 < μ ≤ 0");
  GammaOfChern gc = gamma_of_chern(r, d, chi);
  if (!gc.effective)
    throw DomainError("γ(v) = " + ivec_str(gc.gamma) +
                      " has a negative entry; no shift convention makes it an effective "
                      "dimension vector here");
  Preset p = make_local_p2();
  DimensionVector gamma(gc.gamma);
  if (in_kernel(p.quiver, gamma))
    throw DomainError("γ(v) ∈ ker ω_Q is outside the wall-crossing pipeline");

  IVec att = attractor_point_int(p.quiver, gamma);
  DTRecord rec;
  rec.gamma = gamma;
  QVec theta(att.size());
  for (size_t i = 0; i < att.size(); ++i) theta[i] = rat_of(-att[i]);
  rec.theta = Covector(theta);
  rec.chamber_note = "anti-attractor";

  // Multiples of a simple root never wall-cross: Ω_{s_i} = 1 and Ω_{k s_i} = 0
  // for k > 1, independently of θ.
  IVec g0 = primitive(gamma.coords);
  Int div = gamma.divisibility();
  int simple = -1;
  {
    int support = 0;
    for (int i = 0; i < p.quiver.vertex_count; ++i)
      if (g0[i] > 0) {
        ++support;
        simple = i;
      }
    if (support != 1) simple = -1;
  }
  if (simple >= 0 && g0[simple] == 1) {
    std::map<Int, Int> omega;
    omega[1] = 1;
    for (Int k = 2; k <= div; ++k) omega[k] = 0;
    auto obar = rational_from_integer(omega, DimensionVector(g0));
    rec.omega_bar = obar.count(div) ? obar[div] : Rat(0);
    rec.omega = div == 1 ? 1 : 0;
    for (Int k = 1; k <= div; ++k)
      rec.multiples.push_back(DTMultiple{k, obar.count(k) ? obar[k] : Rat(0), k == 1 ? 1 : 0});
    return rec;
  }

  // HDTV route at the anti-attractor sample point.
  Int deg = 0;
  for (Int x : gamma.coords) deg += x;
  int order_eff = std::max<Int>(order, deg);
  HdtvEngine hdtv(p.seed);
  IVec x = primitive(negate(p.seed.iota_omega(p.psi.apply(gamma.coords))));
  Int g0deg = 0;
  for (Int v : g0) g0deg += v;
  std::map<Int, Rat> obar;
  for (Int k = 1; k * g0deg <= order_eff; ++k) {
    IVec Ak = scale(g0, k);
    Rat coeff = hdtv.gw_combination(Ak, to_qvec(x), order_eff);
    obar[k] = coeff / Rat(static_cast<long>(k));
  }
  auto oint = integer_from_rational_strict(obar, DimensionVector(g0),
                                           cover_sign(p.quiver, DimensionVector(g0)));
  rec.omega_bar = obar.count(div) ? obar[div] : Rat(0);
  rec.omega = oint.count(div) ? oint[div] : 0;
  for (const auto& [k, v] : obar)
    rec.multiples.push_back(DTMultiple{k, v, oint.count(k) ? oint[k] : 0});
  return rec;
}

}  // namespace scatterdt
