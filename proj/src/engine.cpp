#include "scatterdt/engine.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace scatterdt {

namespace {

int sign_of(const Rat& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }
int sign_of(Int r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

IVec cross3(const IVec& a, const IVec& b) {
  return IVec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Int det3(const IVec& a, const IVec& b, const IVec& c) { return dot(a, cross3(b, c)); }

std::vector<IVec> generators_for(const DiagramContext& ctx) {
  std::vector<IVec> gens;
  int n = ctx.ambient_dim();
  for (int j = 0; j < n; ++j) {
    IVec g(n, 0);
    g[j] = 1;
    gens.push_back(g);
  }
  return gens;
}

Exponent generator_exponent(const DiagramContext& ctx, const IVec& g) {
  return Exponent{g, IVec(ctx.series_ctx().t_dim, 0)};
}

// Transversal frame for local loops. Rank 2: the identity frame around the
// origin. Rank 3: a rational complement of the joint ray.
struct Frame {
  IVec u, w;
  std::optional<IVec> joint;

  IVec lift(const IVec& d2) const { return add(scale(u, d2[0]), scale(w, d2[1])); }
};

Frame origin_frame() { return Frame{IVec{1, 0}, IVec{0, 1}, std::nullopt}; }

Frame joint_frame(const IVec& j) {
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      IVec ea(3, 0), eb(3, 0);
      ea[a] = 1;
      eb[b] = 1;
      if (det3(j, ea, eb) != 0) return Frame{ea, eb, j};
    }
  throw InternalError("degenerate joint ray");
}

struct Trace {
  int wall = -1;
  bool line = false;
  IVec dir2;  // primitive direction in frame coordinates
};

// x = α·g + β·ρ (3D); returns β when x lies in span(g, ρ).
std::optional<Rat> beta_coordinate(const IVec& g, const IVec& rho, const IVec& x) {
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      Int det = g[i] * rho[j] - g[j] * rho[i];
      if (det == 0) continue;
      Rat dq(static_cast<long>(det));
      Rat alpha = (to_rat(x[i]) * to_rat(rho[j]) - to_rat(x[j]) * to_rat(rho[i])) / dq;
      Rat beta = (to_rat(g[i]) * to_rat(x[j]) - to_rat(g[j]) * to_rat(x[i])) / dq;
      for (int k = 0; k < 3; ++k) {
        if (k == i || k == j) continue;
        if (alpha * to_rat(g[k]) + beta * to_rat(rho[k]) != to_rat(x[k])) return std::nullopt;
      }
      return beta;
    }
  return std::nullopt;
}

// The 2D trace of a wall in the frame's transversal plane, when the wall
// contains the loop center (origin, resp. the joint ray).
std::optional<Trace> wall_trace(const Wall& w, const DiagramContext& ctx, const Frame& frame,
                                int wall_index) {
  if (!frame.joint) {
    // Rank-2 arrangement through the origin.
    switch (w.support.kind) {
      case Support::Kind::ray2:
        return Trace{wall_index, false, w.support.a};
      case Support::Kind::line2:
        return Trace{wall_index, true, w.support.a};
      default:
        throw InternalError("rank-2 loop with non-planar support");
    }
  }
  const IVec& j = *frame.joint;
  const IVec& gamma = w.direction;
  if (dot(j, gamma) != 0) return std::nullopt;  // wall plane misses the joint
  // Direction of the trace line of γ^⊥ in frame coordinates.
  Int pu = dot(frame.u, gamma), pw = dot(frame.w, gamma);
  if (pu == 0 && pw == 0) throw InternalError("frame not transversal to wall");
  IVec d2 = primitive(IVec{-pw, pu});
  switch (w.support.kind) {
    case Support::Kind::hyperplane:
      return Trace{wall_index, true, d2};
    case Support::Kind::halfplane3: {
      const IVec& g = w.support.a;
      const IVec& rho = w.support.b;
      auto beta_j = beta_coordinate(g, rho, j);
      if (!beta_j) return std::nullopt;  // joint not in the wall's span
      if (*beta_j > 0) return Trace{wall_index, true, d2};  // joint in the interior
      if (*beta_j < 0) return std::nullopt;                 // wrong side
      // Joint on the boundary line R·g: the trace is the ray lifting to the ρ side.
      auto beta_v = beta_coordinate(g, rho, frame.lift(d2));
      if (!beta_v || *beta_v == 0) throw InternalError("halfplane trace degenerate");
      if (*beta_v > 0) return Trace{wall_index, false, d2};
      return Trace{wall_index, false, negate(d2)};
    }
    default:
      throw InternalError("rank-3 loop with rank-2 support kind");
  }
}

struct CrossingBundle {
  IVec r2;                 // primitive crossing ray, frame coordinates
  std::vector<int> walls;  // indices of walls crossed there
};

std::vector<CrossingBundle> build_loop(const ScatteringDiagram& d, const Frame& frame) {
  std::vector<Trace> traces;
  for (size_t i = 0; i < d.walls.size(); ++i) {
    auto t = wall_trace(d.walls[i], d.ctx, frame, static_cast<int>(i));
    if (t) traces.push_back(*t);
  }
  std::vector<IVec> rays;
  auto add_ray = [&](const IVec& r) {
    if (std::find(rays.begin(), rays.end(), r) == rays.end()) rays.push_back(r);
  };
  for (const Trace& t : traces) {
    add_ray(t.dir2);
    if (t.line) add_ray(negate(t.dir2));
  }
  std::sort(rays.begin(), rays.end(),
            [](const IVec& a, const IVec& b) { return angle_compare(a, b) < 0; });
  std::vector<CrossingBundle> out;
  for (const IVec& r : rays) {
    CrossingBundle cb{r, {}};
    for (const Trace& t : traces)
      if (t.dir2 == r || (t.line && negate(t.dir2) == r)) cb.walls.push_back(t.wall);
    out.push_back(std::move(cb));
  }
  return out;
}

struct CrossingAction {
  TruncatedSeries fn;
  std::function<Int(const Exponent&)> expfun;
};

// One action per wall at the crossing (coincident-support walls commute:
// their exponent functionals kill each other's monomials).
//
// Quiver side: exponent ε·ω_Q(γ_d, ·) with ε·<velocity, γ_d> < 0. Seed side:
// exponent <n_w, ·> where n_w = ν^{-1}(pair_m) carries the wall content's
// divisibility and the sign makes <n_w, velocity> > 0; under this project's
// composition order (last crossing acts first) this is the convention that
// commutes with the quiver side through every compatibility map ψ.
std::vector<CrossingAction> crossing_actions(const ScatteringDiagram& d, const Frame& frame,
                                             const CrossingBundle& cb) {
  std::vector<CrossingAction> out;
  IVec vel = frame.lift(rot90(cb.r2));
  for (int wi : cb.walls) {
    const Wall& w = d.walls[wi];
    if (d.ctx.side == DiagramContext::Side::quiver) {
      IVec gamma_r = w.direction;
      int s = sign_of(dot(vel, gamma_r));
      if (s == 0) throw DomainError("non-transverse crossing");
      Int eps = -s;
      const Quiver q = d.ctx.quiver;
      out.push_back(CrossingAction{w.function, [q, gamma_r, eps](const Exponent& e) {
                                     return eps * skew_form(q, DimensionVector(gamma_r),
                                                            DimensionVector(e.lat));
                                   }});
    } else {
      IVec n_w = d.ctx.seed.nu_inverse(w.pair_m);
      int s = sign_of(dot(vel, n_w));
      if (s == 0) throw DomainError("non-transverse crossing");
      if (s < 0) n_w = negate(n_w);
      out.push_back(
          CrossingAction{w.function, [n_w](const Exponent& e) { return dot(n_w, e.lat); }});
    }
  }
  return out;
}

// Multipliers of the generator monomials under the composite of the given
// crossings: the product is read in path order left-to-right, so the last
// crossing acts first as a function.
std::vector<TruncatedSeries> compose_multipliers(const ScatteringDiagram& d,
                                                 const std::vector<CrossingAction>& actions) {
  auto gens = generators_for(d.ctx);
  SeriesContext sctx = d.ctx.series_ctx();
  std::vector<TruncatedSeries> mult;
  for (const IVec& g : gens) {
    TruncatedSeries u = TruncatedSeries::one(sctx, d.order);
    Exponent ge = generator_exponent(d.ctx, g);
    for (auto it = actions.rbegin(); it != actions.rend(); ++it) {
      u = apply_wall_crossing(u, it->fn, it->expfun);
      u = mul(u, int_pow(it->fn, it->expfun(ge)));
    }
    mult.push_back(std::move(u));
  }
  return mult;
}

std::vector<TruncatedSeries> loop_multipliers(const ScatteringDiagram& d, const Frame& frame) {
  auto loop = build_loop(d, frame);
  std::vector<CrossingAction> actions;
  for (const auto& cb : loop)
    for (auto& a : crossing_actions(d, frame, cb)) actions.push_back(std::move(a));
  return compose_multipliers(d, actions);
}

struct Defect {
  int degree = 0;
  std::vector<DefectTerm> terms;
};

std::optional<Defect> lowest_defect(const ScatteringDiagram& d,
                                    const std::vector<TruncatedSeries>& mult) {
  int best = d.order + 1;
  for (const auto& u : mult)
    for (const auto& [e, c] : u.terms()) {
      int deg = u.degree_of(e);
      if (deg == 0) continue;  // the constant term stays 1
      best = std::min(best, deg);
    }
  if (best > d.order) return std::nullopt;
  Defect def;
  def.degree = best;
  for (size_t j = 0; j < mult.size(); ++j)
    for (const auto& [e, c] : mult[j].terms())
      if (mult[j].degree_of(e) == best)
        def.terms.push_back(DefectTerm{e, static_cast<int>(j), c});
  return def;
}

// Where a degree-n correction wall for defect exponent E goes, and the
// first-order weight its coefficient contributes to each generator multiplier.
struct Correction {
  IVec direction;
  IVec pair_m, pair_t;  // seed side
  Support support;
  std::vector<Int> weights;  // per generator
};

Correction correction_for(const ScatteringDiagram& d, const Frame& frame, const Exponent& e) {
  auto gens = generators_for(d.ctx);
  if (d.ctx.side == DiagramContext::Side::seed) {
    const IVec& m = e.lat;
    if (is_zero(m))
      throw InternalError("seed-side loop defect with zero monomial direction cannot be cancelled");
    IVec joint = m;
    joint.insert(joint.end(), e.t.begin(), e.t.end());
    Int g = gcd_vec(joint);
    IVec pm(m.size()), pt(e.t.size());
    for (size_t i = 0; i < m.size(); ++i) pm[i] = m[i] / g;
    for (size_t i = 0; i < e.t.size(); ++i) pt[i] = e.t[i] / g;
    IVec m0 = primitive(m);
    IVec ray = negate(m0);  // non-incoming: m_0 not on the support ray
    IVec n_w = d.ctx.seed.nu_inverse(pm);
    IVec vel = rot90(ray);
    int s = sign_of(dot(vel, n_w));
    if (s == 0) throw InternalError("degenerate crossing for correction wall");
    if (s < 0) n_w = negate(n_w);
    Correction corr{m0, {}, {}, Support::ray(ray), {}};
    corr.pair_m = pm;
    corr.pair_t = pt;
    for (const IVec& gvec : gens) corr.weights.push_back(dot(n_w, gvec));
    return corr;
  }
  // Quiver side.
  const IVec& delta = e.lat;
  IVec gamma_d = primitive(delta);
  IVec att = attractor_point_int(d.ctx.quiver, DimensionVector(gamma_d));
  if (is_zero(att))
    throw InternalError("loop defect on a central direction cannot be cancelled");
  if (!frame.joint) {
    IVec ray = primitive(negate(att));  // the ray of γ_d^⊥ away from the attractor point
    IVec vel = rot90(ray);
    int s = sign_of(dot(vel, gamma_d));
    if (s == 0) throw InternalError("defect direction parallel to its own perpendicular");
    Int eps = -s;
    Correction corr{gamma_d, {}, {}, Support::ray(ray), {}};
    for (const IVec& g : gens)
      corr.weights.push_back(eps * skew_form(d.ctx.quiver, DimensionVector(gamma_d),
                                             DimensionVector(g)));
    return corr;
  }
  // Rank 3: half-plane R·j + R_{>=0}·ρ on the non-incoming side of the joint.
  const IVec& j = *frame.joint;
  if (dot(j, delta) != 0) throw InternalError("joint defect direction not perpendicular to joint");
  Int pu = dot(frame.u, gamma_d), pw = dot(frame.w, gamma_d);
  IVec d2 = primitive(IVec{-pw, pu});
  IVec v3 = frame.lift(d2);
  auto beta = beta_coordinate(j, v3, att);
  if (!beta) throw InternalError("attractor point escapes the wall plane");
  if (*beta == 0)
    throw InternalError(
        "experimental joint reduction: attractor point lies on the joint; placement undefined");
  IVec dir2 = *beta > 0 ? negate(d2) : d2;
  IVec rho = primitive(frame.lift(dir2));
  IVec vel = frame.lift(rot90(dir2));
  int s = sign_of(dot(vel, gamma_d));
  if (s == 0) throw InternalError("degenerate crossing for correction wall");
  Int eps = -s;
  Correction corr{gamma_d, {}, {}, Support::half_plane(j, rho), {}};
  for (const IVec& g : gens)
    corr.weights.push_back(eps *
                           skew_form(d.ctx.quiver, DimensionVector(gamma_d), DimensionVector(g)));
  return corr;
}

// Insert the solved correction term c·z^E into the diagram, merging with an
// existing added wall of equal support and direction by multiplying functions.
void insert_correction(ScatteringDiagram& d, const Correction& corr, const Exponent& e,
                       const Rat& c) {
  SeriesContext sctx = d.ctx.series_ctx();
  TruncatedSeries delta_fn = TruncatedSeries::one(sctx, d.order);
  delta_fn.add_term(e, c);
  for (Wall& w : d.walls) {
    if (w.tag != WallTag::added) continue;
    if (w.support == corr.support && w.direction == corr.direction &&
        w.pair_m == corr.pair_m && w.pair_t == corr.pair_t) {
      w.function = mul(w.function, delta_fn);
      return;
    }
  }
  d.walls.emplace_back(corr.direction, corr.pair_m, corr.pair_t, corr.support, delta_fn,
                       WallTag::added);
}

// Solve the correction coefficients for all defect terms of the lowest degree
// found around one loop; returns false if the defect vanished.
bool cancel_defect_once(ScatteringDiagram& d, const Frame& frame, int* out_degree) {
  auto mult = loop_multipliers(d, frame);
  auto def = lowest_defect(d, mult);
  if (!def) return false;
  if (out_degree) *out_degree = def->degree;
  // Group the lowest-degree terms by exponent.
  std::map<Exponent, std::map<int, Rat>> by_exp;
  for (const auto& t : def->terms) by_exp[t.exponent][t.generator] = t.coefficient;
  for (const auto& [e, coeffs] : by_exp) {
    Correction corr = correction_for(d, frame, e);
    // Solve c from any generator with nonzero weight; verify the rest. The
    // defect functional must be proportional to the crossing functional, or
    // no single wall can cancel it.
    std::optional<Rat> c;
    for (size_t j = 0; j < corr.weights.size(); ++j) {
      if (corr.weights[j] == 0) continue;
      auto it = coeffs.find(static_cast<int>(j));
      Rat dj = it == coeffs.end() ? Rat(0) : it->second;
      c = -dj / Rat(static_cast<long>(corr.weights[j]));
      break;
    }
    if (!c) throw InternalError("defect with identically zero crossing functional");
    for (size_t j = 0; j < corr.weights.size(); ++j) {
      auto it = coeffs.find(static_cast<int>(j));
      Rat dj = it == coeffs.end() ? Rat(0) : it->second;
      if (dj + *c * Rat(static_cast<long>(corr.weights[j])) != 0)
        throw InternalError("loop defect is not proportional to a wall-crossing functional");
    }
    if (*c != 0) insert_correction(d, corr, e, *c);
  }
  return true;
}

std::set<IVec> enumerate_joints(const ScatteringDiagram& d) {
  std::set<IVec> joints;
  auto try_add = [&](const IVec& g0) {
    if (is_zero(g0)) return;
    joints.insert(primitive(g0));
    joints.insert(primitive(negate(g0)));
  };
  for (size_t i = 0; i < d.walls.size(); ++i) {
    if (d.walls[i].support.kind == Support::Kind::halfplane3) try_add(d.walls[i].support.a);
    for (size_t j = i + 1; j < d.walls.size(); ++j)
      if (!same_span(d.walls[i], d.walls[j], d.ctx))
        try_add(cross3(d.walls[i].direction, d.walls[j].direction));
  }
  // Keep only joint rays actually contained in at least one wall.
  std::set<IVec> active;
  for (const IVec& j : joints) {
    QVec p = to_qvec(j);
    for (const Wall& w : d.walls)
      if (support_contains(w.support, w, d.ctx, p)) {
        active.insert(j);
        break;
      }
  }
  return active;
}

void validate_diagram(const ScatteringDiagram& d) {
  for (const Wall& w : d.walls) validate_wall(w, d.ctx, d.order);
}

}  // namespace

bool Automorphism::is_identity() const {
  for (const auto& u : multipliers)
    if (!u.is_one()) return false;
  return true;
}

std::string ConsistencyReport::to_string() const {
  if (consistent) return "consistent";
  std::string s = "inconsistent: defect at degree " + std::to_string(defect_degree) +
                  " on direction " + ivec_str(defect_direction);
  if (joint) s += " at joint " + ivec_str(*joint);
  return s;
}

bool is_incoming(const ScatteringDiagram& d, const Wall& w) {
  if (d.ctx.side == DiagramContext::Side::quiver) {
    IVec att = attractor_point_int(d.ctx.quiver, DimensionVector(w.direction));
    return support_contains(w.support, w, d.ctx, to_qvec(att));
  }
  return support_contains(w.support, w, d.ctx, to_qvec(w.direction));
}

bool is_central(const Wall& w, const Quiver& q) {
  return in_kernel(q, DimensionVector(w.direction));
}

ScatteringDiagram remove_central_walls(const ScatteringDiagram& d) {
  if (d.ctx.side != DiagramContext::Side::quiver)
    throw DomainError("central walls are a quiver-side notion; seed-side diagrams have none");
  ScatteringDiagram out{d.ctx, {}, d.order};
  for (const Wall& w : d.walls)
    if (!is_central(w, d.ctx.quiver)) out.walls.push_back(w);
  return out;
}

void require_nonsingular(const ScatteringDiagram& d, const QVec& x) {
  bool zero = true;
  for (const Rat& r : x)
    if (r != 0) zero = false;
  if (zero) throw SingularPointError("the origin lies in Sing of every central arrangement");
  std::vector<int> contains;
  for (size_t i = 0; i < d.walls.size(); ++i) {
    const Wall& w = d.walls[i];
    if (support_boundary_contains(w.support, w, d.ctx, x))
      throw SingularPointError("point lies on the boundary of the wall with support " +
                               w.support.to_string());
    if (support_contains(w.support, w, d.ctx, x)) contains.push_back(static_cast<int>(i));
  }
  for (size_t a = 0; a < contains.size(); ++a)
    for (size_t b = a + 1; b < contains.size(); ++b)
      if (!same_span(d.walls[contains[a]], d.walls[contains[b]], d.ctx))
        throw SingularPointError("point lies on a codimension-two intersection of walls " +
                                 d.walls[contains[a]].support.to_string() + " and " +
                                 d.walls[contains[b]].support.to_string());
}

TruncatedSeries chamber_function(const ScatteringDiagram& d, const QVec& x) {
  require_nonsingular(d, x);
  TruncatedSeries f = TruncatedSeries::one(d.ctx.series_ctx(), d.order);
  for (const Wall& w : d.walls)
    if (support_contains(w.support, w, d.ctx, x)) f = mul(f, w.function);
  return f;
}

std::vector<PathCrossing> origin_loop(const ScatteringDiagram& d) {
  if (d.ctx.ambient_dim() != 2)
    throw DomainError("origin loop requires ambient rank 2");
  auto loop = build_loop(d, origin_frame());
  std::vector<PathCrossing> out;
  for (const auto& cb : loop)
    out.push_back(PathCrossing{to_qvec(cb.r2), to_qvec(rot90(cb.r2))});
  return out;
}

Automorphism path_ordered_product(const ScatteringDiagram& d,
                                  const std::vector<PathCrossing>& path) {
  SeriesContext sctx = d.ctx.series_ctx();
  std::vector<CrossingAction> actions;
  for (const PathCrossing& pc : path) {
    require_nonsingular(d, pc.point);
    std::vector<int> walls;
    for (size_t i = 0; i < d.walls.size(); ++i)
      if (support_contains(d.walls[i].support, d.walls[i], d.ctx, pc.point))
        walls.push_back(static_cast<int>(i));
    if (walls.empty()) throw DomainError("path crossing point lies on no wall");
    for (int wi : walls) {
      const Wall& w = d.walls[wi];
      if (d.ctx.side == DiagramContext::Side::quiver) {
        IVec gamma_r = w.direction;
        Rat pairing = dotq(pc.velocity, gamma_r);
        int s = sign_of(pairing);
        if (s == 0) throw DomainError("non-transverse crossing: velocity pairs to 0 with γ_d");
        Int eps = -s;
        Quiver q = d.ctx.quiver;
        actions.push_back(CrossingAction{w.function, [q, gamma_r, eps](const Exponent& e) {
                                           return eps * skew_form(q, DimensionVector(gamma_r),
                                                                  DimensionVector(e.lat));
                                         }});
      } else {
        IVec n_w = d.ctx.seed.nu_inverse(w.pair_m);
        Rat pairing = dotq(pc.velocity, n_w);
        int s = sign_of(pairing);
        if (s == 0) throw DomainError("non-transverse crossing: velocity pairs to 0 with n_0");
        if (s < 0) n_w = negate(n_w);
        actions.push_back(
            CrossingAction{w.function, [n_w](const Exponent& e) { return dot(n_w, e.lat); }});
      }
    }
  }
  Automorphism aut;
  aut.generators = generators_for(d.ctx);
  aut.multipliers = compose_multipliers(d, actions);
  return aut;
}

ConsistencyReport check_consistency(const ScatteringDiagram& d, const EngineOptions& opts) {
  validate_diagram(d);
  ConsistencyReport rep;
  auto fill = [&](const Defect& def, const std::optional<IVec>& joint) {
    rep.consistent = false;
    rep.defect_degree = def.degree;
    rep.terms = def.terms;
    rep.defect_direction = primitive(def.terms.front().exponent.lat);
    rep.joint = joint;
  };
  if (d.ctx.ambient_dim() == 2) {
    auto mult = loop_multipliers(d, origin_frame());
    auto def = lowest_defect(d, mult);
    if (def) fill(*def, std::nullopt);
    return rep;
  }
  if (!opts.experimental_rank3)
    throw DomainError(
        "consistency in ambient rank >= 3 requires the experimental joint-reduction mode");
  if (d.ctx.ambient_dim() != 3)
    throw DomainError("experimental joint reduction supports ambient rank 3 only");
  for (const IVec& j : enumerate_joints(d)) {
    auto mult = loop_multipliers(d, joint_frame(j));
    auto def = lowest_defect(d, mult);
    if (def && (rep.consistent || def->degree < rep.defect_degree)) fill(*def, j);
  }
  return rep;
}

ScatteringDiagram complete(const ScatteringDiagram& initial, int order,
                           const EngineOptions& opts) {
  if (order < 1) throw DomainError("completion order must be >= 1");
  if (initial.order < order)
    throw DomainError("initial diagram order is below the requested completion order");
  ScatteringDiagram d = truncate_diagram(initial, order);
  validate_diagram(d);
  for (const Wall& w : d.walls)
    if (!w.function.is_unit_shape())
      throw DomainError("initial wall functions must have constant term 1");

  // Seed-side initial data of blowup type (every monomial pair satisfies
  // m = Σ a_i v_i) stays of that type under completion; assert it as we go.
  bool check_blowup_type = false;
  if (d.ctx.side == DiagramContext::Side::seed) {
    check_blowup_type = true;
    for (const Wall& w : d.walls)
      for (const auto& [e, c] : w.function.terms()) {
        if (is_zero(e.lat) && is_zero(e.t)) continue;
        IVec expect(d.ctx.seed.rank, 0);
        for (int i = 0; i < d.ctx.seed.index_count(); ++i)
          expect = add(expect, scale(d.ctx.seed.v(i), e.t[i]));
        if (expect != e.lat) check_blowup_type = false;
      }
  }

  if (d.ctx.ambient_dim() == 2) {
    Frame frame = origin_frame();
    int last_degree = 0;
    for (int guard = 0; guard <= order + 1; ++guard) {
      int deg = 0;
      if (!cancel_defect_once(d, frame, &deg)) break;
      if (deg <= last_degree)
        throw InternalError("completion failed to make progress at degree " +
                            std::to_string(deg));
      last_degree = deg;
      if (guard == order + 1) throw InternalError("completion exceeded its degree budget");
    }
  } else {
    if (!opts.experimental_rank3)
      throw DomainError(
          "completion in ambient rank >= 3 requires the experimental joint-reduction mode");
    if (d.ctx.ambient_dim() != 3)
      throw DomainError("experimental joint reduction supports ambient rank 3 only");
    for (int n = 1; n <= order; ++n) {
      for (int pass = 0;; ++pass) {
        if (pass > opts.max_passes_per_degree)
          throw InternalError("experimental joint reduction did not stabilize");
        bool any = false;
        for (const IVec& j : enumerate_joints(d)) {
          Frame frame = joint_frame(j);
          auto mult = loop_multipliers(d, frame);
          auto def = lowest_defect(d, mult);
          if (!def) continue;
          if (def->degree < n)
            throw InternalError("experimental joint reduction regressed to a lower degree");
          if (def->degree > n) continue;
          std::map<Exponent, std::map<int, Rat>> by_exp;
          for (const auto& t : def->terms) by_exp[t.exponent][t.generator] = t.coefficient;
          for (const auto& [e, coeffs] : by_exp) {
            Correction corr = correction_for(d, frame, e);
            std::optional<Rat> c;
            for (size_t k = 0; k < corr.weights.size(); ++k) {
              if (corr.weights[k] == 0) continue;
              auto it = coeffs.find(static_cast<int>(k));
              Rat dk = it == coeffs.end() ? Rat(0) : it->second;
              c = -dk / Rat(static_cast<long>(corr.weights[k]));
              break;
            }
            if (!c) throw InternalError("defect with identically zero crossing functional");
            for (size_t k = 0; k < corr.weights.size(); ++k) {
              auto it = coeffs.find(static_cast<int>(k));
              Rat dk = it == coeffs.end() ? Rat(0) : it->second;
              if (dk + *c * Rat(static_cast<long>(corr.weights[k])) != 0)
                throw InternalError("loop defect is not proportional to a crossing functional");
            }
            if (*c != 0) insert_correction(d, corr, e, *c);
          }
          any = true;
        }
        if (!any) break;
      }
    }
  }

  if (check_blowup_type) {
    for (const Wall& w : d.walls) {
      if (w.tag != WallTag::added) continue;
      for (const auto& [e, c] : w.function.terms()) {
        if (is_zero(e.lat) && is_zero(e.t)) continue;
        IVec expect(d.ctx.seed.rank, 0);
        for (int i = 0; i < d.ctx.seed.index_count(); ++i)
          expect = add(expect, scale(d.ctx.seed.v(i), e.t[i]));
        if (expect != e.lat)
          throw InternalError("added wall monomial violates m = Σ a_i v_i on blowup-type data");
      }
    }
  }
  return d;
}

ScatteringDiagram truncate_diagram(const ScatteringDiagram& d, int order) {
  if (order > d.order) throw DomainError("cannot extend a diagram beyond its trusted order");
  ScatteringDiagram out{d.ctx, {}, order};
  for (const Wall& w : d.walls) {
    TruncatedSeries f = w.function.truncated(order);
    if (f.is_one()) continue;
    out.walls.emplace_back(w.direction, w.pair_m, w.pair_t, w.support, std::move(f), w.tag);
  }
  return out;
}

ScatteringDiagram canonical_form(const ScatteringDiagram& d) {
  ScatteringDiagram out{d.ctx, {}, d.order};
  // Merge walls with identical support and direction by multiplying functions.
  for (const Wall& w : d.walls) {
    bool merged = false;
    for (Wall& o : out.walls)
      if (o.support == w.support && o.direction == w.direction && o.pair_m == w.pair_m &&
          o.pair_t == w.pair_t) {
        o.function = mul(o.function, w.function);
        merged = true;
        break;
      }
    if (!merged) out.walls.push_back(w);
  }
  std::erase_if(out.walls, [](const Wall& w) { return w.function.is_one(); });
  std::sort(out.walls.begin(), out.walls.end(), [](const Wall& a, const Wall& b) {
    if (a.support.kind != b.support.kind) return a.support.kind < b.support.kind;
    if (a.support.a != b.support.a) {
      if (a.support.a.size() == 2 && b.support.a.size() == 2) {
        int c = angle_compare(a.support.a, b.support.a);
        if (c != 0) return c < 0;
      }
      return a.support.a < b.support.a;
    }
    if (a.support.b != b.support.b) return a.support.b < b.support.b;
    return a.direction < b.direction;
  });
  return out;
}

EquivalenceResult equivalent(const ScatteringDiagram& a, const ScatteringDiagram& b) {
  if (!(a.ctx == b.ctx)) throw ContextError("equivalence requires diagrams in the same context");
  if (a.order != b.order) throw ContextError("equivalence requires diagrams of equal order");
  EquivalenceResult res;
  if (a.ctx.ambient_dim() == 2) {
    // One certified generic sample per ray of the common support arrangement;
    // points off all supports have chamber function 1 on both sides.
    std::vector<IVec> rays;
    auto add_ray = [&](const IVec& r) {
      if (std::find(rays.begin(), rays.end(), r) == rays.end()) rays.push_back(r);
    };
    for (const ScatteringDiagram* d : {&a, &b})
      for (const Wall& w : d->walls) {
        add_ray(w.support.a);
        if (w.support.kind == Support::Kind::line2) add_ray(negate(w.support.a));
      }
    for (const IVec& r : rays) {
      QVec x = to_qvec(r);
      if (!(chamber_function(a, x) == chamber_function(b, x))) return {false, x};
    }
    return res;
  }
  // Ambient rank 3 (experimental): sample the relative interior of every cell
  // cut on each support plane by the traces of all other walls.
  std::vector<const Wall*> all;
  for (const ScatteringDiagram* d : {&a, &b})
    for (const Wall& w : d->walls) all.push_back(&w);
  for (const Wall* w : all) {
    const IVec& gamma = w->direction;
    // Integer spanning pair of γ^⊥.
    std::vector<IVec> basis;
    for (int i = 0; i < 3 && basis.size() < 2; ++i) {
      IVec e(3, 0);
      e[i] = 1;
      IVec cand = cross3(gamma, e);
      if (is_zero(cand)) continue;
      if (basis.empty() || !is_zero(cross3(basis[0], cand))) basis.push_back(primitive(cand));
    }
    if (basis.size() < 2) throw InternalError("failed to span a wall plane");
    Frame fr{basis[0], basis[1], std::nullopt};
    // Divider rays within this plane: boundaries of halfplanes with the same
    // span and traces of walls with other spans.
    std::vector<IVec> dividers;
    auto add2 = [&](const IVec& v3) {
      // coordinates of v3 in (basis0, basis1)
      for (int i = 0; i < 3; ++i)
        for (int jj = i + 1; jj < 3; ++jj) {
          Int det = basis[0][i] * basis[1][jj] - basis[0][jj] * basis[1][i];
          if (det == 0) continue;
          Int s = v3[i] * basis[1][jj] - v3[jj] * basis[1][i];
          Int t = basis[0][i] * v3[jj] - basis[0][jj] * v3[i];
          // (s/det, t/det); use (s·sign, t·sign) as integer direction.
          IVec d2{det > 0 ? s : -s, det > 0 ? t : -t};
          if (is_zero(d2)) return;
          IVec p = primitive(d2);
          if (std::find(dividers.begin(), dividers.end(), p) == dividers.end())
            dividers.push_back(p);
          return;
        }
    };
    for (const Wall* o : all) {
      if (same_span(*w, *o, a.ctx)) {
        if (o->support.kind == Support::Kind::halfplane3) {
          add2(o->support.a);
          add2(negate(o->support.a));
        }
      } else {
        IVec g = cross3(w->direction, o->direction);
        if (!is_zero(g)) {
          add2(g);
          add2(negate(g));
        }
      }
    }
    if (w->support.kind == Support::Kind::halfplane3) {
      add2(w->support.a);
      add2(negate(w->support.a));
    }
    std::sort(dividers.begin(), dividers.end(),
              [](const IVec& x, const IVec& y) { return angle_compare(x, y) < 0; });
    std::vector<IVec> samples;
    if (dividers.empty()) {
      samples.push_back(IVec{1, 0});
    } else {
      for (size_t i = 0; i < dividers.size(); ++i) {
        const IVec& r1 = dividers[i];
        const IVec& r2 = dividers[(i + 1) % dividers.size()];
        IVec mid = add(r1, r2);
        if (is_zero(mid) || cross2(r1, mid) == 0) {
          // Antipodal or degenerate gap: rotate slightly within the sector.
          mid = add(scale(r1, 2), rot90(r1));
          if (dividers.size() > 1 && cross2(r1, r2) == 0 && r1 != r2) {
            // gap of exactly π: midpoint at 90°
            mid = rot90(r1);
          }
        }
        samples.push_back(primitive(mid));
      }
    }
    for (const IVec& s2 : samples) {
      IVec x3 = fr.lift(s2);
      QVec x = to_qvec(x3);
      if (!support_contains(w->support, *w, a.ctx, x)) continue;
      bool singular = false;
      try {
        require_nonsingular(a, x);
        require_nonsingular(b, x);
      } catch (const SingularPointError&) {
        singular = true;
      }
      if (singular) continue;
      if (!(chamber_function(a, x) == chamber_function(b, x))) return {false, x};
    }
  }
  return res;
}

}  // namespace scatterdt
