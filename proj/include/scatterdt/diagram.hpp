#pragma once

// Walls and scattering diagrams, quiver side and seed side.
//
// Required mode: central arrangements in ambient rank 2, where supports are
// rays or full lines through the origin. Quiver diagrams in ambient rank 3
// additionally allow full hyperplanes and half-planes R·g + R_{>=0}·ρ; those
// only occur in the experimental joint-reduction mode.

#include <string>
#include <vector>

#include "scatterdt/lattice.hpp"
#include "scatterdt/series.hpp"

namespace scatterdt {

struct Support {
  enum class Kind { ray2, line2, hyperplane, halfplane3 };
  Kind kind = Kind::ray2;
  IVec a;  // ray2/line2: primitive generator; halfplane3: primitive boundary line generator g
  IVec b;  // halfplane3: primitive transverse generator ρ (support = R·a + R_{>=0}·b)

  static Support ray(IVec d) { return Support{Kind::ray2, primitive(std::move(d)), {}}; }
  static Support line(IVec d);
  static Support full_hyperplane() { return Support{Kind::hyperplane, {}, {}}; }
  static Support half_plane(IVec g, IVec rho) {
    return Support{Kind::halfplane3, primitive(std::move(g)), primitive(std::move(rho))};
  }

  bool operator==(const Support&) const = default;
  std::string to_string() const;
};

enum class WallTag { initial, added, central };

inline const char* tag_name(WallTag t) {
  switch (t) {
    case WallTag::initial: return "initial";
    case WallTag::added: return "added";
    case WallTag::central: return "central";
  }
  return "?";
}

struct Wall {
  // Quiver side: γ_d ∈ N_Q^+ primitive; seed side: primitive m_0 ∈ M (wall
  // direction is -m_0, monomials run over Z_{>=1} m_0).
  IVec direction;
  // Seed side only: the jointly primitive generator (pair_m, pair_t) of the
  // wall's (m, A) exponent lattice; every term is a positive multiple of it.
  // pair_m is a multiple of the primitive direction; its ν-preimage in N is
  // the crossing normal, which carries the divisibility of the wall content
  // (the index that pullback transports from the quiver side).
  IVec pair_m, pair_t;
  Support support;
  TruncatedSeries function;
  WallTag tag = WallTag::initial;

  Wall(IVec dir, Support sup, TruncatedSeries fn, WallTag t)
      : direction(std::move(dir)), support(std::move(sup)), function(std::move(fn)), tag(t) {}
  Wall(IVec dir, IVec pm, IVec pt, Support sup, TruncatedSeries fn, WallTag t)
      : direction(std::move(dir)),
        pair_m(std::move(pm)),
        pair_t(std::move(pt)),
        support(std::move(sup)),
        function(std::move(fn)),
        tag(t) {}
};

struct DiagramContext {
  enum class Side { quiver, seed };
  Side side = Side::quiver;
  Quiver quiver;        // meaningful when side == quiver
  SymplecticSeed seed;  // meaningful when side == seed

  static DiagramContext for_quiver(Quiver q) {
    DiagramContext c;
    c.side = Side::quiver;
    c.quiver = std::move(q);
    return c;
  }
  static DiagramContext for_seed(SymplecticSeed s) {
    DiagramContext c;
    c.side = Side::seed;
    c.seed = std::move(s);
    return c;
  }

  int ambient_dim() const {
    return side == Side::quiver ? quiver.vertex_count : seed.rank;
  }
  SeriesContext series_ctx() const {
    return side == Side::quiver ? quiver_context(quiver.vertex_count)
                                : seed_context(seed.rank, seed.index_count());
  }
  bool operator==(const DiagramContext& o) const;
};

struct ScatteringDiagram {
  DiagramContext ctx;
  std::vector<Wall> walls;
  int order = 0;  // m-adic order up to which the diagram is defined/trusted
};

// Exact membership of a rational point in a wall's support.
bool support_contains(const Support& s, const Wall& w, const DiagramContext& ctx, const QVec& x);
// Membership in the support's relative boundary (part of Sing).
bool support_boundary_contains(const Support& s, const Wall& w, const DiagramContext& ctx,
                               const QVec& x);
// Whether two walls have the same linear span (codim-1 intersections are not singular).
bool same_span(const Wall& a, const Wall& b, const DiagramContext& ctx);

// Validates a wall against its diagram context; throws on violation.
void validate_wall(const Wall& w, const DiagramContext& ctx, int order);

}  // namespace scatterdt
