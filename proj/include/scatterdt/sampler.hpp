#pragma once

// Seeded pseudorandom point selection with exact certification. Draws are
// integer points; certification predicates run in exact arithmetic and a
// failed draw is simply redrawn, so randomness only affects which witness
// appears in reports, never correctness.

#include <functional>
#include <random>

#include "scatterdt/base.hpp"

namespace scatterdt {

class PointSampler {
 public:
  explicit PointSampler(unsigned long long seed) : rng_(seed) {}

  IVec raw_point(int dim, Int range = 12) {
    IVec x(dim);
    for (int i = 0; i < dim; ++i) {
      Int v = 0;
      while (v == 0) v = static_cast<Int>(rng_() % (2 * range + 1)) - range;
      x[i] = v;
    }
    return x;
  }

  // Redraws until the predicate certifies the point; throws after max_draws.
  IVec certified_point(int dim, const std::function<bool(const IVec&)>& certify,
                       int max_draws = 1000, Int range = 12) {
    for (int i = 0; i < max_draws; ++i) {
      IVec x = raw_point(dim, range);
      if (certify(x)) return x;
    }
    throw InternalError("point sampler failed to certify a generic point");
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace scatterdt
