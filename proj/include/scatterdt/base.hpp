#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace scatterdt {

using Int = long long;
using Rat = mpq_class;
using IVec = std::vector<Int>;
using QVec = std::vector<Rat>;

// Error taxonomy. Messages that enforce a mathematical hypothesis quote the
// condition inline so the CLI can surface it verbatim.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct ContextError : Error {
  using Error::Error;
};
struct SingularPointError : Error {
  using Error::Error;
};
// Broken internal invariant: indicates a bug, not bad input.
struct InternalError : Error {
  using Error::Error;
};

inline Int gcd_ll(Int a, Int b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

inline Int gcd_vec(const IVec& v) {
  Int g = 0;
  for (Int x : v) g = gcd_ll(g, x);
  return g;
}

inline bool is_zero(const IVec& v) {
  for (Int x : v)
    if (x != 0) return false;
  return true;
}

// v / gcd(v), orientation preserved. |primitive(v)| = 1.
inline IVec primitive(IVec v) {
  Int g = gcd_vec(v);
  if (g == 0) throw DomainError("primitive part of the zero vector is undefined");
  for (Int& x : v) x /= g;
  return v;
}

inline IVec negate(IVec v) {
  for (Int& x : v) x = -x;
  return v;
}

inline IVec add(const IVec& a, const IVec& b) {
  if (a.size() != b.size()) throw DimensionError("vector length mismatch");
  IVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline IVec scale(IVec v, Int k) {
  for (Int& x : v) x *= k;
  return v;
}

// GMP's C++ classes have no long long overloads; on this platform long is
// 64-bit, so the cast is lossless.
inline Rat to_rat(Int x) { return Rat(static_cast<long>(x)); }

inline Int dot(const IVec& a, const IVec& b) {
  if (a.size() != b.size()) throw DimensionError("vector length mismatch");
  Int s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rat dotq(const QVec& a, const IVec& b) {
  if (a.size() != b.size()) throw DimensionError("vector length mismatch");
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * to_rat(b[i]);
  return s;
}

// 2D cross product; sign gives counterclockwise orientation.
inline Int cross2(const IVec& a, const IVec& b) {
  if (a.size() != 2 || b.size() != 2) throw DimensionError("cross2 needs 2-vectors");
  return a[0] * b[1] - a[1] * b[0];
}

inline Rat cross2q(const QVec& a, const IVec& b) {
  if (a.size() != 2 || b.size() != 2) throw DimensionError("cross2 needs 2-vectors");
  return a[0] * to_rat(b[1]) - a[1] * to_rat(b[0]);
}

// 90° counterclockwise rotation, (a,b) -> (-b,a).
inline IVec rot90(const IVec& v) {
  if (v.size() != 2) throw DimensionError("rot90 needs a 2-vector");
  return IVec{-v[1], v[0]};
}

inline QVec to_qvec(const IVec& v) {
  QVec r;
  r.reserve(v.size());
  for (Int x : v) r.push_back(to_rat(x));
  return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline Rat rat_of(Int num, Int den = 1) {
  Rat r(static_cast<long>(num), static_cast<long>(den));
  r.canonicalize();
  return r;
}

inline std::string ivec_str(const IVec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

inline std::string qvec_str(const QVec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s + ")";
}

}  // namespace scatterdt
