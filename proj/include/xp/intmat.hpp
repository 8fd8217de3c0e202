#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

// SL2(Z), Gamma(p), heights, bounded-height enumeration.
namespace xp::arith {

using bigint = boost::multiprecision::cpp_int;

struct IntMat {
  bigint a = 1, b = 0, c = 0, d = 1;

  IntMat() = default;
  IntMat(bigint a_, bigint b_, bigint c_, bigint d_, bool check_det = true);

  static IntMat identity() { return IntMat(); }
  bigint det() const { return a * d - b * c; }
  bigint trace() const { return a + d; }
  IntMat inverse() const { return IntMat(d, -b, -c, a); }
  IntMat operator*(const IntMat& r) const;
  IntMat operator-() const { return IntMat(-a, -b, -c, -d); }
  bool operator==(const IntMat& r) const = default;

  bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }
  bool is_unipotent() const;  // trace 2 (or -2 after sign), not +-I
};

bigint height(const IntMat& m);

bool is_in_gamma_p(const IntMat& m, long p);

// All M in SL2(Z) with height(M) <= H, each exactly once, in lexicographic
// (a,b,c,d) order per (a,b) block. Visitor returns false to stop early.
void enumerate_bounded_height(long H, const std::function<bool(const IntMat&)>& visit);
std::vector<IntMat> bounded_height_list(long H);
std::uint64_t bounded_height_count(long H);

// Elements of Gamma(p) with height <= H (entrywise congruence shortcut).
void enumerate_gamma_p_bounded(long p, long H,
                               const std::function<bool(const IntMat&)>& visit);

struct MinTraceResult {
  bigint min_abs_trace;
  IntMat witness;
};

// Minimum |tr| over non-identity, non-parabolic (|tr| != 2) elements of
// Gamma(p) with height <= H.
MinTraceResult min_semisimple_trace(long p, long H);

// Primitive integer fixed vector of a unipotent matrix (up to sign;
// normalized so the first nonzero component is positive).
std::pair<bigint, bigint> unipotent_fixed_vector(const IntMat& m);

// Some B in SL2(Z) with B * u = v for primitive u, v.
IntMat vector_transporter(std::pair<bigint, bigint> u,
                          std::pair<bigint, bigint> v);

}  // namespace xp::arith
