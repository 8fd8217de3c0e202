#include "xp/intmat.hpp"

#include <algorithm>

namespace xp::arith {

namespace {

bigint babs(const bigint& x) { return x < 0 ? bigint(-x) : x; }

// extended gcd on long long, g = ax + by
long long egcd(long long a, long long b, long long& x, long long& y) {
  if (b == 0) {
    x = (a >= 0) ? 1 : -1;
    y = 0;
    return a >= 0 ? a : -a;
  }
  long long x1, y1;
  long long g = egcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

long long gcdll(long long a, long long b) {
  while (b) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

}  // namespace

IntMat::IntMat(bigint a_, bigint b_, bigint c_, bigint d_, bool check_det)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
  if (check_det && det() != 1)
    throw std::domain_error("IntMat: determinant must be 1");
}

IntMat IntMat::operator*(const IntMat& r) const {
  return IntMat(a * r.a + b * r.c, a * r.b + b * r.d, c * r.a + d * r.c,
                c * r.b + d * r.d, false);
}

bool IntMat::is_unipotent() const {
  if (is_identity()) return false;
  if (a == -1 && b == 0 && c == 0 && d == -1) return false;
  return trace() == 2 || trace() == -2;
}

bigint height(const IntMat& m) {
  bigint h = babs(m.a);
  h = std::max(h, babs(m.b));
  h = std::max(h, babs(m.c));
  h = std::max(h, babs(m.d));
  return h;
}

bool is_in_gamma_p(const IntMat& m, long p) {
  auto cong = [&](const bigint& x, long r) {
    bigint q = (x - r) % p;
    return q == 0;
  };
  return cong(m.a, 1) && cong(m.b, 0) && cong(m.c, 0) && cong(m.d, 1);
}

void enumerate_bounded_height(long H,
                              const std::function<bool(const IntMat&)>& visit) {
  if (H < 1) throw std::domain_error("enumerate_bounded_height: H >= 1");
  // For each coprime (a,b), solutions of ad - bc = 1 are
  // (c,d) = (c0 + t a, d0 + t b); emit them ordered by (c,d).
  for (long long a = -H; a <= H; ++a) {
    for (long long b = -H; b <= H; ++b) {
      if (a == 0 && b == 0) continue;
      if (gcdll(a, b) != 1) continue;
      if (a == 0) {
        // -bc = 1, b = +-1, c = -b, d free
        long long c = -b;
        for (long long d = -H; d <= H; ++d)
          if (!visit(IntMat(a, b, c, d))) return;
        continue;
      }
      long long x, y;
      egcd(a, b, x, y);  // ax + by = 1
      // a d0 - b c0 = 1 with d0 = x, c0 = -y
      long long c0 = -y, d0 = x;
      // c = c0 + t a in [-H, H]; widen the t-window and filter.
      long long t1 = (-H - c0) / a, t2 = (H - c0) / a;
      long long tlo = std::min(t1, t2) - 2, thi = std::max(t1, t2) + 2;
      if (a > 0) {
        for (long long t = tlo; t <= thi; ++t) {
          long long c = c0 + t * a, d = d0 + t * b;
          if (c < -H || c > H || d < -H || d > H) continue;
          if (!visit(IntMat(a, b, c, d))) return;
        }
      } else {
        for (long long t = thi; t >= tlo; --t) {  // keep c ascending
          long long c = c0 + t * a, d = d0 + t * b;
          if (c < -H || c > H || d < -H || d > H) continue;
          if (!visit(IntMat(a, b, c, d))) return;
        }
      }
    }
  }
}

std::vector<IntMat> bounded_height_list(long H) {
  std::vector<IntMat> out;
  enumerate_bounded_height(H, [&](const IntMat& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

std::uint64_t bounded_height_count(long H) {
  std::uint64_t n = 0;
  enumerate_bounded_height(H, [&](const IntMat&) {
    ++n;
    return true;
  });
  return n;
}

void enumerate_gamma_p_bounded(long p, long H,
                               const std::function<bool(const IntMat&)>& visit) {
  // a = 1 + i p, d = 1 + j p, b = k p, c = l p with ad - bc = 1.
  for (long long a = 1 - (H / p + 1) * p; a <= H; a += p) {
    if (a < -H || a == 0) continue;
    for (long long b = -(H / p) * p; b <= H; b += p) {
      for (long long c = -(H / p) * p; c <= H; c += p) {
        long long num_hi = 1;  // d = (1 + bc)/a
        (void)num_hi;
        long long bc = b * c;
        if ((1 + bc) % a != 0) continue;
        long long d = (1 + bc) / a;
        if (d < -H || d > H) continue;
        if ((d - 1) % p != 0) continue;
        if (!visit(IntMat(a, b, c, d))) return;
      }
    }
  }
}

MinTraceResult min_semisimple_trace(long p, long H) {
  if (H < (long long)p * p)
    throw std::range_error("min_semisimple_trace: H must be >= p^2");
  std::optional<MinTraceResult> best;
  enumerate_gamma_p_bounded(p, H, [&](const IntMat& m) {
    bigint t = babs(m.trace());
    if (t == 2) return true;  // identity or parabolic
    if (!best || t < best->min_abs_trace) best = MinTraceResult{t, m};
    return true;
  });
  if (!best)
    throw std::range_error("min_semisimple_trace: no semisimple element in range");
  return *best;
}

std::pair<bigint, bigint> unipotent_fixed_vector(const IntMat& m) {
  IntMat n = m;
  if (n.trace() == -2) n = -m;  // projective representative with trace 2
  if (!(n.trace() == 2) || n.is_identity())
    throw std::domain_error("unipotent_fixed_vector: matrix not unipotent");
  bigint al = n.a - 1, be = n.b, ga = n.c;
  bigint u1, u2;
  if (al != 0 || be != 0) {
    u1 = be;
    u2 = -al;
  } else {
    u1 = n.d - 1;
    u2 = -ga;
  }
  bigint g = boost::multiprecision::gcd(babs(u1), babs(u2));
  if (g != 0) {
    u1 /= g;
    u2 /= g;
  }
  if (u1 < 0 || (u1 == 0 && u2 < 0)) {
    u1 = -u1;
    u2 = -u2;
  }
  return {u1, u2};
}

IntMat vector_transporter(std::pair<bigint, bigint> u,
                          std::pair<bigint, bigint> v) {
  // complete each primitive vector to a det-1 basis, B = V * U^{-1}
  auto complete = [](const std::pair<bigint, bigint>& w) {
    long long a = w.first.convert_to<long long>();
    long long b = w.second.convert_to<long long>();
    long long x, y;
    long long g = egcd(a, b, x, y);
    if (g != 1) throw std::domain_error("vector_transporter: vector not primitive");
    // a y' - b x' = 1 -> second column (-y? ...) choose (x2,y2) with
    // a*y2 - b*x2 = 1: from ax + by = 1 take x2 = -y, y2 = x.
    return IntMat(a, -y, b, x);
  };
  IntMat U = complete(u), V = complete(v);
  return V * U.inverse();
}

}  // namespace xp::arith
