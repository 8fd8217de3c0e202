#include "xp/schwarz.hpp"

#include <cmath>

namespace xp::modular {

using hyp::cayley_to_disk;
using hyp::cayley_to_halfplane;
using hyp::dist_halfplane;
using tiling::gamma_p_of_intmat;
using arith::IntMat;

namespace {

constexpr double kSeriesEps = 1e-16;

// direct Gauss series, practical for |w| <= ~0.8
cplx series_2f1(double a, double b, double c, cplx w) {
  cplx term(1, 0), sum(1, 0);
  for (int n = 0; n < 2000; ++n) {
    term *= (a + n) * (b + n) / (c + n) / (n + 1.0) * w;
    sum += term;
    if (std::abs(term) < kSeriesEps * std::abs(sum) && n > 4) break;
  }
  return sum;
}

cplx series_2f1_deriv(double a, double b, double c, cplx w) {
  return a * b / c * series_2f1(a + 1, b + 1, c + 1, w);
}

// analytic continuation by Taylor recentering along a radial-ish path
cplx continue_2f1(double a, double b, double c, cplx target) {
  cplx cur = 0.45 * target / std::abs(target);
  cplx F = series_2f1(a, b, c, cur);
  cplx Fp = series_2f1_deriv(a, b, c, cur);
  int guard = 0;
  while (std::abs(cur - target) > 1e-300 && ++guard < 300) {
    double rad = 0.5 * std::min(std::abs(cur), std::abs(cur - 1.0));
    cplx delta = target - cur;
    if (std::abs(delta) > rad) delta *= rad / std::abs(delta);
    // Taylor coefficients from the hypergeometric ODE at the current center
    cplx A = cur * (1.0 - cur), B = 1.0 - 2.0 * cur, C = -1.0;
    cplx D = c - (a + b + 1) * cur, E = -(a + b + 1.0), G = -a * b;
    constexpr int N = 64;
    cplx f[N + 2];
    f[0] = F;
    f[1] = Fp;
    for (int n = 0; n + 2 <= N + 1; ++n) {
      f[n + 2] = -((B * (double)n + D) * (double)(n + 1) * f[n + 1] +
                   (C * (double)(n * (n - 1)) + E * (double)n + G) * f[n]) /
                 (A * (double)((n + 2) * (n + 1)));
    }
    cplx val(0, 0), dval(0, 0), pw(1, 0);
    for (int n = 0; n <= N; ++n) {
      val += f[n] * pw;
      dval += f[n + 1] * (double)(n + 1) * pw;
      pw *= delta;
    }
    F = val;
    Fp = dval;
    cur += delta;
  }
  return F;
}

double lg(double x) { return std::tgamma(x); }

}  // namespace

cplx hyp2f1(double a, double b, double c, cplx w) {
  if (std::abs(w) <= 0.7) return series_2f1(a, b, c, w);
  if (std::abs(1.0 - w) <= 0.7) {
    // A&S 15.3.6 (c - a - b not an integer)
    double cab = c - a - b;
    cplx u = 1.0 - w;
    double A = lg(c) * lg(cab) / (lg(c - a) * lg(c - b));
    double B = lg(c) * lg(-cab) / (lg(a) * lg(b));
    return A * series_2f1(a, b, 1 - cab, u) +
           B * std::pow(u, cplx(cab, 0)) * series_2f1(c - a, c - b, 1 + cab, u);
  }
  if (std::abs(w) >= 1.6) {
    // A&S 15.3.7 (a - b not an integer)
    cplx mw = -w;
    if (mw.real() < 0 && std::abs(mw.imag()) < 1e-300)
      mw += cplx(0, 1e-280);  // keep off the log cut
    double A = lg(c) * lg(b - a) / (lg(b) * lg(c - a));
    double B = lg(c) * lg(a - b) / (lg(a) * lg(c - b));
    cplx iw = 1.0 / w;
    return A * std::pow(mw, cplx(-a, 0)) * series_2f1(a, 1 - c + a, 1 - b + a, iw) +
           B * std::pow(mw, cplx(-b, 0)) * series_2f1(b, 1 - c + b, 1 - a + b, iw);
  }
  return continue_2f1(a, b, c, w);
}

cplx klein_j(cplx z) {
  if (z.imag() < 0.5) throw std::domain_error("klein_j: needs Im z >= 0.5");
  cplx q = std::exp(cplx(0, 2 * M_PI) * z);
  cplx e4(1, 0);
  cplx qn = q;
  for (int n = 1; n <= 60; ++n) {
    double n3 = (double)n * n * n;
    e4 += 240.0 * n3 * qn / (1.0 - qn);
    qn *= q;
    if (std::abs(qn) < 1e-30) break;
  }
  cplx prod(1, 0);
  qn = q;
  for (int n = 1; n <= 60; ++n) {
    cplx f = 1.0 - qn;
    cplx f2 = f * f, f4 = f2 * f2, f8 = f4 * f4;
    prod *= f8 * f8 * f8;  // (1-q^n)^24
    qn *= q;
    if (std::abs(qn) < 1e-30) break;
  }
  return e4 * e4 * e4 / (q * prod);
}

IntMat reduce_to_modular_domain(cplx z, cplx* out) {
  IntMat M;
  for (int iter = 0; iter < 400; ++iter) {
    double n = std::round(z.real());
    if (n != 0) {
      z -= n;
      M = IntMat(1, -(long)n, 0, 1) * M;
    }
    if (std::norm(z) < 1.0 - 1e-15) {
      z = -1.0 / z;
      M = IntMat(0, -1, 1, 0) * M;
      continue;
    }
    if (std::abs(z.real()) <= 0.5 + 1e-15) {
      if (out) *out = z;
      return M;
    }
  }
  throw std::runtime_error("reduce_to_modular_domain: did not converge");
}

TriangleMap::TriangleMap(const TriangleGeometry& geom) : geom_(geom) {
  long p = geom.p;
  a_ = 0.5 * (1.0 / 6 - 1.0 / p);
  b_ = 0.5 * (1.0 / 6 + 1.0 / p);
  c_ = 2.0 / 3;

  // vertices of the unnormalized Schwarz image psi(upper w half-plane)
  cplx psi0(0, 0);
  double F1_at1 = lg(c_) * lg(c_ - a_ - b_) / (lg(c_ - a_) * lg(c_ - b_));
  double F2_at1 = lg(4.0 / 3) * lg(0.5) / (lg(1.0 - a_) * lg(1.0 - b_));
  cplx psi1(F2_at1 / F1_at1, 0);
  // j maps the right half-domain interior onto the lower w half-plane, so
  // psi is normalized there: the cusp vertex sits at phase -pi/3.
  double A1 = lg(c_) * lg(b_ - a_) / (lg(b_) * lg(c_ - a_));
  double A2 = lg(4.0 / 3) * lg(b_ - a_) / (lg(b_ + 1.0 / 3) * lg(1.0 - a_));
  cplx psiInf = std::polar(A2 / A1, -M_PI / 3);

  cplx q_rho = cayley_to_disk(geom.v_rho);
  cplx q_i(0, 0);
  cplx q_cusp((geom.yp - 1.0) / (geom.yp + 1.0), 0);

  auto normalizer = [](cplx z0, cplx z1, cplx zinf, cplx m[4]) {
    // Mobius with z0 -> 0, z1 -> 1, zinf -> inf
    m[0] = z1 - zinf;
    m[1] = -z0 * (z1 - zinf);
    m[2] = z1 - z0;
    m[3] = -zinf * (z1 - z0);
  };
  cplx Ns[4], Nd[4];
  normalizer(psi0, psi1, psiInf, Ns);
  normalizer(q_rho, q_i, q_cusp, Nd);
  // mob_ = Nd^{-1} * Ns
  cplx ia = Nd[3], ib = -Nd[1], ic = -Nd[2], id = Nd[0];
  mob_[0] = ia * Ns[0] + ib * Ns[2];
  mob_[1] = ia * Ns[1] + ib * Ns[3];
  mob_[2] = ic * Ns[0] + id * Ns[2];
  mob_[3] = ic * Ns[1] + id * Ns[3];
}

cplx TriangleMap::psi(cplx w) const {
  if (std::abs(w) >= 1.6) {
    // large-w balance with the common powers kept factored
    cplx mw = -w;
    if (mw.real() < 0 && std::abs(mw.imag()) < 1e-300) mw += cplx(0, 1e-280);
    cplx iw = 1.0 / w;
    double nu = b_ - a_;  // 1/p
    double A1 = lg(c_) * lg(nu) / (lg(b_) * lg(c_ - a_));
    double B1 = lg(c_) * lg(-nu) / (lg(a_) * lg(c_ - b_));
    double A2 = lg(4.0 / 3) * lg(nu) / (lg(b_ + 1.0 / 3) * lg(1.0 - a_));
    double B2 = lg(4.0 / 3) * lg(-nu) / (lg(a_ + 1.0 / 3) * lg(1.0 - b_));
    // second-solution parameters: a' = a + 1/3, b' = b + 1/3, c' = 4/3
    cplx s1a = series_2f1(a_, a_ + 1.0 / 3, 1 - nu, iw);
    cplx s1b = series_2f1(b_, b_ + 1.0 / 3, 1 + nu, iw);
    cplx s2a = series_2f1(a_ + 1.0 / 3, a_, 1 - nu, iw);
    cplx s2b = series_2f1(b_ + 1.0 / 3, b_, 1 + nu, iw);
    cplx wpow = std::pow(mw, cplx(-nu, 0));
    cplx phase = std::pow(w, cplx(1.0 / 3, 0)) * std::pow(mw, cplx(-1.0 / 3, 0));
    return phase * (A2 * s2a + B2 * wpow * s2b) / (A1 * s1a + B1 * wpow * s1b);
  }
  cplx F1 = hyp2f1(a_, b_, c_, w);
  cplx F2 = hyp2f1(a_ + 1.0 / 3, b_ + 1.0 / 3, 4.0 / 3, w);
  return std::pow(w, cplx(1.0 / 3, 0)) * F2 / F1;
}

cplx TriangleMap::map_halfdomain(cplx z) const {
  // exact normalization at the corners (the chart has root-type branches
  // there, so the generic path loses half/third of the digits)
  if (std::abs(z - cplx(0, 1)) < 1e-12) return cplx(0, 1);
  if (std::abs(z - std::polar(1.0, M_PI / 3)) < 1e-12) return geom_.v_rho;
  cplx w = klein_j(z) / 1728.0;
  // boundary values are real; take them from the lower side consistently
  if (w.imag() > -1e-13 * (1.0 + std::abs(w.real())))
    w = cplx(w.real(), -1e-12 * (1.0 + std::abs(w.real())));
  cplx s = psi(w);
  cplx d = (mob_[0] * s + mob_[1]) / (mob_[2] * s + mob_[3]);
  return cayley_to_halfplane(d);
}

cplx TriangleMap::map_fundamental(cplx z) const {
  bool mirror = z.real() < 0;
  cplx zz = mirror ? -std::conj(z) : z;
  cplx f = map_halfdomain(zz);
  return mirror ? -std::conj(f) : f;
}

cplx TriangleMap::map_global(cplx z) const {
  cplx z0;
  IntMat M = reduce_to_modular_domain(z, &z0);
  cplx f0 = map_fundamental(z0);
  auto word = gamma_p_of_intmat(M, geom_);
  return hyp::apply_halfplane(word.iso.inverse(), f0);
}

double TriangleMap::metric_ratio(cplx z) const {
  cplx z0;
  reduce_to_modular_domain(z, &z0);
  double h = 1e-6;
  cplx f1 = map_fundamental(z0 + h), f2 = map_fundamental(z0 - h);
  cplx deriv = (f1 - f2) / (2 * h);
  cplx f0 = map_fundamental(z0);
  double r = std::abs(deriv) * z0.imag() / f0.imag();
  return r * r;
}

CuspCoordinates d_cusp_and_d_im(cplx z, const TriangleMap& F) {
  const TriangleGeometry& g = F.geometry();
  cplx z0;
  reduce_to_modular_domain(z, &z0);
  CuspCoordinates out;
  out.d_im = z0.imag();
  cplx f = F.map_fundamental(z0);
  double d0 = dist_halfplane(f, g.v_cusp);
  double r_search = std::min(d0, 2 * g.circumradius + 0.5) + 0.25;
  out.d_cusp = std::min(tiling::dist_to_vertex_orbit(g, f, r_search), d0);
  return out;
}

namespace {
double halton(std::size_t i, int base) {
  double f = 1, r = 0;
  while (i) {
    f /= base;
    r += f * (double)(i % base);
    i /= base;
  }
  return r;
}
}  // namespace

MetricComparisonReport metric_comparison_check(const TriangleMap& F,
                                               std::size_t n_samples,
                                               unsigned seed, double tol) {
  MetricComparisonReport rep;
  rep.max_ratio = 0;
  rep.min_margin = std::numeric_limits<double>::infinity();
  std::size_t idx = seed + 1;
  while (rep.samples < n_samples && idx < (std::size_t)seed + 40 * n_samples) {
    double x = halton(idx, 2) - 0.5;
    double y = 0.9 + 5.0 * std::pow(halton(idx, 3), 2.0);
    ++idx;
    cplx z(x, y);
    if (std::norm(z) < 1.0 + 1e-6) continue;
    if (std::abs(z - cplx(0, 1)) < 3e-2 ||
        std::abs(z - std::polar(1.0, M_PI / 3)) < 3e-2 ||
        std::abs(z - std::polar(1.0, 2 * M_PI / 3)) < 3e-2 ||
        0.5 - std::abs(z.real()) < 3e-3) {
      ++rep.skipped;
      continue;
    }
    double ratio, dc;
    try {
      ratio = F.metric_ratio(z);
      dc = d_cusp_and_d_im(z, F).d_cusp;
    } catch (const std::exception&) {
      ++rep.skipped;
      continue;
    }
    ++rep.samples;
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    rep.min_margin =
        std::min(rep.min_margin, ratio - std::pow(std::tanh(dc / 2), 2));
  }
  rep.pass = (rep.max_ratio <= 1.0 + tol) && (rep.min_margin >= -tol);
  return rep;
}

LemmaImFit lemma_im_fit(const TriangleMap& F, std::size_t n_samples, double lo,
                        double hi, unsigned seed) {
  LemmaImFit fit;
  const long p = F.geometry().p;
  for (std::size_t k = 0; k < n_samples; ++k) {
    double x = 0.9 * (halton(seed + k + 1, 2) - 0.5);
    double y = lo + (hi - lo) * halton(seed + k + 1, 3);
    cplx z(x, y);
    auto cc = d_cusp_and_d_im(z, F);
    double lhs = -2.0 * M_PI * cc.d_im / (double)p;
    double rhs = std::log(std::tanh(cc.d_cusp / 2));
    fit.fitted_C = std::max(fit.fitted_C, (double)p * std::abs(lhs - rhs));
    ++fit.samples;
  }
  return fit;
}

}  // namespace xp::modular
