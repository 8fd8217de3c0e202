#include "xp/hyp.hpp"

#include <cmath>

namespace xp::hyp {

namespace {

constexpr double kBoundaryTol = 1e-14;

double sq(double x) { return x * x; }

// arcosh(1+t) for t >= 0, stable near t = 0
double acosh1p(double t) {
  if (t < 0) t = 0;
  return std::log1p(t + std::sqrt(t * (t + 2.0)));
}

}  // namespace

ModelPoint::ModelPoint(Model m, cplx z) : model(m), coord(z) {
  if (m == Model::HALFPLANE) {
    if (!(z.imag() > 0.0))
      throw std::domain_error("half-plane point needs Im > 0");
  } else {
    if (!(std::abs(z) < 1.0 - kBoundaryTol))
      throw std::domain_error("disk point needs |z| < 1");
  }
}

cplx cayley_to_disk(cplx z) { return (z - cplx(0, 1)) / (z + cplx(0, 1)); }

cplx cayley_to_halfplane(cplx w) {
  return cplx(0, 1) * (cplx(1, 0) + w) / (cplx(1, 0) - w);
}

ModelPoint cayley(const ModelPoint& a) {
  if (a.model == Model::HALFPLANE) return dk(cayley_to_disk(a.coord));
  return hp(cayley_to_halfplane(a.coord));
}

Isometry::Isometry(double a_, double b_, double c_, double d_, Model m)
    : a(a_), b(b_), c(c_), d(d_), model(m) {
  double det = a * d - b * c;
  if (!(det > 0)) throw std::domain_error("isometry needs positive determinant");
  double s = 1.0 / std::sqrt(det);
  a *= s;
  b *= s;
  c *= s;
  d *= s;
  // quotient the sign ambiguity: first nonzero entry positive
  double lead = (a != 0.0) ? a : (b != 0.0) ? b : (c != 0.0) ? c : d;
  if (lead < 0) {
    a = -a;
    b = -b;
    c = -c;
    d = -d;
  }
}

Isometry Isometry::inverse() const { return Isometry(d, -b, -c, a, model); }

Isometry Isometry::compose(const Isometry& r) const {
  if (model != r.model) throw std::domain_error("isometry model mismatch");
  return Isometry(a * r.a + b * r.c, a * r.b + b * r.d, c * r.a + d * r.c,
                  c * r.b + d * r.d, model);
}

Isometry operator*(const Isometry& g, const Isometry& h) { return g.compose(h); }

cplx apply_halfplane(const Isometry& g, cplx z) {
  return (g.a * z + g.b) / (g.c * z + g.d);
}

ModelPoint apply(const Isometry& g, const ModelPoint& z) {
  if (g.model != z.model) throw std::domain_error("apply: model mismatch");
  cplx zh = (z.model == Model::DISK) ? cayley_to_halfplane(z.coord) : z.coord;
  cplx wh = apply_halfplane(g, zh);
  if (!(wh.imag() > kBoundaryTol))
    throw std::runtime_error("apply: image numerically on the boundary");
  if (z.model == Model::DISK) return dk(cayley_to_disk(wh));
  return hp(wh);
}

Isometry rotation_about(cplx w, double phi) {
  if (!(w.imag() > 0)) throw std::domain_error("rotation center must be in H");
  double u = w.real(), v = w.imag();
  double rv = std::sqrt(v);
  // E_w = [[sqrt v, u/sqrt v],[0, 1/sqrt v]] maps i -> w
  Isometry E(rv, u / rv, 0.0, 1.0 / rv);
  double ch = std::cos(phi / 2), sh = std::sin(phi / 2);
  Isometry K(ch, sh, -sh, ch);
  return E * K * E.inverse();
}

Isometry axis_translation(double t) {
  double e = std::exp(t / 2);
  return Isometry(e, 0, 0, 1 / e);
}

TranslationLength translation_length(const Isometry& g, double tol) {
  double t = std::abs(g.trace());
  TranslationLength out;
  if (t > 2.0 + tol) {
    out.length = 2.0 * std::acosh(t / 2.0);
    out.cls = IsoClass::HYPERBOLIC;
    return out;
  }
  out.length = 0.0;
  // distinguish identity / elliptic / parabolic
  double off = std::abs(g.b) + std::abs(g.c) + std::abs(g.a - g.d);
  if (t >= 2.0 - tol) {
    out.cls = (off < tol) ? IsoClass::IDENTITY : IsoClass::PARABOLIC;
  } else {
    out.cls = IsoClass::ELLIPTIC;
  }
  return out;
}

double dist_halfplane(cplx z, cplx w) {
  double t = std::norm(z - w) / (2.0 * z.imag() * w.imag());
  return acosh1p(t);
}

double dist_disk(cplx z, cplx w) {
  double num = std::abs(w - z);
  double den = std::abs(cplx(1, 0) - std::conj(z) * w);
  double q = num / den;
  if (q >= 1.0) throw std::domain_error("dist_disk: point on or past boundary");
  return 2.0 * std::atanh(q);
}

double dist(const ModelPoint& a, const ModelPoint& b) {
  if (a.model == b.model) {
    return a.model == Model::HALFPLANE ? dist_halfplane(a.coord, b.coord)
                                       : dist_disk(a.coord, b.coord);
  }
  ModelPoint bb = cayley(b);
  return dist(a, bb);
}

double product_dist(const std::vector<ModelPoint>& xs,
                    const std::vector<ModelPoint>& ys) {
  if (xs.size() != ys.size())
    throw std::domain_error("product_dist: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    m = std::max(m, dist(xs[i], ys[i]));
  return m;
}

EuclideanDisk hyperbolic_ball_as_euclidean(const ModelPoint& center, double r) {
  if (center.model != Model::DISK)
    throw std::domain_error("hyperbolic_ball_as_euclidean wants a DISK center");
  if (r < 0) throw std::domain_error("negative radius");
  double t = std::tanh(r / 2.0);
  cplx c = center.coord;
  double n = std::norm(c);
  double den = 1.0 - n * t * t;
  return EuclideanDisk{c * (1.0 - t * t) / den, t * (1.0 - n) / den};
}

Isometry disk_translation_to_origin(cplx a_disk) {
  // conjugate through Cayley: half-plane matrix sending the preimage of a to i
  cplx z = cayley_to_halfplane(a_disk);
  double u = z.real(), v = z.imag();
  double rv = std::sqrt(v);
  return Isometry(rv, u / rv, 0.0, 1.0 / rv).inverse();
}

ModelPoint midpoint(const ModelPoint& a, const ModelPoint& b) {
  // normalize a to 0 in the disk model, walk half the distance toward b
  ModelPoint ad = (a.model == Model::DISK) ? a : cayley(a);
  ModelPoint bd = (b.model == Model::DISK) ? b : cayley(b);
  Isometry g = disk_translation_to_origin(ad.coord);
  g.model = Model::DISK;
  ModelPoint b0 = apply(g, bd);
  double d = dist_disk(cplx(0, 0), b0.coord);
  if (d == 0.0) return a;
  cplx dir = b0.coord / std::abs(b0.coord);
  cplx m0 = dir * std::tanh(d / 4.0);
  ModelPoint m = apply(g.inverse(), dk(m0));
  return (a.model == Model::DISK) ? m : cayley(m);
}

BallEnvelope ball_intersection_envelope(const ModelPoint& z,
                                        const ModelPoint& z2, double D,
                                        double R, double tol) {
  if (R < 0) throw std::domain_error("envelope: R must be nonnegative");
  double d = dist(z, z2);
  if (std::abs(d - 2.0 * D) > tol)
    throw std::domain_error("envelope: dist(z,z') != 2D within tolerance");
  double s = std::tanh(R / 2.0);
  BallEnvelope out;
  out.center = midpoint(z, z2);
  out.hyp_radius = 2.0 * std::atanh(std::sqrt(s));
  ModelPoint cd =
      (out.center.model == Model::DISK) ? out.center : cayley(out.center);
  out.euclid = hyperbolic_ball_as_euclidean(cd, out.hyp_radius);
  return out;
}

double area_of_ball(double r) { return 4.0 * M_PI * sq(std::sinh(r / 2.0)); }

}  // namespace xp::hyp
