#pragma once

#include <complex>

#include "xp/triangle.hpp"

// Conformal map from the (2,3,infinity) fundamental domain onto the (2,3,p)
// one, evaluated through the classical j-function and Schwarz triangle
// quotients of hypergeometric series, plus the cusp-distance machinery
// built on it.
namespace xp::modular {

using hyp::cplx;
using tiling::TriangleGeometry;

// Gauss hypergeometric function, real parameters, complex argument;
// 6-zone Kummer transformations, principal branches.
cplx hyp2f1(double a, double b, double c, cplx w);

// Klein j-invariant via q-series (accurate for Im z >= 0.75).
cplx klein_j(cplx z);

// Reduce z into the standard fundamental domain of PSL2(Z); returns the
// matrix M with M z in the domain.
arith::IntMat reduce_to_modular_domain(cplx z, cplx* out = nullptr);

class TriangleMap {
 public:
  explicit TriangleMap(const TriangleGeometry& geom);

  // the normalized biholomorphism on the fundamental domain
  // (i -> i, corner e^{i pi/3} -> e^{i theta_p}, cusp -> i y_p)
  cplx map_fundamental(cplx z) const;

  // equivariant global lift H -> H (reduce by PSL2(Z), map, push back by the
  // corresponding (2,3,p) word)
  cplx map_global(cplx z) const;

  // metric density ratio h_{X(1)_p}-pullback / h_{Y(1)} at z (via |F'|)
  double metric_ratio(cplx z) const;

  const TriangleGeometry& geometry() const { return geom_; }

 private:
  cplx map_halfdomain(cplx z) const;  // Re z >= 0 branch
  cplx psi(cplx w) const;             // Schwarz quotient at the w-plane
  const TriangleGeometry& geom_;
  double a_, b_, c_;               // hypergeometric parameters
  cplx mob_[4];                    // Mobius normalization (complex 2x2)
};

struct CuspCoordinates {
  double d_cusp = 0;  // X(1)_p distance from F_p(z) to the cusp vertex orbit
  double d_im = 0;    // Im of the Delta_{2,3,infty} representative
};

CuspCoordinates d_cusp_and_d_im(cplx z, const TriangleMap& F);

struct MetricComparisonReport {
  bool pass = false;
  std::size_t samples = 0;
  std::size_t skipped = 0;
  double max_ratio = 0;       // should stay <= 1 + tol (Schwarz-Pick)
  double min_margin = 0;      // min of ratio - tanh^2(d_cusp/2)
};

MetricComparisonReport metric_comparison_check(const TriangleMap& F,
                                               std::size_t n_samples,
                                               unsigned seed, double tol = 1e-6);

struct LemmaImFit {
  double fitted_C = 0;   // max over samples of p * |lhs - rhs|
  std::size_t samples = 0;
};

// |-2 pi d_im / p - log tanh(d_cusp/2)| <= C / p over samples with
// d_im in [lo, hi].
LemmaImFit lemma_im_fit(const TriangleMap& F, std::size_t n_samples, double lo,
                        double hi, unsigned seed);

}  // namespace xp::modular
