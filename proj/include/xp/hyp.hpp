#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

// Hyperbolic plane: half-plane and disk models, isometries, distances,
// balls and the lens envelope used by the repulsion checks.
namespace xp::hyp {

using cplx = std::complex<double>;

enum class Model : std::uint8_t { HALFPLANE, DISK };

struct ModelPoint {
  Model model = Model::HALFPLANE;
  cplx coord{0.0, 1.0};

  ModelPoint() = default;
  ModelPoint(Model m, cplx z);

  bool same_model(const ModelPoint& o) const { return model == o.model; }
};

inline ModelPoint hp(cplx z) { return ModelPoint(Model::HALFPLANE, z); }
inline ModelPoint dk(cplx z) { return ModelPoint(Model::DISK, z); }

// Cayley transform z -> (z-i)/(z+i), fixed normalization: i -> 0, 0 -> -1.
ModelPoint cayley(const ModelPoint& a);
cplx cayley_to_disk(cplx z_halfplane);
cplx cayley_to_halfplane(cplx z_disk);

// Determinant-1 real 2x2 matrix acting by Mobius maps. In the DISK model the
// action is conjugated through the Cayley transform, so composition stays
// plain matrix multiplication in both models.
struct Isometry {
  double a = 1, b = 0, c = 0, d = 1;
  Model model = Model::HALFPLANE;

  Isometry() = default;
  Isometry(double a_, double b_, double c_, double d_,
           Model m = Model::HALFPLANE);

  Isometry inverse() const;
  double trace() const { return a + d; }
  Isometry compose(const Isometry& rhs) const;  // this after rhs
};

Isometry operator*(const Isometry& g, const Isometry& h);

ModelPoint apply(const Isometry& g, const ModelPoint& z);
cplx apply_halfplane(const Isometry& g, cplx z);

// Rotation by angle phi about the half-plane point w (counterclockwise).
Isometry rotation_about(cplx w_halfplane, double phi);
// Translation of length t along the geodesic through i with endpoints 0, oo.
Isometry axis_translation(double t);

enum class IsoClass : std::uint8_t { IDENTITY, ELLIPTIC, PARABOLIC, HYPERBOLIC };

struct TranslationLength {
  double length = 0.0;
  IsoClass cls = IsoClass::IDENTITY;
};

TranslationLength translation_length(const Isometry& g, double tol = 1e-9);

double dist(const ModelPoint& a, const ModelPoint& b);
double dist_halfplane(cplx z, cplx w);
double dist_disk(cplx z, cplx w);

// max metric on products, coordinatewise over 2n-tuples
double product_dist(const std::vector<ModelPoint>& xs,
                    const std::vector<ModelPoint>& ys);

struct EuclideanDisk {
  cplx center{0.0, 0.0};
  double radius = 0.0;
  bool contains(cplx z, double tol = 0.0) const {
    return std::abs(z - center) <= radius + tol;
  }
};

// Euclidean footprint of the hyperbolic ball B(center, r) in the disk model.
EuclideanDisk hyperbolic_ball_as_euclidean(const ModelPoint& center, double r);

// Envelope of B(z, D+R) n B(z', D+R) for d(z,z') = 2D, from the sqrt(s)
// construction: a hyperbolic ball about the midpoint of radius
// 2 artanh(sqrt(tanh(R/2))).
struct BallEnvelope {
  ModelPoint center;      // hyperbolic midpoint of z, z'
  double hyp_radius = 0;  // 2 artanh(sqrt(tanh(R/2)))
  EuclideanDisk euclid;   // same ball as a euclidean disk (disk model)
};

BallEnvelope ball_intersection_envelope(const ModelPoint& z,
                                        const ModelPoint& z2, double D,
                                        double R, double tol = 1e-9);

// Hyperbolic midpoint of two points.
ModelPoint midpoint(const ModelPoint& a, const ModelPoint& b);

// Disk-model isometry sending a -> 0 (as abstract half-plane matrix paired
// with the DISK tag).
Isometry disk_translation_to_origin(cplx a_disk);

double area_of_ball(double r);  // 4 pi sinh^2(r/2)

}  // namespace xp::hyp
