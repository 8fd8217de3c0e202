#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xp/intmat.hpp"

// Linear algebra over F_p (p an odd prime > 3) in the 2x2 matrix space,
// PSL2/PGL2 classes, centralizers, commutator systems, P^1 actions.
namespace xp::arith {

struct Fp {
  long p;
  explicit Fp(long p_);
  std::uint32_t reduce(const bigint& x) const;
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return (a + b) % p; }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return (a + p - b) % p; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return (std::uint64_t)a * b % p;
  }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p - a; }
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  bool is_square(std::uint32_t a) const;  // true for 0 and quadratic residues
  // centered residue in (-p/2, p/2]
  long centered(std::uint32_t a) const {
    return (long)a <= p / 2 ? (long)a : (long)a - p;
  }
};

struct MatFp {
  std::uint32_t a = 1, b = 0, c = 0, d = 1;
  long p = 5;

  MatFp() = default;
  MatFp(std::uint32_t a_, std::uint32_t b_, std::uint32_t c_, std::uint32_t d_, long p_);
  static MatFp identity(long p) { return MatFp(1, 0, 0, 1, p); }
  static MatFp reduce(const IntMat& m, long p);
  static MatFp scalar(std::uint32_t s, long p) { return MatFp(s, 0, 0, s, p); }

  std::uint32_t det() const;
  std::uint32_t trace() const { return (a + d) % p; }
  MatFp operator*(const MatFp& r) const;
  MatFp operator+(const MatFp& r) const;
  MatFp operator-(const MatFp& r) const;
  MatFp scaled(std::uint32_t s) const;
  MatFp adjugate() const;  // projective inverse for invertible classes
  MatFp inverse() const;   // requires invertible
  bool operator==(const MatFp& r) const = default;
  bool is_scalar() const { return b == 0 && c == 0 && a == d; }
  bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }

  std::array<std::uint32_t, 4> vec() const { return {a, b, c, d}; }
  std::string str() const;
};

// Projective class of an invertible MatFp; canonical form scales the first
// nonzero entry in reading order to 1. Models PGL2(F_p); the subset with
// square determinant class is PSL2(F_p).
struct ProjMatFp {
  MatFp m;  // canonical representative

  ProjMatFp() = default;
  explicit ProjMatFp(const MatFp& raw);
  static ProjMatFp identity(long p) { return ProjMatFp(MatFp::identity(p)); }
  static ProjMatFp reduce(const IntMat& M, long p) {
    return ProjMatFp(MatFp::reduce(M, p));
  }

  long p() const { return m.p; }
  ProjMatFp operator*(const ProjMatFp& r) const { return ProjMatFp(m * r.m); }
  ProjMatFp inverse() const { return ProjMatFp(m.adjugate()); }
  bool operator==(const ProjMatFp& r) const = default;
  bool is_identity() const { return m == MatFp::identity(m.p); }
  bool in_psl2() const;  // determinant class is a square
  std::uint32_t packed() const;  // order key, < p^4
  std::string str() const { return m.str(); }
  int order() const;  // element order in PGL2
};

struct ProjHash {
  std::size_t operator()(const ProjMatFp& g) const {
    return std::hash<std::uint64_t>()(((std::uint64_t)g.p() << 32) | g.packed());
  }
};

// All of PSL2(F_p) in canonical packed order; size p(p^2-1)/2.
std::vector<ProjMatFp> enumerate_psl2(long p);

// Subspace of the 4-dimensional F_p matrix space, stored as an RREF basis.
struct FpSubspace {
  long p = 5;
  std::vector<std::array<std::uint32_t, 4>> basis;  // row-echelon, reduced

  static FpSubspace span(const std::vector<MatFp>& gens, long p);
  int dim() const { return (int)basis.size(); }
  bool contains(const MatFp& m) const;
  MatFp basis_mat(int i) const;
  bool operator==(const FpSubspace& r) const = default;
};

// {g : gs = sg for all s in S}
FpSubspace centralizer(const std::vector<MatFp>& S, long p);

enum class AlgebraClass : std::uint8_t {
  SCALARS,
  SPLIT_TORUS,
  NONSPLIT_TORUS,
  NILPOTENT_EXT,
  OTHER,
};

struct AlgebraClassification {
  AlgebraClass cls = AlgebraClass::OTHER;
  std::string diagnostic;
};

AlgebraClassification classify_subalgebra(const FpSubspace& T);

// Solution space of [t,g] = 0 and [t, My^{-1} g Mx] = 0 in M_2(F_p).
FpSubspace solve_commutator_system(const MatFp& t, const IntMat& Mx,
                                   const IntMat& My, long p);

// True iff <My^{-1} Mx, My^{-1} t Mx> is contained in <1, t>, decided by
// vanishing mod p of 3x3 minors computed over Z.
bool redundancy_test(const MatFp& t, const IntMat& Mx, const IntMat& My, long p);

struct LiftAB {
  long a = 0, b = 0;
  long m = 0;  // a^2 + b^2
};

// Decompose the presented generator as a + b t0 (t0 = [[0,1],[-1,0]] mod p)
// with centered residues. Throws if the generator is outside span{1, t0}.
LiftAB small_integral_lift(const MatFp& generator);
LiftAB small_integral_lift(const FpSubspace& line);
// Projectively minimal variant: scan scalar multiples for the least m.
LiftAB minimal_hecke_lift(const FpSubspace& line);

// P^1(F_p): values 0..p-1 are (x:1), p is infinity (1:0).
using P1Point = std::uint32_t;
P1Point p1_infinity(long p);
std::vector<P1Point> p1_points(long p);
P1Point p1_action(const ProjMatFp& g, P1Point x);
// Fixed point of a nontrivial unipotent class.
P1Point unipotent_fixed_point(const ProjMatFp& u);

struct ConstraintResult {
  bool consistent = true;
  std::vector<std::pair<P1Point, P1Point>> pinned;  // distinct source -> target
  std::optional<ProjMatFp> unique_g;                // set when >= 3 sources pin g
};

// Each (M1, M2) pins g * (M2 . inf) = M1 . inf.
ConstraintResult double_coset_constraints(
    const std::vector<std::pair<IntMat, IntMat>>& pairs, long p);

// Mobius class through three distinct points: 0,1,inf -> q1,q2,q3.
ProjMatFp mobius_through(P1Point q1, P1Point q2, P1Point q3, long p);

struct TransporterResult {
  IntMat B;
  ProjMatFp residual;  // A * B^{-1} mod p, normalizes <M2>
};

// B in SL2(Z) taking the fixed vector of M1 to that of M2, with the mod-p
// verification that A B^{-1} normalizes the unipotent subgroup of M2.
// Returns nullopt when the hypothesis fails.
std::optional<TransporterResult> unipotent_transporter(const IntMat& M1,
                                                       const IntMat& M2,
                                                       const ProjMatFp& A);

}  // namespace xp::arith
