#include "xp/fp.hpp"

#include <algorithm>
#include <sstream>

namespace xp::arith {

namespace {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

using Row = std::vector<std::uint32_t>;

// In-place reduced row echelon form; returns pivot column per row.
std::vector<int> rref(std::vector<Row>& rows, const Fp& F) {
  std::vector<int> pivots;
  std::size_t r = 0;
  std::size_t ncols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t col = 0; col < ncols && r < rows.size(); ++col) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][col] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    std::uint32_t s = F.inv(rows[r][col]);
    for (auto& x : rows[r]) x = F.mul(x, s);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col] == 0) continue;
      std::uint32_t f = rows[i][col];
      for (std::size_t j = 0; j < ncols; ++j)
        rows[i][j] = F.sub(rows[i][j], F.mul(f, rows[r][j]));
    }
    pivots.push_back((int)col);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

// Null space basis of the system rows * x = 0 in F_p^ncols.
std::vector<Row> nullspace(std::vector<Row> rows, std::size_t ncols, const Fp& F) {
  auto pivots = rref(rows, F);
  std::vector<bool> is_pivot(ncols, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<Row> basis;
  for (std::size_t free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    Row v(ncols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i)
      v[pivots[i]] = F.neg(rows[i][free]);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::array<std::uint32_t, 4> to4(const Row& r) { return {r[0], r[1], r[2], r[3]}; }

}  // namespace

Fp::Fp(long p_) : p(p_) {
  if (p <= 3 || !is_prime(p)) throw std::domain_error("Fp: need a prime p > 3");
}

std::uint32_t Fp::reduce(const bigint& x) const {
  bigint r = x % p;
  if (r < 0) r += p;
  return r.convert_to<std::uint32_t>();
}

std::uint32_t Fp::pow(std::uint32_t a, std::uint64_t e) const {
  std::uint64_t base = a % p, acc = 1;
  while (e) {
    if (e & 1) acc = acc * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return (std::uint32_t)acc;
}

std::uint32_t Fp::inv(std::uint32_t a) const {
  if (a % p == 0) throw std::domain_error("Fp::inv(0)");
  return pow(a, (std::uint64_t)p - 2);
}

bool Fp::is_square(std::uint32_t a) const {
  a %= p;
  if (a == 0) return true;
  return pow(a, (std::uint64_t)(p - 1) / 2) == 1;
}

MatFp::MatFp(std::uint32_t a_, std::uint32_t b_, std::uint32_t c_,
             std::uint32_t d_, long p_)
    : a(a_ % p_), b(b_ % p_), c(c_ % p_), d(d_ % p_), p(p_) {
  Fp check(p_);  // validates p
}

MatFp MatFp::reduce(const IntMat& m, long p) {
  Fp F(p);
  return MatFp(F.reduce(m.a), F.reduce(m.b), F.reduce(m.c), F.reduce(m.d), p);
}

std::uint32_t MatFp::det() const {
  Fp F(p);
  return F.sub(F.mul(a, d), F.mul(b, c));
}

MatFp MatFp::operator*(const MatFp& r) const {
  Fp F(p);
  return MatFp(F.add(F.mul(a, r.a), F.mul(b, r.c)),
               F.add(F.mul(a, r.b), F.mul(b, r.d)),
               F.add(F.mul(c, r.a), F.mul(d, r.c)),
               F.add(F.mul(c, r.b), F.mul(d, r.d)), p);
}

MatFp MatFp::operator+(const MatFp& r) const {
  Fp F(p);
  return MatFp(F.add(a, r.a), F.add(b, r.b), F.add(c, r.c), F.add(d, r.d), p);
}

MatFp MatFp::operator-(const MatFp& r) const {
  Fp F(p);
  return MatFp(F.sub(a, r.a), F.sub(b, r.b), F.sub(c, r.c), F.sub(d, r.d), p);
}

MatFp MatFp::scaled(std::uint32_t s) const {
  Fp F(p);
  return MatFp(F.mul(a, s), F.mul(b, s), F.mul(c, s), F.mul(d, s), p);
}

MatFp MatFp::adjugate() const {
  Fp F(p);
  return MatFp(d, F.neg(b), F.neg(c), a, p);
}

MatFp MatFp::inverse() const {
  Fp F(p);
  std::uint32_t dt = det();
  if (dt == 0) throw std::domain_error("MatFp: singular");
  return adjugate().scaled(F.inv(dt));
}

std::string MatFp::str() const {
  std::ostringstream os;
  os << "[[" << a << "," << b << "],[" << c << "," << d << "]] mod " << p;
  return os.str();
}

ProjMatFp::ProjMatFp(const MatFp& raw) : m(raw) {
  if (raw.det() == 0) throw std::domain_error("ProjMatFp: singular matrix");
  Fp F(raw.p);
  std::uint32_t lead = raw.a ? raw.a : raw.b ? raw.b : raw.c ? raw.c : raw.d;
  m = raw.scaled(F.inv(lead));
}

bool ProjMatFp::in_psl2() const {
  Fp F(m.p);
  return F.is_square(m.det());
}

std::uint32_t ProjMatFp::packed() const {
  std::uint64_t p = (std::uint64_t)m.p;
  return (std::uint32_t)(((m.a * p + m.b) * p + m.c) * p + m.d);
}

int ProjMatFp::order() const {
  ProjMatFp acc = *this;
  for (int k = 1; k <= 2 * m.p + 4; ++k) {
    if (acc.is_identity()) return k;
    acc = acc * *this;
  }
  throw std::logic_error("ProjMatFp::order: not found");
}

std::vector<ProjMatFp> enumerate_psl2(long p) {
  Fp F(p);
  std::vector<ProjMatFp> out;
  out.reserve((std::size_t)p * (p * p - 1) / 2);
  // canonical forms (1,b,c,d) and (0,1,c,d); PSL2 = square determinant class
  for (std::uint32_t b = 0; b < (std::uint32_t)p; ++b)
    for (std::uint32_t c = 0; c < (std::uint32_t)p; ++c)
      for (std::uint32_t d = 0; d < (std::uint32_t)p; ++d) {
        MatFp m(1, b, c, d, p);
        std::uint32_t dt = m.det();
        if (dt == 0 || !F.is_square(dt)) continue;
        out.push_back(ProjMatFp(m));
      }
  for (std::uint32_t c = 1; c < (std::uint32_t)p; ++c) {
    std::uint32_t dt = F.neg(c);
    if (!F.is_square(dt)) continue;
    for (std::uint32_t d = 0; d < (std::uint32_t)p; ++d)
      out.push_back(ProjMatFp(MatFp(0, 1, c, d, p)));
  }
  std::sort(out.begin(), out.end(),
            [](const ProjMatFp& x, const ProjMatFp& y) {
              return x.packed() < y.packed();
            });
  return out;
}

FpSubspace FpSubspace::span(const std::vector<MatFp>& gens, long p) {
  Fp F(p);
  std::vector<Row> rows;
  for (const auto& g : gens) {
    if (g.p != p) throw std::domain_error("FpSubspace: modulus mismatch");
    rows.push_back({g.a, g.b, g.c, g.d});
  }
  rref(rows, F);
  FpSubspace s;
  s.p = p;
  for (auto& r : rows) s.basis.push_back(to4(r));
  return s;
}

bool FpSubspace::contains(const MatFp& m) const {
  Fp F(p);
  std::array<std::uint32_t, 4> v = m.vec();
  // reduce v against the echelon basis
  for (const auto& b : basis) {
    int lead = -1;
    for (int j = 0; j < 4; ++j)
      if (b[j] != 0) {
        lead = j;
        break;
      }
    if (lead < 0) continue;
    std::uint32_t f = F.mul(v[lead], F.inv(b[lead]));
    for (int j = 0; j < 4; ++j) v[j] = F.sub(v[j], F.mul(f, b[j]));
  }
  return v[0] == 0 && v[1] == 0 && v[2] == 0 && v[3] == 0;
}

MatFp FpSubspace::basis_mat(int i) const {
  const auto& b = basis.at(i);
  return MatFp(b[0], b[1], b[2], b[3], p);
}

namespace {

// rows of the linear map g -> tg - gt on vec(g) = (g11,g12,g21,g22)
std::vector<Row> commutator_rows(const MatFp& t) {
  Fp F(t.p);
  std::uint32_t t1 = t.a, t2 = t.b, t3 = t.c, t4 = t.d;
  std::vector<Row> rows;
  rows.push_back({0, F.neg(t3), t2, 0});
  rows.push_back({F.neg(t2), F.sub(t1, t4), 0, t2});
  rows.push_back({t3, 0, F.sub(t4, t1), F.neg(t3)});
  rows.push_back({0, t3, F.neg(t2), 0});
  return rows;
}

// 4x4 matrix of g -> L g R on vec(g)
std::array<std::array<std::uint32_t, 4>, 4> sandwich_matrix(const MatFp& L,
                                                            const MatFp& R) {
  std::array<std::array<std::uint32_t, 4>, 4> K{};
  for (int j = 0; j < 4; ++j) {
    MatFp E(j == 0, j == 1, j == 2, j == 3, L.p);
    MatFp im = L * E * R;
    auto v = im.vec();
    for (int i = 0; i < 4; ++i) K[i][j] = v[i];
  }
  return K;
}

}  // namespace

FpSubspace centralizer(const std::vector<MatFp>& S, long p) {
  Fp F(p);
  std::vector<Row> rows;
  for (const auto& s : S) {
    auto r = commutator_rows(s);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  if (rows.empty()) rows.push_back(Row(4, 0));
  auto basis = nullspace(std::move(rows), 4, F);
  std::vector<MatFp> gens;
  for (auto& v : basis) gens.push_back(MatFp(v[0], v[1], v[2], v[3], p));
  return FpSubspace::span(gens, p);
}

AlgebraClassification classify_subalgebra(const FpSubspace& T) {
  Fp F(T.p);
  AlgebraClassification out;
  MatFp I = MatFp::identity(T.p);
  if (T.dim() == 0) {
    out.diagnostic = "zero space";
    return out;
  }
  if (!T.contains(I)) {
    out.diagnostic = "does not contain the identity";
    return out;
  }
  for (int i = 0; i < T.dim(); ++i)
    for (int j = 0; j < T.dim(); ++j)
      if (!T.contains(T.basis_mat(i) * T.basis_mat(j))) {
        out.diagnostic = "not closed under multiplication";
        return out;
      }
  if (T.dim() == 1) {
    out.cls = AlgebraClass::SCALARS;
    return out;
  }
  if (T.dim() != 2) {
    out.diagnostic = "dimension " + std::to_string(T.dim());
    return out;
  }
  MatFp x = T.basis_mat(0);
  if (x.is_scalar()) x = T.basis_mat(1);
  if (x.is_scalar()) {
    out.diagnostic = "no non-scalar generator";
    return out;
  }
  // trace-free part y = x - (tr x / 2); y^2 = disc * I
  std::uint32_t half = F.inv(2);
  MatFp y = x - MatFp::scalar(F.mul(x.trace(), half), T.p);
  MatFp y2 = y * y;
  if (!y2.is_scalar()) {
    out.diagnostic = "square of trace-free part is not scalar";
    return out;
  }
  std::uint32_t disc = y2.a;
  if (disc == 0)
    out.cls = AlgebraClass::NILPOTENT_EXT;
  else if (F.is_square(disc))
    out.cls = AlgebraClass::SPLIT_TORUS;
  else
    out.cls = AlgebraClass::NONSPLIT_TORUS;
  return out;
}

FpSubspace solve_commutator_system(const MatFp& t, const IntMat& Mx,
                                   const IntMat& My, long p) {
  if (t.is_scalar())
    throw std::domain_error("solve_commutator_system: t must be non-scalar");
  Fp F(p);
  MatFp mx = MatFp::reduce(Mx, p);
  MatFp myi = MatFp::reduce(My.inverse(), p);
  auto rows = commutator_rows(t);
  auto K = sandwich_matrix(myi, mx);
  auto base = commutator_rows(t);
  for (const auto& r : base) {
    Row row(4, 0);
    for (int j = 0; j < 4; ++j) {
      std::uint32_t acc = 0;
      for (int k = 0; k < 4; ++k) acc = F.add(acc, F.mul(r[k], K[k][j]));
      row[j] = acc;
    }
    rows.push_back(std::move(row));
  }
  auto basis = nullspace(std::move(rows), 4, F);
  std::vector<MatFp> gens;
  for (auto& v : basis) gens.push_back(MatFp(v[0], v[1], v[2], v[3], p));
  return FpSubspace::span(gens, p);
}

bool redundancy_test(const MatFp& t, const IntMat& Mx, const IntMat& My, long p) {
  if (t.is_scalar())
    throw std::domain_error("redundancy_test: t must be non-scalar");
  Fp F(p);
  // centered integral lift of t
  IntMat T(F.centered(t.a), F.centered(t.b), F.centered(t.c), F.centered(t.d),
           false);
  IntMat Myi = My.inverse();
  IntMat A = Myi * Mx;           // My^{-1} Mx
  IntMat B = Myi * T * Mx;       // My^{-1} t Mx
  bigint v1[4] = {1, 0, 0, 1};
  bigint v2[4] = {T.a, T.b, T.c, T.d};
  auto in_span = [&](const IntMat& W) {
    bigint w[4] = {W.a, W.b, W.c, W.d};
    // all 3x3 minors of the 4x3 matrix [v1 v2 w] vanish mod p
    for (int skip = 0; skip < 4; ++skip) {
      int idx[3], k = 0;
      for (int i = 0; i < 4; ++i)
        if (i != skip) idx[k++] = i;
      bigint det = v1[idx[0]] * (v2[idx[1]] * w[idx[2]] - v2[idx[2]] * w[idx[1]]) -
                   v2[idx[0]] * (v1[idx[1]] * w[idx[2]] - v1[idx[2]] * w[idx[1]]) +
                   w[idx[0]] * (v1[idx[1]] * v2[idx[2]] - v1[idx[2]] * v2[idx[1]]);
      if (det % p != 0) return false;
    }
    return true;
  };
  return in_span(A) && in_span(B);
}

LiftAB small_integral_lift(const MatFp& g) {
  Fp F(g.p);
  if (g.a != g.d || (g.b + g.c) % (std::uint32_t)g.p != 0)
    throw std::invalid_argument("small_integral_lift: not in span{1, t0}");
  LiftAB out;
  out.a = F.centered(g.a);
  out.b = F.centered(g.b);
  out.m = out.a * out.a + out.b * out.b;
  return out;
}

LiftAB small_integral_lift(const FpSubspace& line) {
  if (line.dim() != 1)
    throw std::invalid_argument("small_integral_lift: need a 1-dimensional space");
  return small_integral_lift(line.basis_mat(0));
}

LiftAB minimal_hecke_lift(const FpSubspace& line) {
  if (line.dim() != 1)
    throw std::invalid_argument("minimal_hecke_lift: need a 1-dimensional space");
  MatFp g = line.basis_mat(0);
  Fp F(line.p);
  std::optional<LiftAB> best;
  for (std::uint32_t s = 1; s < (std::uint32_t)line.p; ++s) {
    LiftAB cand = small_integral_lift(g.scaled(s));
    if (!best || cand.m < best->m) best = cand;
  }
  return *best;
}

P1Point p1_infinity(long p) { return (P1Point)p; }

std::vector<P1Point> p1_points(long p) {
  std::vector<P1Point> v;
  for (long i = 0; i <= p; ++i) v.push_back((P1Point)i);
  return v;
}

P1Point p1_action(const ProjMatFp& g, P1Point x) {
  Fp F(g.p());
  std::uint32_t u, v;
  if (x == (P1Point)g.p()) {
    u = 1;
    v = 0;
  } else {
    u = x;
    v = 1;
  }
  std::uint32_t nu = F.add(F.mul(g.m.a, u), F.mul(g.m.b, v));
  std::uint32_t nv = F.add(F.mul(g.m.c, u), F.mul(g.m.d, v));
  if (nv == 0) return p1_infinity(g.p());
  return F.mul(nu, F.inv(nv));
}

P1Point unipotent_fixed_point(const ProjMatFp& u) {
  // double eigenvalue lambda with trace^2 = 4 det
  Fp F(u.p());
  const MatFp& m = u.m;
  std::uint32_t lam = F.mul(m.trace(), F.inv(2));
  if (F.sub(F.mul(m.trace(), m.trace()), F.mul(4, m.det())) != 0 ||
      u.is_identity())
    throw std::domain_error("unipotent_fixed_point: class is not unipotent");
  std::uint32_t x, y;
  if (m.b != 0 || m.a != lam) {
    x = m.b;
    y = F.sub(lam, m.a);
  } else {
    x = F.sub(lam, m.d);
    y = m.c;
  }
  if (y == 0) return p1_infinity(u.p());
  return F.mul(x, F.inv(y));
}

ProjMatFp mobius_through(P1Point q1, P1Point q2, P1Point q3, long p) {
  Fp F(p);
  auto homog = [&](P1Point q) -> std::array<std::uint32_t, 2> {
    if (q == (P1Point)p) return {1, 0};
    return {q, 1};
  };
  auto w1 = homog(q1), w2 = homog(q2), w3 = homog(q3);
  // solve [w3 | w1] (al, be)^T = w2
  std::uint32_t det = F.sub(F.mul(w3[0], w1[1]), F.mul(w3[1], w1[0]));
  if (det == 0) throw std::domain_error("mobius_through: points not distinct");
  std::uint32_t di = F.inv(det);
  std::uint32_t al = F.mul(di, F.sub(F.mul(w2[0], w1[1]), F.mul(w2[1], w1[0])));
  std::uint32_t be = F.mul(di, F.sub(F.mul(w3[0], w2[1]), F.mul(w3[1], w2[0])));
  be = F.neg(be);
  MatFp M(F.mul(al, w3[0]), F.mul(be, w1[0]), F.mul(al, w3[1]),
          F.mul(be, w1[1]), p);
  return ProjMatFp(M);
}

ConstraintResult double_coset_constraints(
    const std::vector<std::pair<IntMat, IntMat>>& pairs, long p) {
  ConstraintResult out;
  P1Point inf = p1_infinity(p);
  for (const auto& [M1, M2] : pairs) {
    P1Point src = p1_action(ProjMatFp::reduce(M2, p), inf);
    P1Point tgt = p1_action(ProjMatFp::reduce(M1, p), inf);
    bool seen = false;
    for (auto& [s, t] : out.pinned) {
      if (s == src) {
        seen = true;
        if (t != tgt) {
          out.consistent = false;
          out.pinned.clear();
          return out;
        }
      }
    }
    if (!seen) out.pinned.push_back({src, tgt});
  }
  if (out.pinned.size() >= 3) {
    ProjMatFp S = mobius_through(out.pinned[0].first, out.pinned[1].first,
                                 out.pinned[2].first, p);
    ProjMatFp T = mobius_through(out.pinned[0].second, out.pinned[1].second,
                                 out.pinned[2].second, p);
    ProjMatFp g = T * S.inverse();
    for (const auto& [s, t] : out.pinned) {
      if (p1_action(g, s) != t) {
        out.consistent = false;
        out.pinned.clear();
        return out;
      }
    }
    out.unique_g = g;
  }
  return out;
}

std::optional<TransporterResult> unipotent_transporter(const IntMat& M1,
                                                       const IntMat& M2,
                                                       const ProjMatFp& A) {
  if (!M1.is_unipotent() || !M2.is_unipotent()) return std::nullopt;
  long p = A.p();
  auto u = unipotent_fixed_vector(M1);
  auto v = unipotent_fixed_vector(M2);
  IntMat B = vector_transporter(u, v);
  ProjMatFp residual = A * ProjMatFp::reduce(B, p).inverse();
  P1Point fp2 = unipotent_fixed_point(ProjMatFp::reduce(M2, p));
  if (p1_action(residual, fp2) != fp2) return std::nullopt;
  return TransporterResult{B, residual};
}

}  // namespace xp::arith
