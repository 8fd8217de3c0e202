#include "xp/triangle.hpp"

#include <cmath>
#include <deque>
#include <queue>

namespace xp::tiling {

using hyp::apply_halfplane;
using hyp::dist_halfplane;

namespace {

constexpr double kDedupTol = 1e-7;

Isometry iso_pow(const Isometry& g, int k) {
  Isometry acc;  // identity
  Isometry base = (k >= 0) ? g : g.inverse();
  int n = std::abs(k);
  for (int i = 0; i < n; ++i) acc = acc * base;
  return acc;
}

ProjMatFp proj_pow(const ProjMatFp& g, int k) {
  ProjMatFp acc = ProjMatFp::identity(g.p());
  ProjMatFp base = (k >= 0) ? g : g.inverse();
  int n = std::abs(k);
  for (int i = 0; i < n; ++i) acc = acc * base;
  return acc;
}

bool iso_close(const Isometry& g, const Isometry& h, double tol) {
  return std::abs(g.a - h.a) < tol && std::abs(g.b - h.b) < tol &&
         std::abs(g.c - h.c) < tol && std::abs(g.d - h.d) < tol;
}

}  // namespace

double GeodesicSegment::distance_to(cplx z) const {
  cplx w = apply_halfplane(to_axis, z);
  double r = std::abs(w);
  double phi = std::arg(w);
  if (r >= r1 && r <= r2) {
    double s = std::sin(phi);
    return std::acosh(1.0 / s);
  }
  return std::min(dist_halfplane(w, cplx(0, r1)), dist_halfplane(w, cplx(0, r2)));
}

bool TriangleGeometry::delta_contains(cplx z, double tol) const {
  if (std::abs(z) < 1.0 - tol) return false;
  if (std::abs(z - cplx(cR, 0)) > rho_side + tol) return false;
  if (std::abs(z - cplx(cL, 0)) > rho_side + tol) return false;
  return true;
}

double TriangleGeometry::dist_to_delta(cplx z) const {
  if (delta_contains(z)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : sides) best = std::min(best, s.distance_to(z));
  return best;
}

ProjMatFp TriangleGeometry::gen_image(Gen g, int power) const {
  switch (g) {
    case S2:
      return proj_pow(f2, power);
    case S3:
      return proj_pow(f3, power);
    default:
      return proj_pow(fp_, power);
  }
}

const Isometry& TriangleGeometry::gen_iso(Gen g) const {
  switch (g) {
    case S2:
      return sigma2;
    case S3:
      return sigma3;
    default:
      return sigmap;
  }
}

double angle_at(cplx P, cplx Q1, cplx Q2) {
  auto tangent = [](cplx A, cplx B) -> cplx {
    if (std::abs(A.real() - B.real()) < 1e-13) {
      cplx t(0, 1);
      return (B.imag() > A.imag()) ? t : -t;
    }
    double xc = (std::norm(B) - std::norm(A)) / (2.0 * (B.real() - A.real()));
    cplx t = cplx(0, 1) * (A - xc);  // rotate radius by 90 degrees
    t /= std::abs(t);
    double dot = t.real() * (B - A).real() + t.imag() * (B - A).imag();
    return (dot >= 0) ? t : -t;
  };
  cplx t1 = tangent(P, Q1), t2 = tangent(P, Q2);
  double dot = t1.real() * t2.real() + t1.imag() * t2.imag();
  dot = std::clamp(dot, -1.0, 1.0);
  return std::acos(dot);
}

TriangleGeometry compute_vertex_params(long p) {
  if (p < 7)
    throw std::domain_error(
        "compute_vertex_params: (2,3,p) is hyperbolic only for p >= 7");
  TriangleGeometry g;
  g.p = p;
  double sp = std::sin(M_PI / p);
  g.log_yp = std::acosh(0.5 / sp);
  g.yp = std::exp(g.log_yp);
  g.theta_p = std::asin(std::sin(M_PI / 3) / std::cos(M_PI / p));
  g.v_i = cplx(0, 1);
  g.v_cusp = cplx(0, g.yp);
  g.v_rho = std::polar(1.0, g.theta_p);

  g.sigma2 = hyp::rotation_about(g.v_i, M_PI);
  g.sigma3 = hyp::rotation_about(g.v_rho, 2.0 * M_PI / 3.0);
  g.sigmap = hyp::rotation_about(g.v_cusp, 2.0 * M_PI / p);

  Isometry prod = g.sigma2 * g.sigma3 * g.sigmap;
  if (!iso_close(prod, Isometry(), 1e-9))
    throw std::logic_error("triangle generators violate sigma2 sigma3 sigmap = 1");
  if (!iso_close(iso_pow(g.sigma2, 2), Isometry(), 1e-9) ||
      !iso_close(iso_pow(g.sigma3, 3), Isometry(), 1e-9) ||
      !iso_close(iso_pow(g.sigmap, (int)p), Isometry(), 1e-7))
    throw std::logic_error("triangle generator orders violated");

  g.f2 = ProjMatFp(arith::MatFp(0, (std::uint32_t)p - 1, 1, 0, p));
  g.fp_ = ProjMatFp(arith::MatFp(1, 1, 0, 1, p));
  g.f3 = g.f2.inverse() * g.fp_.inverse();

  g.base_point = cplx(0, std::sqrt(g.yp));

  double ct = std::cos(g.theta_p);
  g.cR = (1.0 - g.yp * g.yp) / (2.0 * ct);
  g.cL = -g.cR;
  g.rho_side = std::hypot(g.cR, g.yp);

  auto circle_side = [&](double xc, double rho, cplx e1, cplx e2) {
    double fp1 = xc + rho, fm = xc - rho;
    Isometry N(1.0, -fp1, 1.0, -fm);
    GeodesicSegment s;
    s.to_axis = N;
    double a = std::abs(apply_halfplane(N, e1));
    double b = std::abs(apply_halfplane(N, e2));
    s.r1 = std::min(a, b);
    s.r2 = std::max(a, b);
    return s;
  };
  cplx v_rho_l = std::polar(1.0, M_PI - g.theta_p);
  // two upper sides, two bottom arcs of the unit circle
  g.sides.push_back(circle_side(g.cR, g.rho_side, g.v_rho, g.v_cusp));
  g.sides.push_back(circle_side(g.cL, g.rho_side, v_rho_l, g.v_cusp));
  g.sides.push_back(circle_side(0.0, 1.0, g.v_i, g.v_rho));
  g.sides.push_back(circle_side(0.0, 1.0, v_rho_l, g.v_i));

  g.circumradius = 0.0;
  for (cplx v : {g.v_i, g.v_cusp, g.v_rho, v_rho_l})
    g.circumradius =
        std::max(g.circumradius, dist_halfplane(g.base_point, v));
  return g;
}

double triangle_area_quadrature(const TriangleGeometry& g, double tol) {
  // area of T (right half) with the form dx dy / y^2, integrated as
  // int (1/y_low(x) - 1/y_up(x)) dx between the boundary curves
  auto y_low = [&](double x) { return std::sqrt(std::max(1e-300, 1.0 - x * x)); };
  auto y_up = [&](double x) {
    // upper side circle centered cR radius rho_side
    double dx = x - g.cR;
    return std::sqrt(std::max(1e-300, g.rho_side * g.rho_side - dx * dx));
  };
  double xr = g.v_rho.real();
  // adaptive Simpson on f(x) = 1/y_low - 1/y_up over [0, xr]
  auto f = [&](double x) { return 1.0 / y_low(x) - 1.0 / y_up(x); };
  struct Rec {
    double a, b, fa, fm, fb, s;
  };
  auto simpson = [&](double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  };
  std::deque<Rec> st;
  double m0 = 0.5 * xr;
  st.push_back({0, xr, f(0), f(m0), f(xr),
                simpson(0, xr, f(0), f(m0), f(xr))});
  double total = 0;
  int guard = 0;
  while (!st.empty() && ++guard < 2000000) {
    Rec r = st.back();
    st.pop_back();
    double m = 0.5 * (r.a + r.b);
    double lm = 0.5 * (r.a + m), rm = 0.5 * (m + r.b);
    double flm = f(lm), frm = f(rm);
    double sl = simpson(r.a, m, r.fa, flm, r.fm);
    double sr = simpson(m, r.b, r.fm, frm, r.fb);
    if (std::abs(sl + sr - r.s) < 15.0 * tol * (r.b - r.a) / xr ||
        (r.b - r.a) < 1e-13) {
      total += sl + sr + (sl + sr - r.s) / 15.0;
    } else {
      st.push_back({r.a, m, r.fa, flm, r.fm, sl});
      st.push_back({m, r.b, r.fm, frm, r.fb, sr});
    }
  }
  return total;  // area of the single triangle T
}

TileWord identity_word(const TriangleGeometry& g) {
  TileWord w;
  w.iso = Isometry();
  w.fp = ProjMatFp::identity(g.p);
  return w;
}

TileWord extend(const TriangleGeometry& g, const TileWord& w, Gen gen, int power) {
  TileWord out;
  out.word = w.word;
  if (!out.word.empty() && out.word.back().gen == gen) {
    out.word.back().power += power;
    if (out.word.back().power == 0) out.word.pop_back();
  } else {
    out.word.push_back({gen, power});
  }
  out.iso = w.iso * iso_pow(g.gen_iso(gen), power);
  out.fp = w.fp * g.gen_image(gen, power);
  return out;
}

TileWord gamma_p_of_intmat(const IntMat& M, const TriangleGeometry& g) {
  using arith::bigint;
  TileWord w = identity_word(g);
  bigint a = M.a, b = M.b, c = M.c, d = M.d;
  auto round_div = [](const bigint& num, const bigint& den) {
    // nearest integer to num/den, half away from zero
    bigint two_num = 2 * num;
    bigint q = (two_num + (((num < 0) != (den < 0)) ? -den : den)) / (2 * den);
    return q;
  };
  while (c != 0) {
    bigint q = round_div(a, c);
    long qi = q.convert_to<long>();
    if (qi != 0) w = extend(g, w, SP, (int)qi);
    w = extend(g, w, S2, 1);
    // (a,b,c,d) <- S^{-1} T^{-q} (a,b,c,d)
    bigint na = c, nb = d, nc = -(a - q * c), nd = -(b - q * d);
    a = na;
    b = nb;
    c = nc;
    d = nd;
  }
  // now +-(1, b; 0, 1)
  bigint bpow = (a == 1) ? b : -b;
  if (bpow != 0) w = extend(g, w, SP, (int)bpow.convert_to<long>());
  ProjMatFp expect = ProjMatFp::reduce(M, g.p);
  if (!(w.fp == expect))
    throw std::logic_error("gamma_p_of_intmat: F_p image mismatch");
  return w;
}

FpWordTable::FpWordTable(const TriangleGeometry& g) : geom_(g) {
  std::deque<std::uint32_t> queue;
  ProjMatFp id = ProjMatFp::identity(g.p);
  parent_[id.packed()] = {id.packed(), {S2, 0}};
  queue.push_back(id.packed());
  std::unordered_map<std::uint32_t, ProjMatFp> elems;
  elems.emplace(id.packed(), id);
  const std::pair<Gen, int> moves[] = {
      {S2, 1}, {S3, 1}, {S3, -1}, {SP, 1}, {SP, -1}};
  while (!queue.empty()) {
    std::uint32_t cur = queue.front();
    queue.pop_front();
    ProjMatFp curm = elems.at(cur);
    for (auto [gen, pw] : moves) {
      ProjMatFp nxt = curm * geom_.gen_image(gen, pw);
      std::uint32_t key = nxt.packed();
      if (parent_.count(key)) continue;
      parent_[key] = {cur, {gen, pw}};
      elems.emplace(key, nxt);
      queue.push_back(key);
    }
  }
}

TileWord FpWordTable::word_for(const ProjMatFp& target) const {
  auto it = parent_.find(target.packed());
  if (it == parent_.end())
    throw std::domain_error("FpWordTable: target not in the image group");
  std::vector<WordToken> rev;
  std::uint32_t cur = target.packed();
  std::uint32_t idk = ProjMatFp::identity(geom_.p).packed();
  while (cur != idk) {
    const auto& [par, tok] = parent_.at(cur);
    rev.push_back(tok);
    cur = par;
  }
  TileWord w = identity_word(geom_);
  for (auto it2 = rev.rbegin(); it2 != rev.rend(); ++it2)
    w = extend(geom_, w, it2->gen, it2->power);
  if (!(w.fp == target)) throw std::logic_error("FpWordTable: rebuild mismatch");
  return w;
}

TileBallResult tile_ball(const TriangleGeometry& g, cplx center, double R,
                         const TileBallOptions& opt) {
  TileBallResult out;
  struct Node {
    TileWord w;
    cplx pos;
  };
  std::deque<Node> queue;
  // dedup: fp-class key -> positions seen
  std::unordered_map<std::uint32_t, std::vector<cplx>> seen;
  auto visit = [&](const TileWord& w) -> bool {
    cplx pos = apply_halfplane(w.iso, g.base_point);
    auto& lst = seen[w.fp.packed()];
    for (cplx q : lst)
      if (std::abs(q - pos) < kDedupTol * (1.0 + std::abs(pos))) return false;
    lst.push_back(pos);
    queue.push_back({w, pos});
    return true;
  };
  visit(identity_word(g));
  std::size_t visited = 1;
  bool budget_hit = false;
  const std::pair<Gen, int> moves[] = {
      {S2, 1}, {S3, 1}, {S3, -1}, {SP, 1}, {SP, -1}};
  double expand_R = R + g.circumradius + opt.slack;
  while (!queue.empty()) {
    Node n = queue.front();
    queue.pop_front();
    cplx pulled = apply_halfplane(n.w.iso.inverse(), center);
    if (g.dist_to_delta(pulled) <= R) {
      TileWord t = n.w;
      if (!opt.keep_words) t.word.clear();
      out.tiles.push_back(std::move(t));
    }
    if (dist_halfplane(center, n.pos) > expand_R) continue;
    if (visited >= opt.max_tiles) {
      budget_hit = true;
      continue;
    }
    for (auto [gen, pw] : moves) {
      TileWord nxt = extend(g, n.w, gen, pw);
      if (visit(nxt)) ++visited;
    }
  }
  out.complete = !budget_hit;
  return out;
}

TileWord locate(const TriangleGeometry& g, cplx z, std::size_t budget) {
  auto cmp = [](const std::pair<double, std::size_t>& a,
                const std::pair<double, std::size_t>& b) {
    return a.first > b.first;
  };
  std::vector<TileWord> store;
  std::priority_queue<std::pair<double, std::size_t>,
                      std::vector<std::pair<double, std::size_t>>,
                      decltype(cmp)>
      pq(cmp);
  std::unordered_map<std::uint32_t, std::vector<cplx>> seen;
  auto push = [&](const TileWord& w) {
    cplx pos = apply_halfplane(w.iso, g.base_point);
    auto& lst = seen[w.fp.packed()];
    for (cplx q : lst)
      if (std::abs(q - pos) < kDedupTol * (1.0 + std::abs(pos))) return;
    lst.push_back(pos);
    store.push_back(w);
    pq.push({dist_halfplane(pos, z), store.size() - 1});
  };
  push(identity_word(g));
  const std::pair<Gen, int> moves[] = {
      {S2, 1}, {S3, 1}, {S3, -1}, {SP, 1}, {SP, -1}};
  std::size_t expanded = 0;
  while (!pq.empty()) {
    auto [d, idx] = pq.top();
    pq.pop();
    TileWord cur = store[idx];
    cplx pulled = apply_halfplane(cur.iso.inverse(), z);
    if (g.delta_contains(pulled, 1e-9) || g.dist_to_delta(pulled) < 1e-9)
      return cur;
    if (++expanded > budget)
      throw std::runtime_error("locate: tile budget exhausted");
    for (auto [gen, pw] : moves) push(extend(g, cur, gen, pw));
  }
  throw std::logic_error("locate: search space exhausted");
}

double dist_on_Xp(const TriangleGeometry& g, cplx a, cplx b, double R_max,
                  const TileWord* word_b) {
  TileWord wb = word_b ? *word_b : locate(g, b);
  TileBallOptions opt;
  auto tb = tile_ball(g, a, R_max, opt);
  if (!tb.complete) throw std::runtime_error("dist_on_Xp: tile budget exhausted");
  ProjMatFp wbinv = wb.fp.inverse();
  Isometry wbiso_inv = wb.iso.inverse();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& h : tb.tiles) {
    if (!(h.fp * wbinv).is_identity()) continue;
    Isometry xi = h.iso * wbiso_inv;
    best = std::min(best, dist_halfplane(a, apply_halfplane(xi, b)));
  }
  if (best > R_max) return std::numeric_limits<double>::infinity();
  return best;
}

double dist_to_vertex_orbit(const TriangleGeometry& g, cplx z, double R_max,
                            cplx* nearest, ProjMatFp* tile_class) {
  auto tb = tile_ball(g, z, R_max, {});
  double best = std::numeric_limits<double>::infinity();
  for (const auto& h : tb.tiles) {
    cplx v = apply_halfplane(h.iso, g.v_cusp);
    double d = dist_halfplane(z, v);
    if (d < best) {
      best = d;
      if (nearest) *nearest = v;
      if (tile_class) *tile_class = h.fp;
    }
  }
  return best;
}

DisksepReport verify_disksep(const TriangleGeometry& g) {
  DisksepReport rep;
  rep.bound_paper = 2.0 * std::log((double)g.p) - 2.0;
  rep.bound_corrected = 2.0 * g.log_yp;
  double Rp = std::log((double)g.p) - 1.0;
  double Rc = g.log_yp - 1e-6;
  double R = std::max(Rp, Rc);
  auto tb = tile_ball(g, g.v_cusp, R, {});
  rep.tiles_in_ball = tb.tiles.size();
  double star_only = std::numeric_limits<double>::infinity();
  for (const auto& h : tb.tiles) {
    cplx v = apply_halfplane(h.iso, g.v_cusp);
    if (dist_halfplane(v, g.v_cusp) <= 1e-6) continue;  // star tile
    cplx pulled = apply_halfplane(h.iso.inverse(), g.v_cusp);
    double d = g.dist_to_delta(pulled);
    star_only = std::min(star_only, d);
    if (d <= Rp) ++rep.offending_paper;
    if (d <= Rc) ++rep.offending_corrected;
  }
  rep.star_only_radius = star_only;
  // separation statistic over distinct cusp lifts
  double R2 = std::max(rep.bound_paper, rep.bound_corrected) + 1.2;
  auto tb2 = tile_ball(g, g.v_cusp, R2, {});
  double sep = std::numeric_limits<double>::infinity();
  for (const auto& h : tb2.tiles) {
    cplx v = apply_halfplane(h.iso, g.v_cusp);
    double d = dist_halfplane(v, g.v_cusp);
    if (d > 1e-6) sep = std::min(sep, d);
  }
  rep.min_vertex_separation = sep;
  rep.pass_paper = (rep.offending_paper == 0) && (sep > rep.bound_paper);
  rep.pass_corrected =
      (rep.offending_corrected == 0) && (sep > rep.bound_corrected - 1e-9);
  return rep;
}

double injectivity_probe(const TriangleGeometry& g, cplx a, double R_max) {
  TileWord wa = locate(g, a);
  TileBallOptions opt;
  auto tb = tile_ball(g, a, R_max, opt);
  ProjMatFp wainv = wa.fp.inverse();
  Isometry waiso_inv = wa.iso.inverse();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& h : tb.tiles) {
    if (!(h.fp * wainv).is_identity()) continue;
    Isometry xi = h.iso * waiso_inv;
    if (iso_close(xi, Isometry(), 1e-8)) continue;
    best = std::min(best, dist_halfplane(a, apply_halfplane(xi, a)));
  }
  return best;
}

}  // namespace xp::tiling
