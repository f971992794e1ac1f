#include "markoff/counting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "markoff/check.hpp"
#include "markoff/poly.hpp"

namespace markoff::counting {

using ff::add_mod;
using ff::Ambient;
using ff::inv_mod;
using ff::mul_mod;
using ff::pow_mod;
using ff::qadd;
using ff::qinv;
using ff::qmul;
using ff::qsub;
using ff::sub_mod;
using ff::u128;

namespace {

std::vector<QuadExt> elements(const SubgroupSpec& s, const PrimeContext& ctx) {
  if (s.ambient == Ambient::Split) {
    std::vector<QuadExt> out;
    for (u64 x : elements_split(s, ctx)) out.push_back({x, 0});
    return out;
  }
  return elements_normone(s, ctx);
}

QuadExt scalar(u64 c) { return {c, 0}; }

// a t + b t^{-1}
QuadExt binomial_trace(u64 a, u64 b, const QuadExt& t,
                       const PrimeContext& ctx) {
  return qadd(qmul(scalar(a), t, ctx), qmul(scalar(b), qinv(t, ctx), ctx),
              ctx);
}

}  // namespace

FHKRecord count_fHK(u64 a, u64 b, const SubgroupSpec& H, const SubgroupSpec& K,
                    const PrimeContext& ctx) {
  require(a % ctx.p != 0 && b % ctx.p != 0, "count_fHK: a, b nonzero");
  FHKRecord rec;
  rec.a = a;
  rec.b = b;
  rec.sigma = mul_mod(a, b, ctx.p);
  rec.H = H;
  rec.K = K;

  std::vector<std::pair<u64, u64>> lhs;
  for (const QuadExt& t : elements(H, ctx)) {
    QuadExt v = binomial_trace(a, b, t, ctx);
    lhs.emplace_back(v.a, v.b);
  }
  std::sort(lhs.begin(), lhs.end());
  for (const QuadExt& y : elements(K, ctx)) {
    QuadExt v = binomial_trace(1, 1, y, ctx);
    auto [lo, hi] = std::equal_range(lhs.begin(), lhs.end(),
                                     std::make_pair(v.a, v.b));
    rec.count += static_cast<u64>(hi - lo);
  }
  require(rec.count <= 2 * std::min(H.order, K.order),
          "count_fHK: two-to-one bound violated");
  return rec;
}

u64 count_PH_direct(u64 a, u64 b, const SubgroupSpec& H,
                    const PrimeContext& ctx) {
  std::vector<u64> hist(ctx.p, 0);
  for (u64 k = 1; k < ctx.p - 1; ++k) {
    if (std::gcd(k, ctx.p - 1) != 1) continue;
    u64 y = pow_mod(ctx.g, k, ctx.p);
    ++hist[add_mod(y, inv_mod(y, ctx.p), ctx.p)];
  }
  u64 total = 0;
  for (const QuadExt& t : elements(H, ctx)) {
    QuadExt v = binomial_trace(a, b, t, ctx);
    if (v.b == 0) total += hist[v.a];
  }
  return total;
}

u64 count_PH_moebius(u64 a, u64 b, const SubgroupSpec& H,
                     const PrimeContext& ctx) {
  long long acc = 0;
  for (u64 d : ff::divisors(ctx.fact_pm1)) {
    int mu = ff::moebius(d);
    if (mu == 0) continue;
    auto Kd = ff::subgroup(Ambient::Split, (ctx.p - 1) / d, ctx);
    acc += mu * static_cast<long long>(count_fHK(a, b, H, Kd, ctx).count);
  }
  require(acc >= 0, "count_PH_moebius: negative inclusion-exclusion");
  return static_cast<u64>(acc);
}

PHRecord count_PH(u64 a, u64 b, const SubgroupSpec& H,
                  const PrimeContext& ctx) {
  PHRecord rec;
  rec.count = count_PH_direct(a, b, H, ctx);
  u64 alt = count_PH_moebius(a, b, H, ctx);
  require(rec.count == alt, "count_PH: direct and moebius counts differ");
  rec.main_term = static_cast<double>(H.order) *
                  static_cast<double>(ff::euler_phi(ctx.fact_pm1)) /
                  static_cast<double>(ctx.p - 1);
  return rec;
}

CurveCount count_split_curve(u64 a1, u64 a2, u64 e, u64 d,
                             const PrimeContext& ctx) {
  const u64 p = ctx.p;
  require(a1 % p != 0 && a2 % p != 0, "count_split_curve: a1, a2 nonzero");
  require(e >= 1 && d >= 1 && (p - 1) % e == 0 && (p - 1) % d == 0,
          "count_split_curve: exponents must divide p-1");

  std::vector<u64> hist(p, 0);
  for (u64 xi = 1; xi < p; ++xi) {
    u64 w = pow_mod(xi, d, p);
    ++hist[add_mod(w, inv_mod(w, p), p)];
  }
  CurveCount out;
  out.e_H = e;
  out.d_K = d;
  out.alpha1 = a1;
  out.alpha2 = a2;
  out.degenerate = mul_mod(a1, a2, p) == 1;
  for (u64 eta = 1; eta < p; ++eta) {
    u64 w = pow_mod(eta, e, p);
    u64 c = add_mod(mul_mod(a1, w, p), mul_mod(a2, inv_mod(w, p), p), p);
    out.n_points += hist[c];
  }

  auto H = ff::subgroup(Ambient::Split, (p - 1) / e, ctx);
  auto K = ff::subgroup(Ambient::Split, (p - 1) / d, ctx);
  u64 f = count_fHK(a1, a2, H, K, ctx).count;
  require(out.n_points == f * e * d,
          "count_split_curve: lifted count mismatch");
  out.f_value = f;
  out.deviation = std::abs(static_cast<double>(out.n_points) -
                           static_cast<double>(p)) /
                  (std::sqrt(static_cast<double>(p)) * static_cast<double>(e) *
                   static_cast<double>(d));
  return out;
}

u64 GHPoly::eval_g(u64 xi, u64 eta, const PrimeContext& ctx) const {
  u64 acc = 0;
  u64 epow = 1;
  std::vector<u64> xpow(n + 1);
  xpow[0] = 1;
  for (u64 j = 1; j <= n; ++j) xpow[j] = mul_mod(xpow[j - 1], xi, ctx.p);
  for (u64 j = 0; j <= n; ++j) {
    acc = add_mod(acc, mul_mod(g[j], mul_mod(xpow[n - j], epow, ctx.p), ctx.p),
                  ctx.p);
    epow = mul_mod(epow, eta, ctx.p);
  }
  return acc;
}

u64 GHPoly::eval_h(u64 xi, u64 eta, const PrimeContext& ctx) const {
  u64 acc = 0;
  u64 epow = 1;
  std::vector<u64> xpow(n + 1);
  xpow[0] = 1;
  for (u64 j = 1; j <= n; ++j) xpow[j] = mul_mod(xpow[j - 1], xi, ctx.p);
  for (u64 j = 0; j <= n; ++j) {
    acc = add_mod(acc, mul_mod(h[j], mul_mod(xpow[n - j], epow, ctx.p), ctx.p),
                  ctx.p);
    epow = mul_mod(epow, eta, ctx.p);
  }
  return acc;
}

GHPoly gh_poly(u64 n, const PrimeContext& ctx) {
  GHPoly cur;
  cur.n = 0;
  cur.g = {1};
  cur.h = {0};
  for (u64 step = 0; step < n; ++step) {
    GHPoly next;
    next.n = cur.n + 1;
    next.g.assign(next.n + 1, 0);
    next.h.assign(next.n + 1, 0);
    for (u64 j = 0; j <= cur.n; ++j) {
      // xi * g_n and xi * h_n keep the eta power
      next.g[j] = add_mod(next.g[j], cur.g[j], ctx.p);
      next.h[j] = add_mod(next.h[j], cur.h[j], ctx.p);
      // D eta * h_n and eta * g_n raise it
      next.g[j + 1] =
          add_mod(next.g[j + 1], mul_mod(ctx.D, cur.h[j], ctx.p), ctx.p);
      next.h[j + 1] = add_mod(next.h[j + 1], cur.g[j], ctx.p);
    }
    cur = std::move(next);
  }
  return cur;
}

CurveCount count_nonsplit_curve(u64 d1, u64 d2, const PrimeContext& ctx) {
  const u64 p = ctx.p;
  require(d1 >= 1 && (p + 1) % d1 == 0, "count_nonsplit_curve: d1 | p+1");
  require(d2 >= 1 && (p - 1) % d2 == 0, "count_nonsplit_curve: d2 | p-1");

  GHPoly gp = gh_poly(d1, ctx);
  std::vector<u64> hist(p, 0);
  for (u64 mu = 1; mu < p; ++mu) {
    u64 w = pow_mod(mu, d2, p);
    ++hist[add_mod(w, inv_mod(w, p), p)];
  }
  CurveCount out;
  out.e_H = d1;
  out.d_K = d2;
  QuadExt gen = ff::normone_generator(ctx);
  QuadExt z = {1, 0};
  for (u64 i = 0; i <= p; ++i) {
    out.n_points += hist[gp.eval_g(z.a, z.b, ctx)];
    z = qmul(z, gen, ctx);
  }

  // f counts (t, y) with t + 1/t = 2(y + 1/y) on the quotient subgroups
  auto H1 = ff::subgroup(Ambient::NormOne, (p + 1) / d1, ctx);
  auto K = ff::subgroup(Ambient::Split, (p - 1) / d2, ctx);
  u64 f = 0;
  std::vector<u64> rhs;
  for (u64 y : elements_split(K, ctx))
    rhs.push_back(mul_mod(2, add_mod(y, inv_mod(y, p), p), p));
  std::sort(rhs.begin(), rhs.end());
  for (const QuadExt& t : elements_normone(H1, ctx)) {
    u64 tr = add_mod(t.a, t.a, p);
    auto [lo, hi] = std::equal_range(rhs.begin(), rhs.end(), tr);
    f += static_cast<u64>(hi - lo);
  }
  require(out.n_points == d1 * d2 * f,
          "count_nonsplit_curve: lifted count mismatch");
  out.f_value = f;
  out.deviation =
      std::abs(static_cast<double>(out.n_points) - static_cast<double>(p)) /
      (std::sqrt(static_cast<double>(p)) * static_cast<double>(d1) *
       static_cast<double>(d2));
  return out;
}

TraceEqRecord count_eq_p41(u64 sigma, const SubgroupSpec& H1,
                           const SubgroupSpec& H2, const PrimeContext& ctx) {
  const u64 p = ctx.p;
  if (sigma % p == 1)
    throw std::invalid_argument("count_eq_p41: sigma = 1 rejected");
  TraceEqRecord rec;
  rec.sigma = sigma;
  rec.h1_order = H1.order;
  rec.h2_order = H2.order;

  std::vector<u64> lhs(p, 0), rhs(p, 0);
  for (const QuadExt& h : elements(H1, ctx)) {
    QuadExt v = binomial_trace(1, sigma, h, ctx);
    if (v.b == 0) ++lhs[v.a];
  }
  for (const QuadExt& h : elements(H2, ctx)) {
    QuadExt v = binomial_trace(1, 1, h, ctx);
    if (v.b == 0) ++rhs[v.a];
  }
  for (u64 c = 0; c < p; ++c) rec.count += lhs[c] * rhs[c];

  rec.trivial_bound_ok = rec.count <= 2 * std::min(H1.order, H2.order);
  u128 hh = static_cast<u128>(H1.order) * H2.order;
  u128 t = rec.count;
  rec.gcd_bound_ok = t * t * t <= 8000 * hh || t * p <= 20 * hh;
  return rec;
}

MiddlegameRecord middlegame_transform(u64 f1, u64 f2, u64 t, u64 sigma,
                                      const PrimeContext& ctx) {
  return middlegame_transform(scalar(f1), scalar(f2), scalar(t), sigma, ctx);
}

MiddlegameRecord middlegame_transform(const QuadExt& f1, const QuadExt& f2,
                                      const QuadExt& t, u64 sigma,
                                      const PrimeContext& ctx) {
  const u64 p = ctx.p;
  auto tilde = [&](const QuadExt& f) {
    require(!(f.a == 0 && f.b == 0), "middlegame_transform: zero element");
    require(f.b == 0 || ff::qnorm(f, ctx) == 1,
            "middlegame_transform: trace escapes the base field");
    QuadExt v = qadd(f, qinv(f, ctx), ctx);
    require(v.b == 0, "middlegame_transform: trace escapes the base field");
    return v.a;
  };
  MiddlegameRecord rec;
  rec.u = tilde(f1);
  rec.v = tilde(f2);
  rec.x = tilde(qmul(f1, f2, ctx));
  rec.y = tilde(qmul(f1, qinv(f2, ctx), ctx));
  rec.t_tilde = tilde(t);

  require(mul_mod(rec.u, rec.v, p) == add_mod(rec.x, rec.y, p),
          "middlegame_transform: uv = x + y fails");
  u64 uu_vv = add_mod(mul_mod(rec.u, rec.u, p), mul_mod(rec.v, rec.v, p), p);
  require(uu_vv == add_mod(mul_mod(rec.x, rec.y, p), 4 % p, p),
          "middlegame_transform: u^2 + v^2 = xy + 4 fails");

  u64 tt = rec.t_tilde;
  u64 tt2 = mul_mod(tt, tt, p);
  u64 one_minus = sub_mod(1, sigma, p);
  // u^2 + v^2 - t~ uv + sigma((t~)^2 - 4)
  u64 e22 = add_mod(
      sub_mod(uu_vv, mul_mod(tt, mul_mod(rec.u, rec.v, p), p), p),
      mul_mod(sigma, sub_mod(tt2, 4 % p, p), p), p);
  rec.eq22 = e22 == 0;
  // xy - t~(x + y) + sigma (t~)^2 + 4(1 - sigma)
  u64 beta = add_mod(mul_mod(sigma, tt2, p), mul_mod(4 % p, one_minus, p), p);
  u64 e23 = add_mod(
      sub_mod(mul_mod(rec.x, rec.y, p),
              mul_mod(tt, add_mod(rec.x, rec.y, p), p), p),
      beta, p);
  rec.eq23 = e23 == 0;
  rec.pole = rec.x == tt;
  rec.mobius_ok = !rec.pole &&
                  mul_mod(rec.y, sub_mod(rec.x, tt, p), p) ==
                      sub_mod(mul_mod(tt, rec.x, p), beta, p);
  return rec;
}

namespace {

struct Mat {
  std::array<QuadExt, 4> m;  // row major
  bool operator==(const Mat&) const = default;
};

Mat mmul(const Mat& A, const Mat& B, const PrimeContext& ctx) {
  Mat C;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      C.m[2 * i + j] = qadd(qmul(A.m[2 * i], B.m[j], ctx),
                            qmul(A.m[2 * i + 1], B.m[2 + j], ctx), ctx);
  return C;
}

QuadExt mdet(const Mat& A, const PrimeContext& ctx) {
  return qsub(qmul(A.m[0], A.m[3], ctx), qmul(A.m[1], A.m[2], ctx), ctx);
}

Mat minv(const Mat& A, const PrimeContext& ctx) {
  QuadExt di = qinv(mdet(A, ctx), ctx);
  const u64 p = ctx.p;
  auto neg = [&](const QuadExt& x) {
    return QuadExt{x.a ? p - x.a : 0, x.b ? p - x.b : 0};
  };
  Mat B;
  B.m = {qmul(A.m[3], di, ctx), qmul(neg(A.m[1]), di, ctx),
         qmul(neg(A.m[2]), di, ctx), qmul(A.m[0], di, ctx)};
  return B;
}

bool is_identity(const Mat& A) {
  return A.m[0] == QuadExt{1, 0} && A.m[1] == QuadExt{0, 0} &&
         A.m[2] == QuadExt{0, 0} && A.m[3] == QuadExt{1, 0};
}

// g_t = [[sigma(1+sigma) t + 4(1-sigma)/t, -sigma^2 t^2 + 4(1-sigma)^2],
//        [1, 0]]
Mat g_of_t(const QuadExt& t, u64 sigma, const PrimeContext& ctx) {
  const u64 p = ctx.p;
  u64 one_minus = sub_mod(1, sigma, p);
  u64 c1 = mul_mod(sigma, add_mod(1, sigma, p), p);
  u64 c2 = mul_mod(4 % p, one_minus, p);
  QuadExt a = qadd(qmul(scalar(c1), t, ctx),
                   qmul(scalar(c2), qinv(t, ctx), ctx), ctx);
  u64 s2 = mul_mod(sigma, sigma, p);
  u64 q2 = mul_mod(mul_mod(4 % p, one_minus, p), one_minus, p);
  QuadExt b = qsub(scalar(q2), qmul(scalar(s2), qmul(t, t, ctx), ctx), ctx);
  Mat g;
  g.m = {a, b, QuadExt{1, 0}, QuadExt{0, 0}};
  return g;
}

Mat commutator(const Mat& A, const Mat& B, const PrimeContext& ctx) {
  return mmul(mmul(A, B, ctx), mmul(minv(A, ctx), minv(B, ctx), ctx), ctx);
}

Mat word_of(const std::array<Mat, 4>& g, const PrimeContext& ctx) {
  Mat w = commutator(g[0], g[1], ctx);
  w = mmul(w, commutator(g[2], g[3], ctx), ctx);
  w = mmul(w, commutator(g[1], g[0], ctx), ctx);
  w = mmul(w, commutator(g[3], g[2], ctx), ctx);
  return w;
}

bool singular_t(const QuadExt& t, u64 sigma, const PrimeContext& ctx) {
  if (t.a == 0 && t.b == 0) return true;
  return mdet(g_of_t(t, sigma, ctx), ctx) == QuadExt{0, 0};
}

bool word_witness(u64 sigma, const PrimeContext& ctx,
                  const std::array<QuadExt, 4>& ts) {
  std::array<Mat, 4> g;
  for (int i = 0; i < 4; ++i) g[i] = g_of_t(ts[i], sigma, ctx);
  return !is_identity(word_of(g, ctx));
}

}  // namespace

PhiReport phi_nondegeneracy(u64 sigma, const PrimeContext& ctx,
                            std::mt19937_64& rng, bool with_closure) {
  const u64 p = ctx.p;
  require(sigma % p != 0 && sigma % p != 1,
          "phi_nondegeneracy: sigma outside {0,1} required");
  PhiReport rep;
  rep.sigma = sigma;

  // det Phi(t) = (1 - sigma)(4 - t^2) on coefficients
  u64 one_minus = sub_mod(1, sigma, p);
  poly::Poly t_poly = {0, 1};
  poly::Poly phi01 = poly::sub({}, poly::add(poly::scale({0, 0, 1}, sigma, p),
                                             {mul_mod(4 % p, one_minus, p)},
                                             p),
                               p);
  poly::Poly det_poly =
      poly::sub(poly::mul(t_poly, poly::scale(t_poly, p - 1, p), p), phi01, p);
  poly::Poly target =
      poly::scale(poly::sub({4 % p}, {0, 0, 1}, p), one_minus, p);
  rep.det_identity_symbolic = poly::trim(det_poly) == poly::trim(target);

  rep.det_identity_pointwise = true;
  std::uniform_int_distribution<u64> anyt(0, p - 1);
  for (int i = 0; i < 100; ++i) {
    u64 t = anyt(rng);
    u64 det = sub_mod(mul_mod(sub_mod(0, t, p), t, p),
                      sub_mod(0, add_mod(mul_mod(sigma, mul_mod(t, t, p), p),
                                         mul_mod(4 % p, one_minus, p), p),
                              p),
                      p);
    u64 want = mul_mod(one_minus, sub_mod(4 % p, mul_mod(t, t, p), p), p);
    if (det != want) rep.det_identity_pointwise = false;
  }

  // commutator-product word: random F_p* tuples, exhaustive fallback for
  // tiny p, then F_{p^2} sampling
  std::uniform_int_distribution<u64> unit(1, p - 1);
  auto draw_base = [&]() {
    for (;;) {
      QuadExt t = {unit(rng), 0};
      if (!singular_t(t, sigma, ctx)) return t;
    }
  };
  for (int i = 0; i < 200 && !rep.word_nontrivial; ++i)
    rep.word_nontrivial = word_witness(
        sigma, ctx, {draw_base(), draw_base(), draw_base(), draw_base()});
  if (!rep.word_nontrivial && p <= 17) {
    for (u64 t1 = 1; t1 < p && !rep.word_nontrivial; ++t1)
      for (u64 t2 = 1; t2 < p && !rep.word_nontrivial; ++t2)
        for (u64 t3 = 1; t3 < p && !rep.word_nontrivial; ++t3)
          for (u64 t4 = 1; t4 < p && !rep.word_nontrivial; ++t4) {
            std::array<QuadExt, 4> ts = {QuadExt{t1, 0}, QuadExt{t2, 0},
                                         QuadExt{t3, 0}, QuadExt{t4, 0}};
            bool ok = true;
            for (auto& t : ts)
              if (singular_t(t, sigma, ctx)) ok = false;
            if (ok) rep.word_nontrivial = word_witness(sigma, ctx, ts);
          }
  }
  if (!rep.word_nontrivial) {
    auto draw_ext = [&]() {
      for (;;) {
        QuadExt t = {anyt(rng), anyt(rng)};
        if ((t.a | t.b) != 0 && !singular_t(t, sigma, ctx)) return t;
      }
    };
    for (int i = 0; i < 200 && !rep.word_nontrivial; ++i)
      rep.word_nontrivial = word_witness(
          sigma, ctx, {draw_ext(), draw_ext(), draw_ext(), draw_ext()});
    rep.word_in_extension = rep.word_nontrivial;
  }

  if (!with_closure) return rep;

  // kappa^2 = (4(1-sigma)^2 - eps) / sigma^2, preferring a base-field kappa
  u64 q4 = mul_mod(mul_mod(4 % p, one_minus, p), one_minus, p);
  u64 s2inv = inv_mod(mul_mod(sigma, sigma, p), p);
  QuadExt kappa{0, 0};
  bool found = false;
  for (bool base_pass : {true, false}) {
    for (u64 eps : {p - 1, u64{1}}) {
      u64 k2 = mul_mod(sub_mod(q4, eps, p), s2inv, p);
      if (k2 == 0) continue;
      QuadExt cand;
      if (auto r = ff::sqrt_mod(k2, p)) {
        if (!base_pass) continue;
        cand = {*r, 0};
      } else {
        if (base_pass) continue;
        // k2 is a non-residue, so k2 / D is one
        cand = {0, *ff::sqrt_mod(mul_mod(k2, inv_mod(ctx.D, p), p), p)};
      }
      Mat g = g_of_t(cand, sigma, ctx);
      if (g.m[0] == QuadExt{0, 0}) continue;  // eta must not vanish
      kappa = cand;
      rep.epsilon = eps;
      rep.kappa_in_base = base_pass;
      found = true;
      break;
    }
    if (found) break;
  }
  require(found, "phi_nondegeneracy: no usable kappa for this sigma");

  auto neg = [&](const QuadExt& x) {
    return QuadExt{x.a ? p - x.a : 0, x.b ? p - x.b : 0};
  };
  Mat gp = g_of_t(kappa, sigma, ctx);
  Mat gm = g_of_t(neg(kappa), sigma, ctx);
  std::set<std::array<u64, 8>> seen;
  auto key = [](const Mat& A) {
    return std::array<u64, 8>{A.m[0].a, A.m[0].b, A.m[1].a, A.m[1].b,
                              A.m[2].a, A.m[2].b, A.m[3].a, A.m[3].b};
  };
  std::vector<Mat> work = {gp, gm};
  seen.insert(key(gp));
  seen.insert(key(gm));
  while (!work.empty()) {
    Mat cur = work.back();
    work.pop_back();
    for (const Mat& gen : {gp, gm}) {
      Mat nxt = mmul(cur, gen, ctx);
      if (seen.insert(key(nxt)).second) {
        require(seen.size() <= 1u << 20, "phi_nondegeneracy: closure blow-up");
        work.push_back(nxt);
      }
    }
  }
  rep.closure_computed = true;
  rep.closure_order = seen.size();
  for (const auto& k : seen) {
    Mat A;
    A.m = {QuadExt{k[0], k[1]}, QuadExt{k[2], k[3]}, QuadExt{k[4], k[5]},
           QuadExt{k[6], k[7]}};
    if (ff::is_one(mdet(A, ctx))) ++rep.closure_det1_order;
  }
  return rep;
}

}  // namespace markoff::counting
