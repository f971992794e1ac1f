#include "markoff/surface.hpp"

#include <stdexcept>

#include "markoff/check.hpp"

namespace markoff::surface {

using ff::add_mod;
using ff::inv_mod;
using ff::legendre;
using ff::mul_mod;
using ff::mult_order;
using ff::qadd;
using ff::qinv;
using ff::qmul;
using ff::qnorm;
using ff::qsub;
using ff::sqrt_mod;
using ff::sub_mod;

u64 coord(const Triple& t, int j) {
  switch (j) {
    case 1: return t.x1;
    case 2: return t.x2;
    case 3: return t.x3;
  }
  throw std::invalid_argument("coord: axis out of range");
}

namespace {

void set_coord(Triple& t, int j, u64 v) {
  switch (j) {
    case 1: t.x1 = v; return;
    case 2: t.x2 = v; return;
    case 3: t.x3 = v; return;
  }
  throw std::invalid_argument("set_coord: axis out of range");
}

constexpr int kPerm[6][3] = {{1, 2, 3}, {1, 3, 2}, {2, 1, 3},
                             {2, 3, 1}, {3, 1, 2}, {3, 2, 1}};

}  // namespace

bool is_on_surface(const Triple& t, u64 p) {
  u64 lhs = add_mod(add_mod(mul_mod(t.x1, t.x1, p), mul_mod(t.x2, t.x2, p), p),
                    mul_mod(t.x3, t.x3, p), p);
  u64 rhs = mul_mod(3 % p, mul_mod(t.x1, mul_mod(t.x2, t.x3, p), p), p);
  return lhs == rhs;
}

u64 canonical_index(const Triple& t, u64 p) {
  return (t.x1 * p + t.x2) * p + t.x3;
}

Triple from_index(u64 idx, u64 p) {
  Triple t;
  t.x3 = idx % p;
  idx /= p;
  t.x2 = idx % p;
  t.x1 = idx / p;
  return t;
}

Triple vieta(int j, const Triple& t, u64 p) {
  int k = j % 3 + 1, l = k % 3 + 1;
  Triple r = t;
  u64 prod = mul_mod(3 % p, mul_mod(coord(t, k), coord(t, l), p), p);
  set_coord(r, j, sub_mod(prod, coord(t, j), p));
  return r;
}

Triple permute(int k, const Triple& t) {
  if (k < 0 || k >= 6) throw std::invalid_argument("permute: index out of range");
  Triple r;
  for (int i = 1; i <= 3; ++i) set_coord(r, i, coord(t, kPerm[k][i - 1]));
  return r;
}

int permutation_count() { return 6; }

Triple rotate(int j, const Triple& t, u64 p) {
  int k = j % 3 + 1, l = k % 3 + 1;
  Triple r = t;
  u64 y = coord(t, k), z = coord(t, l);
  set_coord(r, k, z);
  set_coord(r, l, sub_mod(mul_mod(3 % p, mul_mod(coord(t, j), z, p), p), y, p));
  return r;
}

Triple rotate_inv(int j, const Triple& t, u64 p) {
  int k = j % 3 + 1, l = k % 3 + 1;
  Triple r = t;
  u64 y = coord(t, k), z = coord(t, l);
  set_coord(r, k, sub_mod(mul_mod(3 % p, mul_mod(coord(t, j), y, p), p), z, p));
  set_coord(r, l, y);
  return r;
}

ConicSection classify(u64 xi, const PrimeContext& ctx) {
  const u64 p = ctx.p;
  ConicSection c;
  c.xi = xi % p;
  c.trace = mul_mod(3 % p, c.xi, p);
  u64 x = c.trace;
  u64 disc = sub_mod(mul_mod(x, x, p), 4 % p, p);
  int chi = legendre(disc, p);
  if (chi == 0) {
    c.cls = ConicClass::Parabolic;
    c.rot_order = (x == 2 % p) ? p : 2 * p;
    c.point_count = (p % 4 == 1) ? 2 * p : 0;
    return c;
  }
  u64 x2 = mul_mod(x, x, p);
  c.kappa = mul_mod(x2, inv_mod(disc, p), p);
  u64 inv2 = inv_mod(2, p);
  if (chi == 1) {
    c.cls = ConicClass::Hyperbolic;
    u64 r = *sqrt_mod(disc, p);
    c.lambda_split = mul_mod(add_mod(x, r, p), inv2, p);
    c.rot_order = mult_order(c.lambda_split, ctx);
    c.point_count = p - 1;
  } else {
    c.cls = ConicClass::Elliptic;
    // disc = D * (disc/D) with disc/D a residue; lambda = x/2 + (r/2) sqrt(D)
    u64 r = *sqrt_mod(mul_mod(disc, inv_mod(ctx.D, p), p), p);
    c.lambda_ext = {mul_mod(x, inv2, p), mul_mod(r, inv2, p)};
    require(qnorm(c.lambda_ext, ctx) == 1, "classify: eigenvalue norm");
    c.rot_order = mult_order(c.lambda_ext, ctx);
    c.point_count = p + 1;
  }
  return c;
}

namespace {

u64 re2(const QuadExt& t, u64 p) { return add_mod(t.a, t.a, p); }

}  // namespace

std::vector<Triple> conic_points(int axis, u64 xi, const PrimeContext& ctx) {
  const u64 p = ctx.p;
  xi %= p;
  if (xi == 0)
    throw std::invalid_argument("conic_points: xi = 0 fiber is degenerate");
  if (axis < 1 || axis > 3)
    throw std::invalid_argument("conic_points: axis out of range");
  ConicSection c = classify(xi, ctx);
  u64 inv3 = inv_mod(3 % p, p);
  std::vector<Triple> out;

  auto emit = [&](u64 a2, u64 a3) {
    // a2, a3 are trace coordinates of the cyclic successor pair of `axis`
    Triple t;
    set_coord(t, axis, xi);
    set_coord(t, axis % 3 + 1, mul_mod(a2, inv3, p));
    set_coord(t, (axis % 3 + 1) % 3 + 1, mul_mod(a3, inv3, p));
    require(is_on_surface(t, p), "conic_points: point off surface");
    out.push_back(t);
  };

  switch (c.cls) {
    case ConicClass::Hyperbolic: {
      out.reserve(p - 1);
      u64 lam = c.lambda_split;
      for (u64 t = 1; t < p; ++t) {
        u64 tinv = inv_mod(t, p);
        u64 tl = mul_mod(t, lam, p);
        u64 a2 = add_mod(t, mul_mod(c.kappa, tinv, p), p);
        u64 a3 = add_mod(tl, mul_mod(c.kappa, inv_mod(tl, p), p), p);
        emit(a2, a3);
      }
      break;
    }
    case ConicClass::Elliptic: {
      out.reserve(p + 1);
      // one solution of Norm(t0) = kappa, then sweep the norm-one circle
      QuadExt t0;
      bool found = false;
      for (u64 b = 0; b < p && !found; ++b) {
        u64 cand = add_mod(c.kappa, mul_mod(ctx.D, mul_mod(b, b, p), p), p);
        if (auto a = sqrt_mod(cand, p)) {
          t0 = {*a, b};
          found = true;
        }
      }
      require(found, "conic_points: norm equation unsolvable");
      QuadExt gen = ff::normone_generator(ctx);
      QuadExt z{1, 0};
      for (u64 i = 0; i <= p; ++i) {
        QuadExt t = qmul(t0, z, ctx);
        QuadExt tl = qmul(t, c.lambda_ext, ctx);
        // Norm(t) = kappa makes kappa/t the conjugate, so both coordinates
        // are twice a real part.
        emit(re2(t, p), re2(tl, p));
        z = qmul(z, gen, ctx);
      }
      break;
    }
    case ConicClass::Parabolic: {
      if (p % 4 == 3) break;
      out.reserve(2 * p);
      u64 i2 = *sqrt_mod(p - 1, p);  // sqrt(-1)
      u64 eps = (c.trace == 2 % p) ? 1 : p - 1;
      u64 twoi = add_mod(i2, i2, p);
      for (u64 s : {twoi, p - twoi}) {
        for (u64 a3 = 0; a3 < p; ++a3) {
          emit(add_mod(mul_mod(eps, a3, p), s, p), a3);
        }
      }
      break;
    }
  }
  require(out.size() == c.point_count, "conic_points: count mismatch");
  return out;
}

int intersection_count(u64 xi, u64 eta, const PrimeContext& ctx) {
  const u64 p = ctx.p;
  u64 x2 = mul_mod(xi, xi, p), e2 = mul_mod(eta, eta, p);
  u64 disc = sub_mod(mul_mod(9 % p, mul_mod(x2, e2, p), p),
                     mul_mod(4 % p, add_mod(x2, e2, p), p), p);
  return 1 + legendre(disc, p);
}

RowParam row_params(const Triple& t, int j, const PrimeContext& ctx) {
  const u64 p = ctx.p;
  ConicSection c = classify(coord(t, j), ctx);
  if (c.cls == ConicClass::Parabolic)
    throw std::invalid_argument("row_params: parabolic coordinate");
  u64 X2 = mul_mod(3 % p, coord(t, j % 3 + 1), p);
  u64 X3 = mul_mod(3 % p, coord(t, (j + 1) % 3 + 1), p);

  RowParam rp;
  if (c.cls == ConicClass::Hyperbolic) {
    rp.split = true;
    u64 lam = c.lambda_split, lami = inv_mod(lam, p);
    u64 den = inv_mod(sub_mod(lam, lami, p), p);
    rp.a_split = mul_mod(den, sub_mod(X3, mul_mod(X2, lami, p), p), p);
    rp.b_split = mul_mod(den, sub_mod(mul_mod(lam, X2, p), X3, p), p);
    rp.sigma = mul_mod(rp.a_split, rp.b_split, p);
    require(add_mod(rp.a_split, rp.b_split, p) == X2, "row_params: l=0 check");
  } else {
    rp.split = false;
    QuadExt lam = c.lambda_ext, lami = qinv(lam, ctx);
    QuadExt den = qinv(qsub(lam, lami, ctx), ctx);
    QuadExt X2e{X2, 0}, X3e{X3, 0};
    rp.a_ext = qmul(den, qsub(X3e, qmul(X2e, lami, ctx), ctx), ctx);
    rp.b_ext = qmul(den, qsub(qmul(lam, X2e, ctx), X3e, ctx), ctx);
    QuadExt prod = qmul(rp.a_ext, rp.b_ext, ctx);
    require(prod.b == 0, "row_params: sigma not rational");
    rp.sigma = prod.a;
    require(qadd(rp.a_ext, rp.b_ext, ctx) == X2e, "row_params: l=0 check");
  }
  // sigma = ab collapses to trace^2/(trace^2 - 4), which can never be 1
  require(rp.sigma == c.kappa, "row_params: sigma != kappa");
  require(rp.sigma != 1, "row_params: sigma = 1");
  return rp;
}

}  // namespace markoff::surface
