// Solution counts for the trace equations that tie rotation orbits to
// subgroup structure: f_H(K) records, primitive-root counts P(H), split and
// nonsplit curve point counts, the two-subgroup trace equation with its
// gcd-method bound, the (u,v) -> (x,y) transform identities, and the
// nondegeneracy evidence for the matrix family Phi.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "markoff/ff.hpp"

namespace markoff::counting {

using ff::PrimeContext;
using ff::QuadExt;
using ff::SubgroupSpec;
using ff::u64;

struct FHKRecord {
  u64 a = 0, b = 0, sigma = 0;  // sigma = a b
  SubgroupSpec H, K;
  u64 count = 0;  // ordered pairs (t, y) with a t + b/t = y + 1/y
};

// Exact scan over H x K; a, b != 0. The count never exceeds 2 min(|H|,|K|)
// (each side of the equation is at most 2-to-1 onto its trace values).
FHKRecord count_fHK(u64 a, u64 b, const SubgroupSpec& H, const SubgroupSpec& K,
                    const PrimeContext& ctx);

// Pairs (t, y) with t in H, y a primitive root of F_p*, a t + b/t = y + 1/y.
u64 count_PH_direct(u64 a, u64 b, const SubgroupSpec& H,
                    const PrimeContext& ctx);
// The same number by inclusion-exclusion over the subgroup tower:
// sum over d | p-1 of mu(d) f_H(K_d), with K_d of order (p-1)/d.
u64 count_PH_moebius(u64 a, u64 b, const SubgroupSpec& H,
                     const PrimeContext& ctx);

struct PHRecord {
  u64 count = 0;
  double main_term = 0;  // |H| phi(p-1) / (p-1)
};

// Runs both methods and insists they agree.
PHRecord count_PH(u64 a, u64 b, const SubgroupSpec& H, const PrimeContext& ctx);

struct CurveCount {
  u64 e_H = 1, d_K = 1;
  u64 alpha1 = 1, alpha2 = 1;
  u64 n_points = 0;
  u64 f_value = 0;       // n_points / (e_H d_K), division always exact
  double deviation = 0;  // |n_points - p| / (sqrt(p) e_H d_K)
  bool degenerate = false;  // a1 a2 = 1: the curve splits into components
                            // and the square-root deviation can blow up
};

// N over (xi, eta) in (F_p*)^2 of
//   a1 eta^{e} + a2 eta^{-e} = xi^{d} + xi^{-d}.
// Requires e | p-1, d | p-1. Checks N = e d f_H(K) for H, K of orders
// (p-1)/e, (p-1)/d; a1 a2 = 1 only sets the degenerate flag.
CurveCount count_split_curve(u64 a1, u64 a2, u64 e, u64 d,
                             const PrimeContext& ctx);

// (xi + eta sqrt(D))^n = g_n(xi, eta) + h_n(xi, eta) sqrt(D); both
// homogeneous of degree n.
struct GHPoly {
  u64 n = 0;
  std::vector<u64> g, h;  // coefficient of xi^{n-j} eta^j at index j

  u64 eval_g(u64 xi, u64 eta, const PrimeContext& ctx) const;
  u64 eval_h(u64 xi, u64 eta, const PrimeContext& ctx) const;
};

GHPoly gh_poly(u64 n, const PrimeContext& ctx);

// M(d1, d2): solutions of g_{d1}(xi, eta) = mu^{d2} + mu^{-d2} over the
// norm-one circle times F_p*; d1 | p+1, d2 | p-1. Checks M = d1 d2 f where
// f counts (t, y) in H1 x K with t + 1/t = 2(y + 1/y), H1 the circle
// subgroup of order (p+1)/d1 and K of order (p-1)/d2.
CurveCount count_nonsplit_curve(u64 d1, u64 d2, const PrimeContext& ctx);

struct TraceEqRecord {
  u64 sigma = 0;
  u64 h1_order = 0, h2_order = 0;
  u64 count = 0;            // T
  bool gcd_bound_ok = false;  // T <= 20 max{(|H1||H2|)^(1/3), |H1||H2|/p}
  bool trivial_bound_ok = false;  // T <= 2 min(|H1|, |H2|)
};

// T = #{(h1, h2) in H1 x H2 : h1 + sigma/h1 = h2 + 1/h2}. Either subgroup
// may live in F_p* or in the norm-one circle; a norm-one h1 contributes only
// when h1 = +-1 (otherwise the left side falls outside F_p). sigma != 1.
TraceEqRecord count_eq_p41(u64 sigma, const SubgroupSpec& H1,
                           const SubgroupSpec& H2, const PrimeContext& ctx);

struct MiddlegameRecord {
  u64 u = 0, v = 0, x = 0, y = 0, t_tilde = 0;
  bool pole = false;       // x == t_tilde, the fractional form is undefined
  bool eq22 = false;       // u^2 + v^2 - t~ u v + sigma ((t~)^2 - 4) = 0
  bool eq23 = false;       // x y - t~ (x + y) + sigma (t~)^2 + 4(1-sigma) = 0
  bool mobius_ok = false;  // y (x - t~) = t~ x - beta with
                           // beta = sigma (t~)^2 + 4(1-sigma); valid off pole
};

// u = f1 + 1/f1, v = f2 + 1/f2, x = f1 f2 + 1/(f1 f2), y = f1/f2 + f2/f1,
// t~ = t + 1/t. Checks u v = x + y and u^2 + v^2 = x y + 4 uncondi-
// tionally, then evaluates the three conditional identities.
MiddlegameRecord middlegame_transform(u64 f1, u64 f2, u64 t, u64 sigma,
                                      const PrimeContext& ctx);
// Norm-one variant: every tilde lands in F_p.
MiddlegameRecord middlegame_transform(const QuadExt& f1, const QuadExt& f2,
                                      const QuadExt& t, u64 sigma,
                                      const PrimeContext& ctx);

struct PhiReport {
  u64 sigma = 0;
  bool det_identity_symbolic = false;
  bool det_identity_pointwise = false;  // 100 random t
  bool word_nontrivial = false;   // some commutator-product word != identity
  bool word_in_extension = false;  // the witness needed F_{p^2} entries
  bool closure_computed = false;
  u64 epsilon = 0;          // sign in kappa^2 = (4(1-sigma)^2 - eps)/sigma^2
  bool kappa_in_base = false;
  u64 closure_order = 0;       // group generated by the pair g_+, g_-
  u64 closure_det1_order = 0;  // its determinant-one part
};

// (i) det Phi(t) = (1 - sigma)(4 - t^2), checked on coefficients and at
// random points; (ii) a witness (t1..t4) making the commutator-product word
// nontrivial, searched in F_p* then in F_{p^2}; (iii) optionally the closure
// of the pair g_+-, feasible for small p. sigma != 1.
PhiReport phi_nondegeneracy(u64 sigma, const PrimeContext& ctx,
                            std::mt19937_64& rng, bool with_closure = false);

}  // namespace markoff::counting
