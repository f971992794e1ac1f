// Auxiliary-polynomial machinery: counting the joint root-of-unity set Y in
// F_p, building a polynomial that vanishes on Y to prescribed order from a
// homogeneous linear system, and the two unit-intersection counts with their
// gcd-degree oracles.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "markoff/ff.hpp"

namespace markoff::stepanov {

using ff::PrimeContext;
using ff::u64;

// S and T as split square-free rational functions, given by root and pole
// lists. The factor counts d1 = |roots(S)| + |poles(S)| and d2 likewise
// drive every degree bound below through e = d1 + d2.
struct RationalFunctionSpec {
  std::vector<u64> s_roots, s_poles;
  std::vector<u64> t_roots, t_poles;
  u64 s_lead = 1, t_lead = 1;

  u64 d1() const { return s_roots.size() + s_poles.size(); }
  u64 d2() const { return t_roots.size() + t_poles.size(); }
  u64 e() const { return d1() + d2(); }
};

// All roots and poles pairwise distinct mod p, leads nonzero, e >= 1;
// throws std::invalid_argument otherwise.
void validate_spec(const RationalFunctionSpec& fn, const PrimeContext& ctx);

// S(x) = x, T(x) = 1 - x.
RationalFunctionSpec classic_spec(const PrimeContext& ctx);

// |{y : S(y)^t1 = T(y)^t2 = 1}| by a full scan avoiding poles. t1 >= t2,
// both dividing p-1.
u64 count_Y(const RationalFunctionSpec& fn, u64 t1, u64 t2,
            const PrimeContext& ctx);

struct AuxPolyParams {
  u64 J = 1, B = 2, M = 1;
  u64 t1 = 1, t2 = 1;
};

// (J + eM) M < B^2 J, p >= (2eB+2) t1, 2 t2 >= e B^{2e} + 2 J B^e, and
// t1, t2 | p-1 with t1 >= t2.
bool params_valid(const RationalFunctionSpec& fn, const AuxPolyParams& pr,
                  const PrimeContext& ctx);

// Searches B in [2, ceil(t1^{1/2e})] (the asymptotic choice B ~ t1^{1/2e}
// caps the scan; smaller B is what desk-scale primes admit), picking the
// valid triple minimizing the vanishing-order bound (J + eB t1)/M.
std::optional<AuxPolyParams> suggest_params(const RationalFunctionSpec& fn,
                                            u64 t1, u64 t2,
                                            const PrimeContext& ctx);

struct AuxPoly {
  AuxPolyParams params;
  // lambda_{a,b1,b2} at index (a (B+1) + b1)(B+1) + b2, not all zero
  std::vector<u64> lambda;
  u64 kernel_dim = 0;       // solution-space dimension of the linear system
  std::vector<u64> y_set;   // the Y the polynomial vanishes on
  u64 cleared_degree = 0;   // degree after clearing poles, <= J + eB t1
};

// Solves for lambda making phi(x) = sum lambda x^a S^{t1 b1} T^{t2 b2}
// vanish on Y to order M, then re-verifies the vanishing by truncated
// power series at every point of Y and checks phi != 0 through the cleared
// polynomial. Throws std::runtime_error if the system has no nontrivial
// kernel (a parameter-constraint violation upstream).
AuxPoly build_aux_poly(const RationalFunctionSpec& fn,
                       const AuxPolyParams& pr, const PrimeContext& ctx);

// x -> (a x + b)/(c x + d), nonsingular
struct MoebiusMap {
  u64 a = 1, b = 0, c = 0, d = 1;
};

// |sigma(U_t) cap U_t| for U_t the t-th roots of unity, by scanning U_t.
// Cross-checked against deg gcd(x^t - 1, (ax+b)^t - (cx+d)^t); the pole
// -d/c is verified never to be a common root. sigma must not be scalar.
u64 count_unit_intersection(const MoebiusMap& sigma, u64 t,
                            const PrimeContext& ctx);

// |{(w, rho) in U_t^2 : w + 1/w = rho + b/rho}|, b != 1. The substitution
// xi = rho w, eta = w/rho is verified to be at most 2-to-1 on solutions.
u64 count_cor_a5(u64 b, u64 t, const PrimeContext& ctx);

struct Instance {
  u64 p = 0;
  RationalFunctionSpec fn;
  AuxPolyParams params;
};

// JSON round trip: {p, S_roots, S_poles, T_roots, T_poles, t1, t2, J, B, M};
// optional S_lead / T_lead keys default to 1 and are written only when used.
Instance load_instance(const std::string& path);
void save_instance(const std::string& path, const Instance& inst);

}  // namespace markoff::stepanov
