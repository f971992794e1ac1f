// Characteristic-zero opening: the roots-of-unity Markoff equation, the
// eta-norm bound over cyclotomic conjugates, the (log_20 p)^(1/3) lower
// bound on rotation orders, and the p^2-1 divisor-smoothness classifier.
//
// Exactness strategy: a root of unity is stored as the exponent pair (k, l)
// and enters the arithmetic only through a = t + 1/t = 2 cos(2 pi k / l),
// held as an exact double for l in {1,2,3,4,6} and as a nextafter-widened
// interval otherwise.  Whether eta vanishes is decided without floating
// point: for |a|, |b|, |c| <= 2,
//
//   eta = a^2 + b^2 + c^2 - abc >= (1/3)(a^2 + b^2 + c^2),
//
// so eta = 0 forces a = b = c = 0, i.e. every root equal to +-i.
//
// Smoothness criterion: sum of d^(2/3) over divisors d of p^2-1 with
// (log p)^(1/3) <= d <= y stays below y, for every y.  The sum is a step
// function jumping only at divisors, so checking y = each divisor decides
// all y: between jumps the sum is constant while y grows, hence a failure
// at a non-divisor y means the same sum already failed at the divisor
// directly below it.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "markoff/ff.hpp"
#include "markoff/orbits.hpp"

namespace markoff::cyclo {

using ff::u64;

// Closed interval [lo, hi]; the operations round the endpoints outward.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
  double width() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

Interval iadd(const Interval& x, const Interval& y);
Interval isub(const Interval& x, const Interval& y);
Interval imul(const Interval& x, const Interval& y);
Interval iabs(const Interval& x);

// exp(2 pi i k / l) with 0 <= k < l and gcd(k, l) = 1.
struct RootOfUnity {
  u64 k = 0;
  u64 l = 1;
  bool operator==(const RootOfUnity&) const = default;
};

// Reduces k mod l; throws std::invalid_argument unless the result is a
// primitive l-th root (l >= 1, gcd(k, l) = 1).
RootOfUnity root_of_unity(u64 k, u64 l);

struct RootTriple {
  std::array<RootOfUnity, 3> t{};
};

RootTriple root_triple(const RootOfUnity& t1, const RootOfUnity& t2,
                       const RootOfUnity& t3);

// t + 1/t = 2 cos(2 pi k / l).  Width 0 for l in {1,2,3,4,6}, otherwise a
// widened cosine enclosure.  Computed from min(k, l-k), so t -> 1/t
// reproduces the interval bit for bit.
Interval two_cos(const RootOfUnity& r);

// True iff all three roots are +-i (order 4), the only zero of eta on the
// unit circle.
bool eta_vanishes(const RootTriple& rt);

// eta = a^2 + b^2 + c^2 - abc.  Returns [0, 0] exactly in the +-i case and
// an exact point interval when every slot has l in {1,2,3,4,6}; otherwise
// the lower end is raised to the (1/3)(a^2+b^2+c^2) separation bound, which
// keeps 0 outside the enclosure as long as the widths stay below that
// bound.  The slots are sorted before combining, so permuting them
// reproduces the interval bit for bit.
Interval eta(const RootTriple& rt);

struct OrbitSweepReport {
  u64 l_max = 0;
  u64 tuples = 0;       // ordered root triples with every order <= l_max
  u64 zero_tuples = 0;  // eta = 0; every one of them is a +-i triple
  bool nonzero_rigorous = false;  // all other enclosures exclude zero
  double min_lower = 0.0;         // smallest eta lower bound among those
  double max_width = 0.0;
};

// Exhaustive scan of all root triples with orders at most l_max (>= 2).
OrbitSweepReport no_finite_orbit_sweep(u64 l_max);

struct OrderBoundReport {
  u64 p = 0;
  u64 min_max_order = 0;  // min over X*(p) of the max coordinate rot_order
  double bound = 0.0;     // (log_20 p)^(1/3), for reporting only
  bool ok = false;        // 20^(min_max_order^3) >= p
};

// Every point's maximal rotation order m must satisfy m >= (log_20 p)^(1/3);
// the comparison is done exactly by cubing, as 20^(m^3) >= p.
OrderBoundReport order_bound_report(const orbits::SolutionSet& s,
                                    const ff::PrimeContext& ctx);
bool order_lower_bound_check(const orbits::SolutionSet& s,
                             const ff::PrimeContext& ctx);

struct SmoothnessReport {
  u64 p = 0;
  std::vector<u64> divisors;  // divisors of p^2-1 at or above (log p)^(1/3)
  u64 first_fail_y = 0;       // 0 when every threshold passes
  bool verdict = false;       // the divisor sum stays below y for all y
};

// Evaluates the smoothness criterion at its critical thresholds.
SmoothnessReport smoothness_check(u64 p, const ff::PrimeContext& ctx);

// Product of |eta| over the Galois conjugates k_j -> k_j u (u coprime to
// n = lcm(l1, l2, l3), acting on all slots jointly) is at most 20^phi(n).
// Throws std::invalid_argument when n > 30.
bool eta_norm_check(const RootTriple& rt);

}  // namespace markoff::cyclo
