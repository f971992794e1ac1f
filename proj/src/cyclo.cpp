#include "markoff/cyclo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "markoff/check.hpp"

namespace markoff::cyclo {

namespace {

double next_down(double x) {
  return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

double next_up(double x) {
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}

// Covers the argument reduction and cosine rounding with a ~50x margin.
constexpr double kCosSlack = 1e-13;

// Directed rounding with error compensation: the endpoint moves only when
// the double result is inexact, so integer arithmetic stays exact.
double sum_down(double a, double b) {
  const double s = a + b;
  const double bp = s - a;
  const double err = (a - (s - bp)) + (b - bp);
  return err < 0.0 ? next_down(s) : s;
}

double sum_up(double a, double b) {
  const double s = a + b;
  const double bp = s - a;
  const double err = (a - (s - bp)) + (b - bp);
  return err > 0.0 ? next_up(s) : s;
}

double prod_down(double a, double b) {
  const double p = a * b;
  const double err = std::fma(a, b, -p);
  return err < 0.0 ? next_down(p) : p;
}

double prod_up(double a, double b) {
  const double p = a * b;
  const double err = std::fma(a, b, -p);
  return err > 0.0 ? next_up(p) : p;
}

Interval third() {
  return {next_down(1.0 / 3.0), next_up(1.0 / 3.0)};
}

bool interval_less(const Interval& x, const Interval& y) {
  return x.lo < y.lo || (x.lo == y.lo && x.hi < y.hi);
}

ff::Factorization merge_factorizations(const ff::Factorization& a,
                                       const ff::Factorization& b) {
  ff::Factorization out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].prime < b[j].prime)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].prime < a[i].prime) {
      out.push_back(b[j++]);
    } else {
      out.push_back({a[i].prime, a[i].exp + b[j].exp});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Interval iadd(const Interval& x, const Interval& y) {
  return {sum_down(x.lo, y.lo), sum_up(x.hi, y.hi)};
}

Interval isub(const Interval& x, const Interval& y) {
  return {sum_down(x.lo, -y.hi), sum_up(x.hi, -y.lo)};
}

Interval imul(const Interval& x, const Interval& y) {
  const double lo = std::min({prod_down(x.lo, y.lo), prod_down(x.lo, y.hi),
                              prod_down(x.hi, y.lo), prod_down(x.hi, y.hi)});
  const double hi = std::max({prod_up(x.lo, y.lo), prod_up(x.lo, y.hi),
                              prod_up(x.hi, y.lo), prod_up(x.hi, y.hi)});
  return {lo, hi};
}

Interval iabs(const Interval& x) {
  if (x.lo >= 0.0) return x;
  if (x.hi <= 0.0) return {-x.hi, -x.lo};
  return {0.0, std::max(-x.lo, x.hi)};
}

RootOfUnity root_of_unity(u64 k, u64 l) {
  if (l == 0) throw std::invalid_argument("root_of_unity: order 0");
  k %= l;
  if (std::gcd(k, l) != 1)
    throw std::invalid_argument("root_of_unity: exponent not coprime to order");
  return {k, l};
}

RootTriple root_triple(const RootOfUnity& t1, const RootOfUnity& t2,
                       const RootOfUnity& t3) {
  RootTriple rt;
  rt.t = {root_of_unity(t1.k, t1.l), root_of_unity(t2.k, t2.l),
          root_of_unity(t3.k, t3.l)};
  return rt;
}

Interval two_cos(const RootOfUnity& r) {
  const u64 k = std::min(r.k, r.l - r.k);
  switch (r.l) {
    case 1: return {2.0, 2.0};
    case 2: return {-2.0, -2.0};
    case 3: return {-1.0, -1.0};
    case 4: return {0.0, 0.0};
    case 6: return {1.0, 1.0};
    default: break;
  }
  const double x =
      2.0 * std::numbers::pi * (static_cast<double>(k) / static_cast<double>(r.l));
  const double a = 2.0 * std::cos(x);
  return {next_down(a - kCosSlack), next_up(a + kCosSlack)};
}

bool eta_vanishes(const RootTriple& rt) {
  return rt.t[0].l == 4 && rt.t[1].l == 4 && rt.t[2].l == 4;
}

Interval eta(const RootTriple& rt) {
  if (eta_vanishes(rt)) return {0.0, 0.0};
  std::array<Interval, 3> a = {two_cos(rt.t[0]), two_cos(rt.t[1]),
                               two_cos(rt.t[2])};
  std::sort(a.begin(), a.end(), interval_less);
  if (a[0].width() == 0.0 && a[1].width() == 0.0 && a[2].width() == 0.0) {
    // integer slots: |values| <= 2, so the double arithmetic is exact
    const double v = a[0].lo * a[0].lo + a[1].lo * a[1].lo + a[2].lo * a[2].lo -
                     a[0].lo * a[1].lo * a[2].lo;
    return {v, v};
  }
  const Interval s = iadd(iadd(imul(a[0], a[0]), imul(a[1], a[1])),
                          imul(a[2], a[2]));
  const Interval e = isub(s, imul(imul(a[0], a[1]), a[2]));
  const Interval sep = imul(s, third());
  return {std::max(e.lo, sep.lo), e.hi};
}

OrbitSweepReport no_finite_orbit_sweep(u64 l_max) {
  require(l_max >= 2, "no_finite_orbit_sweep: l_max < 2");
  std::vector<RootOfUnity> roots;
  for (u64 l = 1; l <= l_max; ++l)
    for (u64 k = 0; k < l; ++k)
      if (std::gcd(k, l) == 1) roots.push_back({k, l});

  OrbitSweepReport rep;
  rep.l_max = l_max;
  rep.nonzero_rigorous = true;
  rep.min_lower = std::numeric_limits<double>::infinity();
  const std::size_t n = roots.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      for (std::size_t k = j; k < n; ++k) {
        u64 mult = 6;
        if (i == j && j == k) mult = 1;
        else if (i == j || j == k) mult = 3;
        rep.tuples += mult;
        const RootTriple rt{{roots[i], roots[j], roots[k]}};
        if (eta_vanishes(rt)) {
          rep.zero_tuples += mult;
          continue;
        }
        const Interval iv = eta(rt);
        if (!(iv.lo > 0.0)) rep.nonzero_rigorous = false;
        rep.min_lower = std::min(rep.min_lower, iv.lo);
        rep.max_width = std::max(rep.max_width, iv.width());
      }
    }
  }
  return rep;
}

OrderBoundReport order_bound_report(const orbits::SolutionSet& s,
                                    const ff::PrimeContext& ctx) {
  require(s.prime() == ctx.p, "order_bound_report: context prime mismatch");
  OrderBoundReport rep;
  rep.p = ctx.p;
  const std::vector<u64> table = orbits::rot_order_table(ctx);
  u64 mn = std::numeric_limits<u64>::max();
  for (std::size_t pos = 0; pos < s.size(); ++pos)
    mn = std::min(mn, orbits::max_order(s.point(pos), table));
  require(s.size() > 0, "order_bound_report: empty solution set");
  rep.min_max_order = mn;
  rep.bound = std::cbrt(std::log(static_cast<double>(ctx.p)) / std::log(20.0));
  // 20^15 already exceeds every admissible prime, so only m <= 2 needs the
  // explicit power
  const u64 cube = mn >= 3 ? 27 : mn * mn * mn;
  if (cube >= 15) {
    rep.ok = true;
  } else {
    u64 pw = 1;
    for (u64 i = 0; i < cube; ++i) pw *= 20;
    rep.ok = pw >= ctx.p;
  }
  return rep;
}

bool order_lower_bound_check(const orbits::SolutionSet& s,
                             const ff::PrimeContext& ctx) {
  return order_bound_report(s, ctx).ok;
}

SmoothnessReport smoothness_check(u64 p, const ff::PrimeContext& ctx) {
  require(p == ctx.p, "smoothness_check: context prime mismatch");
  SmoothnessReport rep;
  rep.p = p;
  const ff::Factorization f =
      merge_factorizations(ctx.fact_pm1, ctx.fact_pp1);
  const long double logp = std::log(static_cast<long double>(p));
  for (u64 d : ff::divisors(f)) {
    const long double cube =
        static_cast<long double>(d) * static_cast<long double>(d) *
        static_cast<long double>(d);
    if (cube >= logp) rep.divisors.push_back(d);
  }
  long double sum = 0.0L;
  rep.verdict = true;
  for (u64 d : rep.divisors) {
    sum += std::cbrt(static_cast<long double>(d) * static_cast<long double>(d));
    // the sum contains 2^(2/3) with a positive rational coefficient, so it
    // is irrational and cannot tie an integer threshold
    require(std::fabs(sum - static_cast<long double>(d)) > 1e-9L,
            "smoothness_check: comparison too close to decide");
    if (sum >= static_cast<long double>(d)) {
      rep.first_fail_y = d;
      rep.verdict = false;
      break;
    }
  }
  return rep;
}

bool eta_norm_check(const RootTriple& rt) {
  const u64 n = std::lcm(std::lcm(rt.t[0].l, rt.t[1].l), rt.t[2].l);
  if (n > 30) throw std::invalid_argument("eta_norm_check: lcm of orders > 30");
  u64 phi = 0;
  Interval norm{1.0, 1.0};
  for (u64 u = 1; u <= n; ++u) {
    if (std::gcd(u, n) != 1) continue;
    ++phi;
    const RootTriple conj =
        root_triple(root_of_unity(rt.t[0].k * u, rt.t[0].l),
                    root_of_unity(rt.t[1].k * u, rt.t[1].l),
                    root_of_unity(rt.t[2].k * u, rt.t[2].l));
    norm = imul(norm, iabs(eta(conj)));
  }
  const long double bound = std::pow(20.0L, static_cast<long double>(phi));
  return static_cast<long double>(norm.hi) <= bound;
}

}  // namespace markoff::cyclo
