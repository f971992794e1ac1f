#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "markoff/cyclo.hpp"
#include "markoff/ff.hpp"
#include "markoff/orbits.hpp"

using markoff::ff::PrimeContext;
using markoff::ff::u64;
namespace cy = markoff::cyclo;
namespace orb = markoff::orbits;

namespace {

cy::RootTriple triple(u64 k1, u64 l1, u64 k2, u64 l2, u64 k3, u64 l3) {
  return cy::root_triple({k1, l1}, {k2, l2}, {k3, l3});
}

std::vector<cy::RootOfUnity> roots_up_to(u64 l_max) {
  std::vector<cy::RootOfUnity> out;
  for (u64 l = 1; l <= l_max; ++l)
    for (u64 k = 0; k < l; ++k)
      if (std::gcd(k, l) == 1) out.push_back({k, l});
  return out;
}

// Independent smoothness scan: every integer y up to p^2-1, divisors of
// p^2-1 found by trial division. Returns the first failing y, 0 if none.
u64 first_integer_failure_brute(u64 p) {
  const u64 m = p * p - 1;
  const long double logp = std::log(static_cast<long double>(p));
  for (u64 y = 1; y <= m; ++y) {
    long double sum = 0.0L;
    for (u64 d = 1; d <= y; ++d) {
      if (m % d != 0) continue;
      const long double cube = static_cast<long double>(d) *
                               static_cast<long double>(d) *
                               static_cast<long double>(d);
      if (cube < logp) continue;
      sum += std::cbrt(static_cast<long double>(d) * static_cast<long double>(d));
    }
    if (sum >= static_cast<long double>(y)) return y;
  }
  return 0;
}

}  // namespace

TEST_CASE("interval primitives round outward") {
  const cy::Interval x{1.0, 2.0};
  const cy::Interval y{-3.0, 0.5};

  const cy::Interval s = cy::iadd(x, y);
  CHECK(s.lo <= -2.0);
  CHECK(s.hi >= 2.5);
  CHECK(s.width() < 4.5 + 1e-12);

  const cy::Interval d = cy::isub(x, y);
  CHECK(d.lo <= 0.5);
  CHECK(d.hi >= 5.0);

  const cy::Interval m = cy::imul(x, y);
  CHECK(m.lo <= -6.0);
  CHECK(m.hi >= 1.0);

  CHECK(cy::iabs({-2.0, -1.0}) == cy::Interval{1.0, 2.0});
  CHECK(cy::iabs({3.0, 4.0}) == cy::Interval{3.0, 4.0});
  const cy::Interval a = cy::iabs({-1.0, 0.25});
  CHECK(a.lo == 0.0);
  CHECK(a.hi == 1.0);
  CHECK(cy::Interval{-1.0, 0.25}.contains_zero());
  CHECK(!x.contains_zero());
}

TEST_CASE("root_of_unity normalizes and validates") {
  CHECK(cy::root_of_unity(5, 4) == cy::RootOfUnity{1, 4});
  CHECK(cy::root_of_unity(0, 1) == cy::RootOfUnity{0, 1});
  CHECK(cy::root_of_unity(7, 1) == cy::RootOfUnity{0, 1});
  CHECK(cy::root_of_unity(11, 6) == cy::RootOfUnity{5, 6});

  CHECK_THROWS_AS(cy::root_of_unity(2, 4), std::invalid_argument);
  CHECK_THROWS_AS(cy::root_of_unity(0, 5), std::invalid_argument);
  CHECK_THROWS_AS(cy::root_of_unity(3, 9), std::invalid_argument);
  CHECK_THROWS_AS(cy::root_of_unity(1, 0), std::invalid_argument);
}

TEST_CASE("two_cos: exact orders, enclosures, inversion symmetry") {
  CHECK(cy::two_cos({0, 1}) == cy::Interval{2.0, 2.0});
  CHECK(cy::two_cos({1, 2}) == cy::Interval{-2.0, -2.0});
  CHECK(cy::two_cos({1, 3}) == cy::Interval{-1.0, -1.0});
  CHECK(cy::two_cos({2, 3}) == cy::Interval{-1.0, -1.0});
  CHECK(cy::two_cos({1, 4}) == cy::Interval{0.0, 0.0});
  CHECK(cy::two_cos({3, 4}) == cy::Interval{0.0, 0.0});
  CHECK(cy::two_cos({1, 6}) == cy::Interval{1.0, 1.0});
  CHECK(cy::two_cos({5, 6}) == cy::Interval{1.0, 1.0});

  // golden ratio at order 5, sqrt(2) at order 8, sqrt(3) at order 12
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  const cy::Interval g = cy::two_cos({1, 5});
  CHECK(g.lo <= golden);
  CHECK(golden <= g.hi);
  CHECK(g.width() < 1e-12);

  const cy::Interval r8 = cy::two_cos({1, 8});
  CHECK(r8.lo <= std::sqrt(2.0));
  CHECK(std::sqrt(2.0) <= r8.hi);
  const cy::Interval r8n = cy::two_cos({3, 8});
  CHECK(r8n.lo <= -std::sqrt(2.0));
  CHECK(-std::sqrt(2.0) <= r8n.hi);

  const cy::Interval r12 = cy::two_cos({1, 12});
  CHECK(r12.lo <= std::sqrt(3.0));
  CHECK(std::sqrt(3.0) <= r12.hi);

  // t -> 1/t is bitwise invisible
  for (u64 l : {5ull, 7ull, 9ull, 11ull, 13ull})
    for (u64 k = 1; k < l; ++k)
      if (std::gcd(k, l) == 1) CHECK(cy::two_cos({k, l}) == cy::two_cos({l - k, l}));
}

TEST_CASE("eta: frozen values and exact zero detection") {
  // all roots 1: 4 + 4 + 4 - 8
  const cy::Interval one = cy::eta(triple(0, 1, 0, 1, 0, 1));
  CHECK(one == cy::Interval{4.0, 4.0});

  // all roots +-i: the only zeros
  for (u64 k1 : {1ull, 3ull})
    for (u64 k2 : {1ull, 3ull})
      for (u64 k3 : {1ull, 3ull}) {
        const auto rt = triple(k1, 4, k2, 4, k3, 4);
        CHECK(cy::eta_vanishes(rt));
        CHECK(cy::eta(rt) == cy::Interval{0.0, 0.0});
      }

  // all roots -1: the extreme 12 + 8 = 20, hit exactly
  CHECK(cy::eta(triple(1, 2, 1, 2, 1, 2)) == cy::Interval{20.0, 20.0});
  // mixed signs of a = +-2
  CHECK(cy::eta(triple(0, 1, 1, 2, 1, 2)) == cy::Interval{4.0, 4.0});
  CHECK(cy::eta(triple(0, 1, 0, 1, 1, 2)) == cy::Interval{20.0, 20.0});
  // two +-i slots and one other: a^2 of the remaining slot
  CHECK(cy::eta(triple(1, 4, 3, 4, 0, 1)) == cy::Interval{4.0, 4.0});
  CHECK(cy::eta(triple(1, 4, 3, 4, 1, 3)) == cy::Interval{1.0, 1.0});
  CHECK(!cy::eta_vanishes(triple(1, 4, 3, 4, 0, 1)));

  // an inexact slot keeps a rigorous positive lower bound
  const cy::Interval v = cy::eta(triple(1, 5, 0, 1, 0, 1));
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  const double expect = golden * golden + 8.0 - 4.0 * golden;
  CHECK(v.lo > 0.0);
  CHECK(v.lo <= expect);
  CHECK(expect <= v.hi);
  CHECK(v.width() < 1e-11);
}

TEST_CASE("eta: symmetry and bounds over all orders up to 12") {
  const auto roots = roots_up_to(12);
  CHECK(roots.size() == 46);

  bool in_range = true, perm_ok = true, inv_ok = true, sep_ok = true;
  u64 zeros = 0;
  for (const auto& a : roots)
    for (const auto& b : roots)
      for (const auto& c : roots) {
        const auto rt = cy::root_triple(a, b, c);
        const cy::Interval iv = cy::eta(rt);
        in_range &= iv.lo >= 0.0 && iv.hi <= 20.0 + 1e-10;
        perm_ok &= iv == cy::eta(cy::root_triple(b, c, a)) &&
                   iv == cy::eta(cy::root_triple(c, b, a));
        inv_ok &= iv == cy::eta(cy::root_triple({a.l - a.k, a.l},
                                                {b.l - b.k, b.l},
                                                {c.l - c.k, c.l}));
        if (cy::eta_vanishes(rt)) {
          ++zeros;
          sep_ok &= iv == cy::Interval{0.0, 0.0};
        } else {
          sep_ok &= iv.lo > 0.0;
        }
      }
  CHECK(in_range);
  CHECK(perm_ok);
  CHECK(inv_ok);
  CHECK(sep_ok);
  CHECK(zeros == 8);  // two order-4 roots per slot
}

TEST_CASE("no_finite_orbit_sweep: zero set is exactly the +-i tuples") {
  const auto r4 = cy::no_finite_orbit_sweep(4);
  CHECK(r4.l_max == 4);
  CHECK(r4.tuples == 216);  // 6 roots of order <= 4
  CHECK(r4.zero_tuples == 8);
  CHECK(r4.nonzero_rigorous);
  CHECK(r4.min_lower == 1.0);  // (+-i, +-i, order 3)
  CHECK(r4.max_width == 0.0);  // every order <= 4 slot is exact

  const auto r12 = cy::no_finite_orbit_sweep(12);
  CHECK(r12.tuples == 46ull * 46 * 46);
  CHECK(r12.zero_tuples == 8);
  CHECK(r12.nonzero_rigorous);
  CHECK(r12.min_lower > 0.0);
  CHECK(r12.min_lower < 1.0);
  CHECK(r12.max_width < 1e-11);

  CHECK_THROWS_AS(cy::no_finite_orbit_sweep(1), std::logic_error);
}

TEST_CASE("order lower bound: frozen p = 5 and small-prime sweep") {
  auto ctx5 = PrimeContext::make(5);
  const auto s5 = orb::SolutionSet::enumerate(5);
  const auto rep = cy::order_bound_report(s5, ctx5);
  CHECK(rep.p == 5);
  // orders by coordinate: 0 -> 4, 1 -> 10, 2 -> 6, 3 -> 3, 4 -> 5; the
  // point (0, 3, 4) realizes max order 5 and nothing smaller exists
  CHECK(rep.min_max_order == 5);
  CHECK(rep.bound == doctest::Approx(0.8131).epsilon(1e-3));
  CHECK(rep.ok);
  CHECK(cy::order_lower_bound_check(s5, ctx5));

  for (u64 p : {7ull, 11ull, 13ull, 29ull, 61ull, 97ull}) {
    auto ctx = PrimeContext::make(p);
    const auto s = orb::SolutionSet::enumerate(p);
    CHECK(cy::order_lower_bound_check(s, ctx));
  }
}

TEST_CASE("order lower bound agrees with the cage's minimum") {
  auto ctx = PrimeContext::make(13);
  const auto s = orb::SolutionSet::enumerate(13);
  const auto part = orb::components(s);
  const auto cage = orb::cage(s, ctx, part);
  CHECK(cy::order_bound_report(s, ctx).min_max_order == cage.min_max_order);
}

TEST_CASE("smoothness_check: frozen small primes") {
  auto ctx5 = PrimeContext::make(5);
  const auto r5 = cy::smoothness_check(5, ctx5);
  CHECK(r5.p == 5);
  CHECK(r5.divisors == std::vector<u64>{2, 3, 4, 6, 8, 12, 24});
  CHECK(r5.first_fail_y == 3);  // 2^(2/3) + 3^(2/3) = 3.667 >= 3
  CHECK(!r5.verdict);

  auto ctx3 = PrimeContext::make(3);
  const auto r3 = cy::smoothness_check(3, ctx3);
  CHECK(r3.divisors == std::vector<u64>{2, 4, 8});
  CHECK(r3.first_fail_y == 4);
  CHECK(!r3.verdict);

  // 2 and 3 divide p^2-1 for every p >= 5, so y = 3 always fails
  bool all_fail_at_3 = true;
  for (u64 p = 5; p <= 199; ++p) {
    if (!markoff::ff::is_prime(p)) continue;
    auto ctx = PrimeContext::make(p);
    const auto r = cy::smoothness_check(p, ctx);
    all_fail_at_3 &= !r.verdict && r.first_fail_y == 3;
  }
  CHECK(all_fail_at_3);
}

TEST_CASE("smoothness_check matches the integer scan") {
  for (u64 p : {5ull, 13ull, 17ull, 29ull}) {
    auto ctx = PrimeContext::make(p);
    const auto r = cy::smoothness_check(p, ctx);
    const u64 brute = first_integer_failure_brute(p);
    CHECK(r.first_fail_y == brute);
    CHECK(r.verdict == (brute == 0));
  }
}

TEST_CASE("eta_norm_check: conjugate products against 20^phi(n)") {
  CHECK(cy::eta_norm_check(triple(1, 4, 3, 4, 1, 4)));  // norm 0 <= 400
  CHECK(cy::eta_norm_check(triple(0, 1, 0, 1, 0, 1)));  // 4 <= 20
  CHECK(cy::eta_norm_check(triple(1, 2, 1, 2, 1, 2)));  // 20 <= 20, exactly
  CHECK(cy::eta_norm_check(triple(1, 6, 1, 3, 0, 1)));  // n = 6, norm 64
  CHECK(cy::eta_norm_check(triple(1, 5, 0, 1, 0, 1)));  // n = 5, four conjugates

  CHECK_THROWS_AS(cy::eta_norm_check(triple(1, 31, 0, 1, 0, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(cy::eta_norm_check(triple(1, 7, 1, 5, 0, 1)),
                  std::invalid_argument);

  // all orders <= 6: the bound holds whenever the lcm is in range
  u64 checked = 0, rejected = 0;
  bool ok = true;
  const auto roots = roots_up_to(6);
  for (const auto& a : roots)
    for (const auto& b : roots)
      for (const auto& c : roots) {
        const u64 n = std::lcm(std::lcm(a.l, b.l), c.l);
        if (n > 30) {
          CHECK_THROWS_AS(cy::eta_norm_check(cy::root_triple(a, b, c)),
                          std::invalid_argument);
          ++rejected;
        } else {
          ok &= cy::eta_norm_check(cy::root_triple(a, b, c));
          ++checked;
        }
      }
  CHECK(ok);
  CHECK(checked > 1000);
  CHECK(rejected > 0);  // lcm(4, 5, 6) = 60
}
