// Acceptance sweep: one verdict line per criterion, each checking computed
// values against an independent oracle or an exact law over a fixed prime
// range.  Check 5 is split: 5a is the incidence diameter, 5b the flat
// (p-1)/2 meeting-degree claim, which fails for p = 3 mod 4 and is reported
// as stated but excluded from the exit code, and 5c the parity-corrected
// law that is enforced in its place.  Exit code 0 iff every enforced check
// passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "markoff/counting.hpp"
#include "markoff/cyclo.hpp"
#include "markoff/ff.hpp"
#include "markoff/incidence.hpp"
#include "markoff/orbits.hpp"
#include "markoff/stepanov.hpp"
#include "markoff/surface.hpp"

namespace ff = markoff::ff;
namespace sf = markoff::surface;
namespace orb = markoff::orbits;
namespace inc = markoff::incidence;
namespace cnt = markoff::counting;
namespace st = markoff::stepanov;
namespace cy = markoff::cyclo;

using ff::u64;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::vector<u64> primes_in(u64 lo, u64 hi) {
  std::vector<u64> out;
  for (u64 p = lo; p <= hi; ++p)
    if (ff::is_prime(p)) out.push_back(p);
  return out;
}

std::string num(u64 v) { return std::to_string(v); }

// 1. Enumeration equals the cubic full scan, as sets, for p <= 61.
Verdict check_enumeration_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  u64 checked = 0;
  for (u64 p : primes_in(3, 61)) {
    std::vector<u64> oracle;
    for (u64 x1 = 0; x1 < p; ++x1)
      for (u64 x2 = 0; x2 < p; ++x2)
        for (u64 x3 = 0; x3 < p; ++x3) {
          if (x1 == 0 && x2 == 0 && x3 == 0) continue;
          const sf::Triple t{x1, x2, x3};
          if (sf::is_on_surface(t, p)) oracle.push_back(sf::canonical_index(t, p));
        }
    const auto s = orb::SolutionSet::enumerate(p);
    if (s.size() != oracle.size())
      return {false, "size mismatch at p = " + num(p)};
    for (std::size_t i = 0; i < oracle.size(); ++i)
      if (sf::canonical_index(s.point(i), p) != oracle[i])
        return {false, "set mismatch at p = " + num(p)};
    ++checked;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "set equality against the cubic scan on %llu primes, %.2f s",
                (unsigned long long)checked, secs);
  return {secs < 1.0, buf};
}

// 2. One orbit component per prime, 5 <= p <= 1000, BFS agreeing for
// p <= 300.  12. Every point's maximal rotation order clears the cubed
// order bound, p <= 1000.  Both share one enumeration pass.
Verdict g_order_bound;  // filled by check_single_component

Verdict check_single_component() {
  u64 bound_failures = 0, primes_seen = 0;
  std::string bound_detail;
  for (u64 p : primes_in(3, 1000)) {
    const auto s = orb::SolutionSet::enumerate(p);
    const auto ctx = ff::PrimeContext::make(p);
    ++primes_seen;
    if (!cy::order_bound_report(s, ctx).ok) {
      ++bound_failures;
      if (bound_detail.empty()) bound_detail = "first failure p = " + num(p);
    }
    if (p < 5) continue;
    const auto part = orb::components(s);
    if (part.n_components() != 1)
      return {false, num(part.n_components()) + " components at p = " + num(p)};
    if (p <= 300 && orb::bfs_component_size(s) != part.component_sizes[0])
      return {false, "BFS disagrees with union-find at p = " + num(p)};
  }
  g_order_bound.pass = bound_failures == 0;
  g_order_bound.detail =
      bound_failures == 0
          ? "cubed comparison 20^(m^3) >= p on every point, " +
                num(primes_seen) + " primes"
          : bound_detail;
  return {true, "union-find, BFS cross-checked to 300, all primes to 1000"};
}

// 3. Fiber sizes by class: p-1 hyperbolic, p+1 elliptic, 2p or 0 parabolic.
Verdict check_conic_counts() {
  u64 fibers = 0;
  for (u64 p : primes_in(5, 200)) {
    const auto ctx = ff::PrimeContext::make(p);
    for (u64 xi = 1; xi < p; ++xi) {
      const auto c = sf::classify(xi, ctx);
      u64 want = 0;
      switch (c.cls) {
        case sf::ConicClass::Hyperbolic: want = p - 1; break;
        case sf::ConicClass::Elliptic: want = p + 1; break;
        case sf::ConicClass::Parabolic: want = p % 4 == 1 ? 2 * p : 0; break;
      }
      if (c.point_count != want)
        return {false, "classified count off at p = " + num(p) +
                           ", xi = " + num(xi)};
      if (sf::conic_points(1, xi, ctx).size() != want)
        return {false, "enumerated fiber off at p = " + num(p) +
                           ", xi = " + num(xi)};
      ++fibers;
    }
  }
  return {true, num(fibers) + " fibers across p <= 200, all exact"};
}

// 4. The two-fiber intersection formula equals the direct shared-point scan.
Verdict check_intersection_formula() {
  u64 pairs = 0;
  for (u64 p : primes_in(3, 61)) {
    const auto ctx = ff::PrimeContext::make(p);
    for (u64 xi = 0; xi < p; ++xi)
      for (u64 eta = 0; eta < p; ++eta) {
        int direct = 0;
        for (u64 z = 0; z < p; ++z)
          if (sf::is_on_surface({xi, eta, z}, p)) ++direct;
        if (sf::intersection_count(xi, eta, ctx) != direct)
          return {false, "mismatch at p = " + num(p) + ", (xi, eta) = (" +
                             num(xi) + ", " + num(eta) + ")"};
        ++pairs;
      }
  }
  return {true, num(pairs) + " (xi, eta) pairs across p <= 61, all exact"};
}

// 5a. Incidence diameter 2 for 11 <= p <= 200.
// 5b. The flat (p-1)/2 meeting-degree claim, reported as stated.
// 5c. The parity-corrected law enforced instead.
Verdict g_meeting_flat, g_meeting_parity;

Verdict check_incidence_diameter() {
  u64 flat_fail_p = 0, flat_fail_degree = 0;
  for (u64 p : primes_in(5, 200)) {
    const auto ctx = ff::PrimeContext::make(p);
    const auto g = inc::IncidenceGraph::build(ctx);
    const auto law = inc::meeting_law(g);
    if (!law.nonparabolic_uniform || !law.matches_parity_rule ||
        !law.parabolic_meets_all) {
      g_meeting_parity = {false, "parity law breaks at p = " + num(p)};
      return {false, "meeting law failure at p = " + num(p)};
    }
    if (p >= 11 && !law.matches_half && flat_fail_p == 0) {
      flat_fail_p = p;
      flat_fail_degree = law.nonparabolic_degree;
    }
    if (p < 11) continue;
    const auto diam = inc::diameter(g);
    if (!diam.connected || diam.diameter != 2)
      return {false, "diameter " + num(diam.diameter) + " at p = " + num(p)};
  }
  g_meeting_parity = {
      true, "degree (p-1)/2 for p = 1 mod 4, (p+1)/2 for p = 3 mod 4, "
            "uniform, p <= 200"};
  g_meeting_flat =
      flat_fail_p == 0
          ? Verdict{true, "flat (p-1)/2 degree held everywhere"}
          : Verdict{false, "degree " + num(flat_fail_degree) + " = (p+1)/2 at p = " +
                               num(flat_fail_p) +
                               "; fails for every p = 3 mod 4"};
  return {true, "diameter 2 on every prime in [11, 200]"};
}

// 6. Direct primitive-root count equals the inclusion-exclusion form for
// every subgroup, and the split-curve count factors as f e d, exactly.
Verdict check_inclusion_exclusion() {
  std::mt19937_64 rng(61001);
  u64 ph_checks = 0, curve_checks = 0;
  for (u64 p : primes_in(5, 200)) {
    const auto ctx = ff::PrimeContext::make(p);
    const auto divs = ff::divisors(ctx.fact_pm1);
    std::vector<ff::SubgroupSpec> subs;
    for (u64 m : divs) subs.push_back(ff::subgroup(ff::Ambient::Split, m, ctx));
    for (int i = 0; i < 20; ++i) {
      const u64 a = 1 + rng() % (p - 1);
      const u64 b = 1 + rng() % (p - 1);
      for (const auto& H : subs) {
        cnt::count_PH(a, b, H, ctx);  // direct and moebius compared inside
        ++ph_checks;
      }
      const u64 e = divs[rng() % divs.size()];
      const u64 d = divs[rng() % divs.size()];
      const auto cc = cnt::count_split_curve(a, b, e, d, ctx);
      if (cc.n_points != cc.f_value * cc.e_H * cc.d_K)
        return {false, "curve count does not factor at p = " + num(p)};
      ++curve_checks;
    }
  }
  return {true, num(ph_checks) + " subgroup comparisons, " +
                    num(curve_checks) + " curve factorizations, p <= 200"};
}

// 7. Trace-equation counts stay inside the trivial and gcd-method bounds
// over the full subgroup-pair sweep.
Verdict check_trace_bounds() {
  std::mt19937_64 rng(61002);
  u64 checks = 0;
  for (u64 p : primes_in(5, 300)) {
    const auto ctx = ff::PrimeContext::make(p);
    std::vector<ff::SubgroupSpec> subs;
    for (u64 m : ff::divisors(ctx.fact_pm1))
      subs.push_back(ff::subgroup(ff::Ambient::Split, m, ctx));
    std::vector<u64> sigmas;
    if (p - 2 <= 50) {
      for (u64 s = 2; s < p; ++s) sigmas.push_back(s);
    } else {
      std::set<u64> seen;
      while (seen.size() < 50) seen.insert(2 + rng() % (p - 2));
      sigmas.assign(seen.begin(), seen.end());
    }
    for (u64 sigma : sigmas)
      for (const auto& h1 : subs)
        for (const auto& h2 : subs) {
          const auto rec = cnt::count_eq_p41(sigma, h1, h2, ctx);
          if (!rec.trivial_bound_ok)
            return {false, "trivial bound broken at p = " + num(p) +
                               ", sigma = " + num(sigma)};
          if (!rec.gcd_bound_ok)
            return {false, "gcd bound broken at p = " + num(p) +
                               ", sigma = " + num(sigma)};
          ++checks;
        }
  }
  return {true, num(checks) + " (sigma, H1, H2) triples across p <= 300"};
}

// 8. The (u,v) -> (x,y) transform identities and the Moebius form.
Verdict check_middlegame() {
  std::mt19937_64 rng(61003);
  const auto ps = primes_in(5, 79);  // twenty primes
  u64 draws = 0;
  for (u64 p : ps) {
    const auto ctx = ff::PrimeContext::make(p);
    for (int i = 0; i < 10000; ++i) {
      const u64 f1 = 1 + rng() % (p - 1);
      const u64 f2 = 1 + rng() % (p - 1);
      const u64 t = 1 + rng() % (p - 1);
      const u64 sigma = 2 + rng() % (p - 2);
      const auto mg = cnt::middlegame_transform(f1, f2, t, sigma, ctx);
      if (mg.eq22 != mg.eq23)
        return {false, "the two conic forms disagree at p = " + num(p)};
      if (mg.mobius_ok != (!mg.pole && mg.eq23))
        return {false, "Moebius form inconsistent at p = " + num(p)};
      ++draws;
    }
  }
  return {true, num(draws) + " random (f1, f2, t, sigma) draws, " +
                    num(ps.size()) + " primes"};
}

// 9. det Phi(t) = (1 - sigma)(4 - t^2) symbolically and at 100 random t,
// and the generated pair closes into the full determinant-one group.
Verdict check_phi_nondegeneracy() {
  std::mt19937_64 rng(61004);
  u64 det_checks = 0;
  for (u64 p : primes_in(5, 200)) {
    const auto ctx = ff::PrimeContext::make(p);
    std::set<u64> sigmas;
    if (p - 2 <= 5)
      for (u64 s = 2; s < p; ++s) sigmas.insert(s);
    else
      while (sigmas.size() < 5) sigmas.insert(2 + rng() % (p - 2));
    for (u64 sigma : sigmas) {
      const auto rep = cnt::phi_nondegeneracy(sigma, ctx, rng);
      if (!rep.det_identity_symbolic || !rep.det_identity_pointwise)
        return {false, "determinant identity fails at p = " + num(p) +
                           ", sigma = " + num(sigma)};
      if (!rep.word_nontrivial)
        return {false, "no nontrivial word witness at p = " + num(p) +
                           ", sigma = " + num(sigma)};
      ++det_checks;
    }
  }

  u64 closures = 0, doubled = 0;
  for (u64 p : {5ull, 7ull, 11ull, 13ull}) {
    const auto ctx = ff::PrimeContext::make(p);
    const u64 sl2 = p * (p * p - 1);
    bool attained = false;
    for (u64 sigma = 2; sigma < p; ++sigma) {
      const auto rep = cnt::phi_nondegeneracy(sigma, ctx, rng, true);
      if (!rep.closure_computed)
        return {false, "closure not computed at p = " + num(p)};
      ++closures;
      if (rep.closure_det1_order == sl2) attained = true;
      if (rep.kappa_in_base && rep.closure_det1_order != sl2)
        return {false, "base-field closure of order " +
                           num(rep.closure_det1_order) + " at p = " + num(p) +
                           ", sigma = " + num(sigma)};
      // kappa in the quadratic extension may double the group inside the
      // extension's determinant-one part
      if (rep.closure_det1_order != sl2) {
        if (rep.closure_det1_order != 2 * sl2)
          return {false, "unexpected closure order " +
                             num(rep.closure_det1_order) + " at p = " +
                             num(p)};
        ++doubled;
      }
    }
    if (!attained)
      return {false, "no sigma closes into the determinant-one group at p = " +
                         num(p)};
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%llu determinant sweeps; %llu closures over p in {5,7,11,13}"
                " (%llu doubled in the quadratic extension)",
                (unsigned long long)det_checks, (unsigned long long)closures,
                (unsigned long long)doubled);
  return {true, buf};
}

// 10. Auxiliary polynomials exist with the vanishing budget respected, and
// the unit-circle intersection scan matches the gcd oracle everywhere.
Verdict check_aux_polynomials() {
  u64 instances = 0, first_p = 0, last_p = 0, cor_checks = 0;
  std::mt19937_64 rng(61005);
  for (u64 p : primes_in(5, 500)) {
    const auto ctx = ff::PrimeContext::make(p);
    const auto fn = st::classic_spec(ctx);
    const auto divs = ff::divisors(ctx.fact_pm1);

    for (u64 t : divs) {
      if (static_cast<unsigned __int128>(t) * t * t * t >
          static_cast<unsigned __int128>(p) * p * p)
        continue;  // t <= p^(3/4), compared exactly by fourth powers
      for (int i = 0; i < 20; ++i) {
        st::MoebiusMap m;
        do {
          m.a = rng() % p;
          m.b = rng() % p;
          m.c = rng() % p;
          m.d = rng() % p;
        } while (ff::sub_mod(ff::mul_mod(m.a, m.d, p),
                             ff::mul_mod(m.b, m.c, p), p) == 0 ||
                 (m.b == 0 && m.c == 0 && m.a == m.d));
        st::count_unit_intersection(m, t, ctx);  // scan == gcd oracle inside
        ++cor_checks;
      }
    }

    for (auto it1 = divs.rbegin(); it1 != divs.rend(); ++it1) {
      if (*it1 < 2) continue;
      std::optional<st::AuxPolyParams> found;
      for (auto it2 = divs.rbegin(); it2 != divs.rend() && !found; ++it2) {
        if (*it2 > *it1) continue;
        found = st::suggest_params(fn, *it1, *it2, ctx);
      }
      if (!found) continue;
      const auto params = *found;
      const auto aux = st::build_aux_poly(fn, params, ctx);
      if (aux.kernel_dim < 1)
        return {false, "trivial kernel at p = " + num(p)};
      if (aux.y_set.size() != st::count_Y(fn, params.t1, params.t2, ctx))
        return {false, "vanishing set size off at p = " + num(p)};
      if (params.M * aux.y_set.size() >
          params.J + fn.e() * params.B * params.t1)
        return {false, "vanishing budget overrun at p = " + num(p)};
      ++instances;
      if (first_p == 0) first_p = p;
      last_p = p;
      break;
    }
  }
  if (instances < 10)
    return {false, "only " + num(instances) + " parameter-valid instances"};
  return {true, num(instances) + " instances (p = " + num(first_p) + " .. " +
                    num(last_p) + "), " + num(cor_checks) +
                    " scan-vs-gcd comparisons, p <= 500"};
}

// 11. The root-of-unity sweep: eta vanishes only at +-i triples, stays in
// [0, 20], and the conjugate-product norm bound holds through order 12.
Verdict check_root_sweep() {
  const auto rep = cy::no_finite_orbit_sweep(24);
  std::vector<cy::RootOfUnity> roots;
  for (u64 l = 1; l <= 24; ++l)
    for (u64 k = 0; k < l; ++k)
      if (std::gcd(k, l) == 1) roots.push_back(cy::root_of_unity(k, l));
  const u64 n = roots.size();
  if (rep.tuples != n * n * n)
    return {false, "sweep visited " + num(rep.tuples) + " tuples, expected " +
                       num(n * n * n)};
  if (rep.zero_tuples != 8 || !rep.nonzero_rigorous || rep.min_lower <= 0.0)
    return {false, "zero set or rigor flag off: " + num(rep.zero_tuples) +
                       " zeros"};

  double max_hi = 0.0;
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i; j < roots.size(); ++j)
      for (std::size_t k = j; k < roots.size(); ++k) {
        const auto v =
            cy::eta(cy::root_triple(roots[i], roots[j], roots[k]));
        if (v.hi > 20.0)
          return {false, "eta enclosure exceeds 20"};
        max_hi = std::max(max_hi, v.hi);
      }

  u64 norm_checks = 0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (roots[i].l > 12) continue;
    for (std::size_t j = i; j < roots.size(); ++j) {
      if (roots[j].l > 12) continue;
      const u64 lij = std::lcm(roots[i].l, roots[j].l);
      for (std::size_t k = j; k < roots.size(); ++k) {
        if (roots[k].l > 12 || std::lcm(lij, roots[k].l) > 12) continue;
        if (!cy::eta_norm_check(
                cy::root_triple(roots[i], roots[j], roots[k])))
          return {false, "conjugate-product bound fails at orders (" +
                             num(roots[i].l) + ", " + num(roots[j].l) + ", " +
                             num(roots[k].l) + ")"};
        ++norm_checks;
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%llu tuples, 8 zeros (all +-i), max eta %.6f <= 20, "
                "%llu norm products through order 12",
                (unsigned long long)rep.tuples, max_hi,
                (unsigned long long)norm_checks);
  return {true, buf};
}

// 13. The smoothness classifier agrees with a direct integer scan that
// re-derives the divisors by trial division.
Verdict check_smoothness_scan() {
  const auto c5 = ff::PrimeContext::make(5);
  const auto r5 = cy::smoothness_check(5, c5);
  if (r5.verdict || r5.first_fail_y != 3)
    return {false, "p = 5 must first fail at threshold 3"};

  for (u64 p : primes_in(3, 200)) {
    const auto ctx = ff::PrimeContext::make(p);
    const auto rep = cy::smoothness_check(p, ctx);
    const u64 n = p * p - 1;
    const long double cutoff = logl(static_cast<long double>(p));
    long double sum = 0;
    u64 first_fail = 0;
    for (u64 y = 2; y <= n && first_fail == 0; ++y) {
      if (n % y != 0) continue;
      if (static_cast<long double>(y) * y * y < cutoff) continue;
      sum += cbrtl(static_cast<long double>(y) * y);
      if (sum > static_cast<long double>(y)) first_fail = y;
    }
    if (rep.verdict != (first_fail == 0) || rep.first_fail_y != first_fail)
      return {false, "verdict differs from the integer scan at p = " + num(p)};
  }
  return {true, "classifier == integer scan for every p <= 200; p = 5 "
                "fails first at 3"};
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Line {
    const char* label;
    Verdict v;
    bool enforced = true;
  };
  std::vector<Line> lines;
  auto run = [&](const char* label, Verdict (*fn)(), bool enforced = true) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    lines.push_back({label, v, enforced});
  };

  run("1", check_enumeration_oracle);
  run("2", check_single_component);
  lines.push_back({"12", g_order_bound});  // shares the pass above
  run("3", check_conic_counts);
  run("4", check_intersection_formula);
  run("5a", check_incidence_diameter);
  lines.push_back({"5b", g_meeting_flat, false});
  lines.push_back({"5c", g_meeting_parity});
  run("6", check_inclusion_exclusion);
  run("7", check_trace_bounds);
  run("8", check_middlegame);
  run("9", check_phi_nondegeneracy);
  run("10", check_aux_polynomials);
  run("11", check_root_sweep);
  run("13", check_smoothness_scan);

  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    const auto key = [](const Line& l) {
      const int n = std::atoi(l.label);
      const char sub = l.label[n >= 10 ? 2 : 1];
      return n * 4 + (sub ? sub - 'a' + 1 : 0);
    };
    return key(a) < key(b);
  });

  int failures = 0;
  for (const auto& line : lines) {
    const bool counted = line.enforced;
    if (counted && !line.v.pass) ++failures;
    std::printf("%-3s %s%s  %s\n", line.label,
                line.v.pass ? "PASS" : "FAIL",
                counted ? " " : "*", line.v.detail.c_str());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("----\n");
  std::printf(
      "%d enforced failure(s); lines marked * are reported as stated but "
      "excluded from the exit code (the flat degree claim holds only for "
      "p = 1 mod 4; 5c enforces the parity-corrected law). %.1f s total.\n",
      failures, secs);
  return failures == 0 ? 0 : 1;
}
