#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <vector>

#include "markoff/ff.hpp"
#include "markoff/orbits.hpp"
#include "markoff/surface.hpp"

using markoff::ff::u64;
using markoff::ff::PrimeContext;
using markoff::orbits::CageReport;
using markoff::orbits::SolutionSet;
using markoff::surface::Triple;

namespace {

std::set<u64> brute_indices(u64 p) {
  std::set<u64> out;
  for (u64 a = 0; a < p; ++a)
    for (u64 b = 0; b < p; ++b)
      for (u64 c = 0; c < p; ++c) {
        Triple t{a, b, c};
        if ((a | b | c) != 0 && markoff::surface::is_on_surface(t, p))
          out.insert(markoff::surface::canonical_index(t, p));
      }
  return out;
}

}  // namespace

TEST_CASE("enumerate matches the cubic brute force and drops the origin") {
  for (u64 p : {3, 5, 7, 11, 13}) {
    auto s = SolutionSet::enumerate(p);
    auto expect = brute_indices(p);
    REQUIRE(s.size() == expect.size());
    u64 prev = 0;
    bool first = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
      u64 idx = markoff::surface::canonical_index(s.point(i), p);
      CHECK(expect.count(idx) == 1);
      if (!first) CHECK(idx > prev);
      prev = idx;
      first = false;
    }
    CHECK_FALSE(s.contains(Triple{0, 0, 0}));
  }
}

TEST_CASE("solution counts for small primes") {
  auto count = [](u64 p) { return SolutionSet::enumerate(p).size(); };
  CHECK(count(3) == 8);
  CHECK(count(5) == 40);
  CHECK(count(7) == 28);
  CHECK(count(11) == 88);
  CHECK(count(13) == 208);
  CHECK(count(17) == 340);
}

TEST_CASE("contains and position agree on every point") {
  auto s = SolutionSet::enumerate(13);
  for (std::size_t i = 0; i < s.size(); ++i) {
    Triple t = s.point(i);
    CHECK(s.contains(t));
    CHECK(s.position(t) == i);
  }
  CHECK_FALSE(s.contains(Triple{1, 1, 3}));
  CHECK_THROWS_AS((void)s.position(Triple{0, 0, 0}), std::invalid_argument);
}

TEST_CASE("union-find partition agrees with an independent BFS") {
  for (u64 p = 3; p <= 61; ++p) {
    if (!markoff::ff::is_prime(p)) continue;
    CAPTURE(p);
    auto s = SolutionSet::enumerate(p);
    auto part = markoff::orbits::components(s);

    u64 total = 0;
    for (u64 sz : part.component_sizes) total += sz;
    REQUIRE(total == s.size());
    for (std::size_t i = 1; i < part.component_sizes.size(); ++i)
      CHECK(part.component_sizes[i - 1] >= part.component_sizes[i]);

    u64 bfs = markoff::orbits::bfs_component_size(s);
    std::uint32_t home = part.component[s.position(Triple{1, 1, 1})];
    u64 home_size = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (part.component[i] == home) ++home_size;
    CHECK(bfs == home_size);

    if (p >= 5) {
      CHECK(part.n_components() == 1);
      CHECK(bfs == s.size());
    }
  }
}

TEST_CASE("rotation orders: table, divisibility, and the (1,1,1) value") {
  auto c5 = PrimeContext::make(5);
  auto table5 = markoff::orbits::rot_order_table(c5);
  REQUIRE(table5.size() == 5);
  CHECK(markoff::orbits::max_order(Triple{1, 1, 1}, table5) == 10);
  CHECK(markoff::orbits::max_order(Triple{1, 1, 1}, c5) == 10);

  auto c13 = PrimeContext::make(13);
  auto table13 = markoff::orbits::rot_order_table(c13);
  for (u64 xi = 0; xi < 13; ++xi) {
    u64 o = table13[xi];
    bool ok = (12 % o == 0) || (14 % o == 0) || o == 13 || o == 26;
    CHECK(ok);
  }
  auto s = SolutionSet::enumerate(13);
  for (std::size_t i = 0; i < s.size(); ++i) {
    Triple t = s.point(i);
    CHECK(markoff::orbits::max_order(t, table13) ==
          markoff::orbits::max_order(t, c13));
  }
}

TEST_CASE("cage membership, connectivity, and residual") {
  for (u64 p : {5, 7, 13, 17}) {
    CAPTURE(p);
    auto ctx = PrimeContext::make(p);
    auto s = SolutionSet::enumerate(p);
    auto part = markoff::orbits::components(s);
    CageReport rep = markoff::orbits::cage(s, ctx, part);

    // recount directly from classify
    u64 want_cage = 0, want_hyp = 0, want_mmo = UINT64_MAX;
    for (std::size_t i = 0; i < s.size(); ++i) {
      Triple t = s.point(i);
      bool in_cage = false, in_hyp = false;
      u64 mo = 0;
      for (int j = 1; j <= 3; ++j) {
        u64 o = markoff::surface::classify(markoff::surface::coord(t, j), ctx)
                    .rot_order;
        mo = std::max(mo, o);
        if (o == p - 1 || o == p + 1) in_cage = true;
        if (o == p - 1) in_hyp = true;
      }
      want_cage += in_cage;
      want_hyp += in_hyp;
      want_mmo = std::min(want_mmo, mo);
    }
    CHECK(rep.cage_size == want_cage);
    CHECK(rep.cage_hyperbolic_size == want_hyp);
    CHECK(rep.min_max_order == want_mmo);

    CHECK(rep.cage_size > 0);
    CHECK(rep.cage_hyperbolic_size > 0);
    CHECK(rep.cage_single_component);
    CHECK(rep.cage_hyperbolic_single_component);
    CHECK(rep.residual == 0);
  }
}

TEST_CASE("cage values at p = 5") {
  // orders by coordinate value: 0 -> 4, 1 -> 10, 2 -> 6, 3 -> 3, 4 -> 5,
  // so the cage is the set of points touching {0, 2} and the hyperbolic
  // cage the set touching {0}.
  auto ctx = PrimeContext::make(5);
  auto s = SolutionSet::enumerate(5);
  auto part = markoff::orbits::components(s);
  CageReport rep = markoff::orbits::cage(s, ctx, part);
  CHECK(rep.cage_size == 30);
  CHECK(rep.cage_hyperbolic_size == 24);
  CHECK(rep.min_max_order == 5);
  CHECK(rep.residual == 0);
}
