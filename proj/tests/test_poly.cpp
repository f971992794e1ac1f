#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "markoff/poly.hpp"

using namespace markoff::poly;

TEST_CASE("trim, degree, zero") {
  CHECK(degree({}) == -1);
  CHECK(is_zero(trim({0, 0, 0})));
  CHECK(trim({1, 2, 0}) == Poly{1, 2});
  CHECK(degree(Poly{3}) == 0);
}

TEST_CASE("ring operations mod 7") {
  Poly f{1, 2, 3};  // 3x^2 + 2x + 1
  Poly g{6, 5};     // 5x + 6
  CHECK(add(f, g, 7) == Poly{0, 0, 3});
  CHECK(sub(f, g, 7) == Poly{2, 4, 3});
  CHECK(mul(f, g, 7) == Poly{6, 3, 0, 1});
  CHECK(mul(f, {}, 7).empty());
  CHECK(scale(f, 0, 7).empty());
  CHECK(eval(f, 2, 7) == (3 * 4 + 2 * 2 + 1) % 7);
}

TEST_CASE("derivative, including the characteristic-p collapse") {
  CHECK(derivative({5, 2, 0, 1}, 7) == Poly{2, 0, 3});
  CHECK(derivative({4}, 7).empty());
  Poly x7 = monomial(1, 7);
  CHECK(derivative(x7, 7).empty());  // 7 x^6 = 0 mod 7
}

TEST_CASE("divmod reconstructs and bounds the remainder") {
  const u64 p = 101;
  std::mt19937_64 rng(42);
  for (int iter = 0; iter < 50; ++iter) {
    Poly f(10), g(5);
    for (auto& c : f) c = rng() % p;
    for (auto& c : g) c = rng() % p;
    g[4] = 1 + rng() % (p - 1);
    auto [q, r] = divmod(f, g, p);
    CHECK(degree(r) < degree(trim(g)));
    CHECK(add(mul(q, g, p), r, p) == trim(f));
  }
  CHECK_THROWS_AS(divmod({1, 1}, {}, 7), std::invalid_argument);
  auto [q, r] = divmod({1, 1}, {0, 0, 5}, 7);
  CHECK(q.empty());
  CHECK(r == Poly{1, 1});
}

TEST_CASE("gcd is monic and matches known factors") {
  // (x-1)(x+1) vs (x-1)^2
  Poly a = from_roots({1, 6}, 7);
  Poly b = from_roots({1, 1}, 7);
  CHECK(gcd(a, b, 7) == Poly{6, 1});  // x - 1
  CHECK(gcd(a, {}, 7) == Poly{6, 0, 1});  // monic normalization of a
  CHECK(gcd({}, {}, 7).empty());

  // gcd(x^t - 1, x^s - 1) = x^gcd(t,s) - 1
  const u64 p = 13;
  Poly xt = sub(monomial(1, 12), {1}, p);
  Poly xs = sub(monomial(1, 8), {1}, p);
  CHECK(gcd(xt, xs, p) == sub(monomial(1, 4), Poly{1}, p));
}

TEST_CASE("from_roots and power") {
  CHECK(from_roots({1, 2}, 7) == Poly{2, 4, 1});
  CHECK(from_roots({}, 7) == Poly{1});
  CHECK(power({1, 1}, 2, 5) == Poly{1, 2, 1});
  CHECK(power({1, 1}, 0, 5) == Poly{1});
  // freshman's dream: (x+1)^7 = x^7 + 1 mod 7
  Poly e = monomial(1, 7);
  e[0] = 1;
  CHECK(power({1, 1}, 7, 7) == e);
}

TEST_CASE("eval agrees with expanded products") {
  const u64 p = 97;
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 30; ++iter) {
    std::vector<u64> roots{rng() % p, rng() % p, rng() % p};
    Poly f = from_roots(roots, p);
    u64 x = rng() % p;
    u64 direct = 1;
    for (u64 r : roots)
      direct = markoff::ff::mul_mod(direct, markoff::ff::sub_mod(x, r, p), p);
    CHECK(eval(f, x, p) == direct);
    for (u64 r : roots) CHECK(eval(f, r, p) == 0);
  }
}
