#include "markoff/poly.hpp"

#include <stdexcept>

namespace markoff::poly {

using ff::add_mod;
using ff::inv_mod;
using ff::mul_mod;
using ff::sub_mod;

Poly trim(Poly f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}

int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

bool is_zero(const Poly& f) { return f.empty(); }

Poly add(const Poly& f, const Poly& g, u64 p) {
  Poly r(std::max(f.size(), g.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    u64 a = i < f.size() ? f[i] : 0;
    u64 b = i < g.size() ? g[i] : 0;
    r[i] = add_mod(a, b, p);
  }
  return trim(std::move(r));
}

Poly sub(const Poly& f, const Poly& g, u64 p) {
  Poly r(std::max(f.size(), g.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    u64 a = i < f.size() ? f[i] : 0;
    u64 b = i < g.size() ? g[i] : 0;
    r[i] = sub_mod(a, b, p);
  }
  return trim(std::move(r));
}

Poly mul(const Poly& f, const Poly& g, u64 p) {
  if (f.empty() || g.empty()) return {};
  Poly r(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) {
      r[i + j] = add_mod(r[i + j], mul_mod(f[i], g[j], p), p);
    }
  }
  return trim(std::move(r));
}

Poly scale(const Poly& f, u64 c, u64 p) {
  c %= p;
  if (c == 0) return {};
  Poly r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = mul_mod(f[i], c, p);
  return trim(std::move(r));
}

Poly derivative(const Poly& f, u64 p) {
  if (f.size() <= 1) return {};
  Poly r(f.size() - 1);
  for (std::size_t i = 1; i < f.size(); ++i) r[i - 1] = mul_mod(f[i], i % p, p);
  return trim(std::move(r));
}

u64 eval(const Poly& f, u64 x, u64 p) {
  u64 v = 0;
  for (std::size_t i = f.size(); i-- > 0;) v = add_mod(mul_mod(v, x, p), f[i], p);
  return v;
}

std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g_in, u64 p) {
  Poly g = trim(g_in);
  if (g.empty()) throw std::invalid_argument("divmod: zero divisor");
  Poly r = trim(f);
  if (r.size() < g.size()) return {{}, std::move(r)};
  Poly q(r.size() - g.size() + 1, 0);
  u64 lead_inv = inv_mod(g.back(), p);
  for (std::size_t i = q.size(); i-- > 0;) {
    u64 c = mul_mod(r[i + g.size() - 1], lead_inv, p);
    if (c == 0) continue;
    q[i] = c;
    for (std::size_t j = 0; j < g.size(); ++j) {
      r[i + j] = sub_mod(r[i + j], mul_mod(c, g[j], p), p);
    }
  }
  return {trim(std::move(q)), trim(std::move(r))};
}

Poly gcd(Poly f, Poly g, u64 p) {
  f = trim(std::move(f));
  g = trim(std::move(g));
  while (!g.empty()) {
    Poly r = divmod(f, g, p).second;
    f = std::move(g);
    g = std::move(r);
  }
  if (!f.empty() && f.back() != 1) f = scale(f, inv_mod(f.back(), p), p);
  return f;
}

Poly monomial(u64 c, std::size_t k) {
  if (c == 0) return {};
  Poly r(k + 1, 0);
  r[k] = c;
  return r;
}

Poly from_roots(const std::vector<u64>& roots, u64 p) {
  Poly r{1 % p};
  for (u64 a : roots) r = mul(r, Poly{sub_mod(0, a % p, p), 1}, p);
  return r;
}

Poly power(const Poly& f, u64 e, u64 p) {
  Poly r{1 % p};
  Poly base = f;
  while (e) {
    if (e & 1) r = mul(r, base, p);
    base = mul(base, base, p);
    e >>= 1;
  }
  return r;
}

}  // namespace markoff::poly
