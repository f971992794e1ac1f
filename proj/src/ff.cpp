#include "markoff/ff.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace markoff::ff {

u64 add_mod(u64 a, u64 b, u64 p) {
  u64 s = a + b;  // no wrap: a, b < p <= 2^61
  return s >= p ? s - p : s;
}

u64 sub_mod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

u64 mul_mod(u64 a, u64 b, u64 p) { return static_cast<u64>(u128(a) * b % p); }

u64 pow_mod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 inv_mod(u64 a, u64 p) {
  a %= p;
  if (a == 0) throw std::invalid_argument("inv_mod: zero");
  return pow_mod(a, p - 2, p);
}

namespace {

bool miller_rabin_witness(u64 n, u64 a, u64 d, int r) {
  u64 x = pow_mod(a % n, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int i = 1; i < r; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;  // composite witness
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) d >>= 1, ++r;
  // This base set decides primality for every 64-bit integer.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (miller_rabin_witness(n, a, d, r)) return false;
  }
  return true;
}

namespace {

u64 pollard_rho(u64 n) {
  // Brent's cycle finding with batched gcd. n is odd, composite, not a
  // prime power of a tiny prime (small factors already stripped).
  for (u64 c = 1;; ++c) {
    auto f = [n, c](u64 x) { return add_mod(mul_mod(x, x, n), c, n); };
    u64 x = 2, y = 2, d = 1, saved = 2;
    u64 power = 1, lam = 0;
    u64 q = 1;
    while (d == 1) {
      if (lam == power) {
        x = y;
        power <<= 1;
        lam = 0;
        saved = y;
      }
      y = f(y);
      ++lam;
      q = mul_mod(q, x > y ? x - y : y - x, n);
      if (q == 0) {
        // overshoot, replay from the saved point one step at a time
        y = saved;
        for (u64 i = 0; i < lam; ++i) {
          y = f(y);
          u64 diff = x > y ? x - y : y - x;
          d = std::gcd(diff, n);
          if (d != 1 && d != n) return d;
        }
        d = n;
        break;
      }
      if (lam % 64 == 0) {
        d = std::gcd(q, n);
      }
    }
    if (d == 1) d = std::gcd(q, n);
    if (d != 1 && d != n) return d;
    // retry with a different polynomial
  }
}

void factor_rec(u64 n, std::vector<u64>& primes) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  u64 d = pollard_rho(n);
  factor_rec(d, primes);
  factor_rec(n / d, primes);
}

}  // namespace

Factorization factorize(u64 n) {
  if (n == 0) throw std::invalid_argument("factorize: zero");
  std::vector<u64> primes;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull, 41ull, 43ull, 47ull}) {
    while (n % q == 0) {
      primes.push_back(q);
      n /= q;
    }
  }
  factor_rec(n, primes);
  std::sort(primes.begin(), primes.end());
  Factorization out;
  for (u64 q : primes) {
    if (!out.empty() && out.back().prime == q) {
      ++out.back().exp;
    } else {
      out.push_back({q, 1});
    }
  }
  return out;
}

u64 factorization_value(const Factorization& f) {
  u64 v = 1;
  for (const auto& [q, e] : f)
    for (int i = 0; i < e; ++i) v *= q;
  return v;
}

std::vector<u64> divisors(const Factorization& f) {
  std::vector<u64> ds{1};
  for (const auto& [q, e] : f) {
    std::size_t base = ds.size();
    u64 qe = 1;
    for (int i = 0; i < e; ++i) {
      qe *= q;
      for (std::size_t k = 0; k < base; ++k) ds.push_back(ds[k] * qe);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

u64 euler_phi(const Factorization& f) {
  u64 v = 1;
  for (const auto& [q, e] : f) {
    v *= q - 1;
    for (int i = 1; i < e; ++i) v *= q;
  }
  return v;
}

int moebius(u64 n) {
  auto f = factorize(n);
  for (const auto& [q, e] : f)
    if (e > 1) return 0;
  return f.size() % 2 == 0 ? 1 : -1;
}

FactorCache::FactorCache(std::string path) : path_(std::move(path)) {
  if (path_.empty()) return;
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    u64 n = std::stoull(line.substr(0, eq));
    Factorization f;
    std::stringstream rest(line.substr(eq + 1));
    std::string term;
    bool ok = true;
    while (std::getline(rest, term, '*')) {
      auto caret = term.find('^');
      if (caret == std::string::npos) {
        ok = false;
        break;
      }
      f.push_back({std::stoull(term.substr(0, caret)),
                   std::stoi(term.substr(caret + 1))});
    }
    if (ok && factorization_value(f) == n) table_[n] = std::move(f);
  }
}

Factorization FactorCache::get(u64 n) {
  {
    std::lock_guard lk(mu_);
    auto it = table_.find(n);
    if (it != table_.end()) return it->second;
  }
  Factorization f = factorize(n);
  std::lock_guard lk(mu_);
  table_[n] = f;
  dirty_ = true;
  return f;
}

void FactorCache::flush() {
  std::lock_guard lk(mu_);
  if (path_.empty() || !dirty_) return;
  std::ofstream out(path_, std::ios::trunc);
  for (const auto& [n, f] : table_) {
    out << n << '=';
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) out << '*';
      out << f[i].prime << '^' << f[i].exp;
    }
    out << '\n';
  }
  dirty_ = false;
}

std::size_t FactorCache::size() const {
  std::lock_guard lk(mu_);
  return table_.size();
}

int legendre(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  u64 s = pow_mod(a, (p - 1) / 2, p);
  return s == 1 ? 1 : -1;
}

std::optional<u64> sqrt_mod(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  if (legendre(a, p) != 1) return std::nullopt;
  u64 r;
  if (p % 4 == 3) {
    r = pow_mod(a, (p + 1) / 4, p);
  } else {
    // Tonelli-Shanks
    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) q >>= 1, ++s;
    u64 z = 2;
    while (legendre(z, p) != -1) ++z;
    u64 m = s;
    u64 c = pow_mod(z, q, p);
    u64 t = pow_mod(a, q, p);
    r = pow_mod(a, (q + 1) / 2, p);
    while (t != 1) {
      u64 i = 0, tt = t;
      while (tt != 1) {
        tt = mul_mod(tt, tt, p);
        ++i;
      }
      u64 b = c;
      for (u64 k = 0; k + i + 1 < m; ++k) b = mul_mod(b, b, p);
      m = i;
      c = mul_mod(b, b, p);
      t = mul_mod(t, c, p);
      r = mul_mod(r, b, p);
    }
  }
  return std::min(r, p - r);
}

PrimeContext PrimeContext::make(u64 p, FactorCache* cache) {
  if (p < 3 || p > kMaxPrime || !is_prime(p))
    throw std::invalid_argument("PrimeContext: need an odd prime <= 2^61-1");
  PrimeContext ctx;
  ctx.p = p;
  ctx.fact_pm1 = cache ? cache->get(p - 1) : factorize(p - 1);
  ctx.fact_pp1 = cache ? cache->get(p + 1) : factorize(p + 1);
  ctx.D = 2;
  while (legendre(ctx.D, p) != -1) ++ctx.D;
  for (u64 g = 2;; ++g) {
    bool primitive = true;
    for (const auto& [q, e] : ctx.fact_pm1) {
      if (pow_mod(g, (p - 1) / q, p) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      ctx.g = g;
      break;
    }
  }
  return ctx;
}

QuadExt qadd(const QuadExt& x, const QuadExt& y, const PrimeContext& ctx) {
  return {add_mod(x.a, y.a, ctx.p), add_mod(x.b, y.b, ctx.p)};
}

QuadExt qsub(const QuadExt& x, const QuadExt& y, const PrimeContext& ctx) {
  return {sub_mod(x.a, y.a, ctx.p), sub_mod(x.b, y.b, ctx.p)};
}

QuadExt qmul(const QuadExt& x, const QuadExt& y, const PrimeContext& ctx) {
  u64 p = ctx.p;
  u64 a = add_mod(mul_mod(x.a, y.a, p), mul_mod(ctx.D, mul_mod(x.b, y.b, p), p), p);
  u64 b = add_mod(mul_mod(x.a, y.b, p), mul_mod(x.b, y.a, p), p);
  return {a, b};
}

u64 qnorm(const QuadExt& x, const PrimeContext& ctx) {
  u64 p = ctx.p;
  return sub_mod(mul_mod(x.a, x.a, p), mul_mod(ctx.D, mul_mod(x.b, x.b, p), p), p);
}

QuadExt frobenius(const QuadExt& x, const PrimeContext& ctx) {
  return {x.a, x.b == 0 ? 0 : ctx.p - x.b};
}

QuadExt qinv(const QuadExt& x, const PrimeContext& ctx) {
  u64 n = qnorm(x, ctx);
  if (n == 0) throw std::invalid_argument("qinv: zero");
  u64 ninv = inv_mod(n, ctx.p);
  QuadExt c = frobenius(x, ctx);
  return {mul_mod(c.a, ninv, ctx.p), mul_mod(c.b, ninv, ctx.p)};
}

QuadExt qpow(QuadExt x, u64 e, const PrimeContext& ctx) {
  QuadExt r{1 % ctx.p, 0};
  while (e) {
    if (e & 1) r = qmul(r, x, ctx);
    x = qmul(x, x, ctx);
    e >>= 1;
  }
  return r;
}

bool is_one(const QuadExt& x) { return x.a == 1 && x.b == 0; }

u64 mult_order(u64 x, const PrimeContext& ctx) {
  x %= ctx.p;
  if (x == 0) throw std::invalid_argument("mult_order: zero");
  u64 o = ctx.p - 1;
  for (const auto& [q, e] : ctx.fact_pm1) {
    for (int i = 0; i < e && o % q == 0; ++i) {
      if (pow_mod(x, o / q, ctx.p) == 1)
        o /= q;
      else
        break;
    }
  }
  return o;
}

u64 mult_order(const QuadExt& x, const PrimeContext& ctx) {
  if (x.a == 0 && x.b == 0) throw std::invalid_argument("mult_order: zero");
  if (qnorm(x, ctx) != 1) throw std::invalid_argument("mult_order: norm != 1");
  u64 o = ctx.p + 1;
  for (const auto& [q, e] : ctx.fact_pp1) {
    for (int i = 0; i < e && o % q == 0; ++i) {
      if (is_one(qpow(x, o / q, ctx)))
        o /= q;
      else
        break;
    }
  }
  return o;
}

QuadExt normone_generator(const PrimeContext& ctx) {
  // z(t) = ((1 + D t^2) + 2t sqrt(D)) / (1 - D t^2) parametrizes the circle
  // minus {-1}; D a non-residue means the denominator never vanishes.
  u64 p = ctx.p;
  for (u64 t = 1; t < p; ++t) {
    u64 dt2 = mul_mod(ctx.D, mul_mod(t, t, p), p);
    u64 den = sub_mod(1, dt2, p);
    u64 deninv = inv_mod(den, p);
    QuadExt z{mul_mod(add_mod(1, dt2, p), deninv, p),
              mul_mod(add_mod(t, t, p), deninv, p)};
    if (mult_order(z, ctx) == p + 1) return z;
  }
  throw std::logic_error("normone_generator: no generator found");
}

SubgroupSpec subgroup(Ambient ambient, u64 m, const PrimeContext& ctx) {
  SubgroupSpec s;
  s.ambient = ambient;
  s.order = m;
  if (ambient == Ambient::Split) {
    if (m == 0 || (ctx.p - 1) % m != 0)
      throw std::invalid_argument("subgroup: m does not divide p-1");
    s.gen_split = pow_mod(ctx.g, (ctx.p - 1) / m, ctx.p);
  } else {
    if (m == 0 || (ctx.p + 1) % m != 0)
      throw std::invalid_argument("subgroup: m does not divide p+1");
    s.gen_normone = qpow(normone_generator(ctx), (ctx.p + 1) / m, ctx);
  }
  return s;
}

std::vector<u64> elements_split(const SubgroupSpec& s, const PrimeContext& ctx) {
  if (s.ambient != Ambient::Split)
    throw std::invalid_argument("elements_split: wrong ambient");
  std::vector<u64> out;
  out.reserve(s.order);
  u64 x = 1;
  for (u64 i = 0; i < s.order; ++i) {
    out.push_back(x);
    x = mul_mod(x, s.gen_split, ctx.p);
  }
  return out;
}

std::vector<QuadExt> elements_normone(const SubgroupSpec& s, const PrimeContext& ctx) {
  if (s.ambient != Ambient::NormOne)
    throw std::invalid_argument("elements_normone: wrong ambient");
  std::vector<QuadExt> out;
  out.reserve(s.order);
  QuadExt x{1, 0};
  for (u64 i = 0; i < s.order; ++i) {
    out.push_back(x);
    x = qmul(x, s.gen_normone, ctx);
  }
  return out;
}

}  // namespace markoff::ff
