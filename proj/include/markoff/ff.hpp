// Exact arithmetic mod p and in F_{p^2} = F_p[sqrt(D)], quadratic residues,
// square roots, multiplicative orders, integer factorization with a small
// disk cache, and cyclic subgroup construction in F_p* and in the norm-one
// group of F_{p^2}*.
//
// All products go through 128-bit widening; p is capped at 2^61 - 1 so that
// sums of a few products cannot wrap.

#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace markoff::ff {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr u64 kMaxPrime = (u64{1} << 61) - 1;

u64 add_mod(u64 a, u64 b, u64 p);
u64 sub_mod(u64 a, u64 b, u64 p);
u64 mul_mod(u64 a, u64 b, u64 p);
u64 pow_mod(u64 a, u64 e, u64 p);
u64 inv_mod(u64 a, u64 p);  // p prime, a != 0 mod p

// Deterministic Miller-Rabin, valid for all 64-bit n.
bool is_prime(u64 n);

struct Factor {
  u64 prime;
  int exp;
  bool operator==(const Factor&) const = default;
};
using Factorization = std::vector<Factor>;  // sorted by prime

// Trial division plus Pollard rho (Brent). factorize(1) = {}.
Factorization factorize(u64 n);
u64 factorization_value(const Factorization& f);
std::vector<u64> divisors(const Factorization& f);  // sorted ascending
u64 euler_phi(const Factorization& f);
int moebius(u64 n);  // 0 on a square factor, else (-1)^omega

// One factorization per line, "n=p1^e1*p2^e2*...". Thread safe. An empty
// path keeps the cache in memory only. flush() rewrites the whole file in
// ascending n order so repeated runs produce identical bytes.
class FactorCache {
 public:
  explicit FactorCache(std::string path = "");
  Factorization get(u64 n);
  void flush();
  std::size_t size() const;

 private:
  std::string path_;
  mutable std::mutex mu_;
  std::map<u64, Factorization> table_;
  bool dirty_ = false;
};

int legendre(u64 a, u64 p);                  // 0, +1 or -1
std::optional<u64> sqrt_mod(u64 a, u64 p);   // smaller root; empty iff non-residue

struct PrimeContext {
  u64 p = 0;
  u64 D = 0;  // smallest non-residue >= 2
  u64 g = 0;  // smallest primitive root
  Factorization fact_pm1;  // p - 1
  Factorization fact_pp1;  // p + 1

  // cache may be null; p must be an odd prime <= kMaxPrime.
  static PrimeContext make(u64 p, FactorCache* cache = nullptr);
};

// a + b*sqrt(D). The zero element is {0,0}; norm(x) = 0 iff x = 0 since D is
// a non-residue.
struct QuadExt {
  u64 a = 0;
  u64 b = 0;
  bool operator==(const QuadExt&) const = default;
};

QuadExt qadd(const QuadExt& x, const QuadExt& y, const PrimeContext& ctx);
QuadExt qsub(const QuadExt& x, const QuadExt& y, const PrimeContext& ctx);
QuadExt qmul(const QuadExt& x, const QuadExt& y, const PrimeContext& ctx);
QuadExt qinv(const QuadExt& x, const PrimeContext& ctx);
QuadExt qpow(QuadExt x, u64 e, const PrimeContext& ctx);
QuadExt frobenius(const QuadExt& x, const PrimeContext& ctx);  // = x^p
u64 qnorm(const QuadExt& x, const PrimeContext& ctx);          // a^2 - D b^2
bool is_one(const QuadExt& x);

// Least k >= 1 with x^k = 1, computed by peeling primes off the group order.
u64 mult_order(u64 x, const PrimeContext& ctx);                 // divides p-1
u64 mult_order(const QuadExt& x, const PrimeContext& ctx);      // norm-one; divides p+1

// Generator of the norm-one group {a^2 - D b^2 = 1}, cyclic of order p+1.
QuadExt normone_generator(const PrimeContext& ctx);

enum class Ambient { Split, NormOne };

struct SubgroupSpec {
  Ambient ambient = Ambient::Split;
  u64 order = 1;         // m
  u64 gen_split = 1;     // valid when ambient == Split
  QuadExt gen_normone;   // valid when ambient == NormOne
};

// m must divide p-1 (Split) or p+1 (NormOne); throws std::invalid_argument
// otherwise. The generator has exact order m.
SubgroupSpec subgroup(Ambient ambient, u64 m, const PrimeContext& ctx);
std::vector<u64> elements_split(const SubgroupSpec& s, const PrimeContext& ctx);
std::vector<QuadExt> elements_normone(const SubgroupSpec& s, const PrimeContext& ctx);

}  // namespace markoff::ff
