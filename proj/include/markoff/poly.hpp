// Dense univariate polynomials over F_p, coefficients ascending. The zero
// polynomial is the empty vector; every routine returns trimmed output.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "markoff/ff.hpp"

namespace markoff::poly {

using u64 = ff::u64;
using Poly = std::vector<u64>;

Poly trim(Poly f);
int degree(const Poly& f);  // -1 for the zero polynomial
bool is_zero(const Poly& f);

Poly add(const Poly& f, const Poly& g, u64 p);
Poly sub(const Poly& f, const Poly& g, u64 p);
Poly mul(const Poly& f, const Poly& g, u64 p);
Poly scale(const Poly& f, u64 c, u64 p);
Poly derivative(const Poly& f, u64 p);
u64 eval(const Poly& f, u64 x, u64 p);

// Quotient and remainder; g != 0.
std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g, u64 p);

// Monic gcd; gcd(0,0) = 0.
Poly gcd(Poly f, Poly g, u64 p);

Poly monomial(u64 c, std::size_t k);          // c x^k
Poly from_roots(const std::vector<u64>& roots, u64 p);  // prod (x - r)
Poly power(const Poly& f, u64 e, u64 p);

}  // namespace markoff::poly
