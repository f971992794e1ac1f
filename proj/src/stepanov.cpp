#include "markoff/stepanov.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "markoff/check.hpp"
#include "markoff/poly.hpp"

namespace markoff::stepanov {

using ff::add_mod;
using ff::inv_mod;
using ff::mul_mod;
using ff::pow_mod;
using ff::sub_mod;
using ff::u128;
using poly::Poly;

namespace {

// B^k with saturation, for the parameter inequalities only
u64 ipow_sat(u64 b, u64 k) {
  u128 acc = 1;
  for (u64 i = 0; i < k; ++i) {
    acc *= b;
    if (acc > u128(1) << 80) return ~u64{0};
  }
  return acc > ~u64{0} ? ~u64{0} : static_cast<u64>(acc);
}

std::vector<u64> all_factors(const RationalFunctionSpec& fn, u64 p) {
  std::vector<u64> out;
  for (u64 r : fn.s_roots) out.push_back(r % p);
  for (u64 r : fn.s_poles) out.push_back(r % p);
  for (u64 r : fn.t_roots) out.push_back(r % p);
  for (u64 r : fn.t_poles) out.push_back(r % p);
  return out;
}

// S(y) or T(y); second component false on a pole
std::pair<u64, bool> eval_fn(const std::vector<u64>& roots,
                             const std::vector<u64>& poles, u64 lead, u64 y,
                             u64 p) {
  u64 num = lead % p;
  for (u64 r : roots) num = mul_mod(num, sub_mod(y, r, p), p);
  u64 den = 1;
  for (u64 r : poles) den = mul_mod(den, sub_mod(y, r, p), p);
  if (den == 0) return {0, false};
  return {mul_mod(num, inv_mod(den, p), p), true};
}

std::vector<u64> y_points(const RationalFunctionSpec& fn, u64 t1, u64 t2,
                          const PrimeContext& ctx) {
  const u64 p = ctx.p;
  std::vector<u64> out;
  for (u64 y = 0; y < p; ++y) {
    auto [s, s_ok] = eval_fn(fn.s_roots, fn.s_poles, fn.s_lead, y, p);
    if (!s_ok || s == 0 || pow_mod(s, t1, p) != 1) continue;
    auto [t, t_ok] = eval_fn(fn.t_roots, fn.t_poles, fn.t_lead, y, p);
    if (!t_ok || t == 0 || pow_mod(t, t2, p) != 1) continue;
    out.push_back(y);
  }
  return out;
}

// power series in eps truncated at length M, coefficients mod p
struct Series {
  std::vector<u64> c;
};

Series smul(const Series& a, const Series& b, u64 p) {
  std::size_t n = a.c.size();
  Series r;
  r.c.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j)
      r.c[i + j] = add_mod(r.c[i + j], mul_mod(a.c[i], b.c[j], p), p);
  return r;
}

Series sinv(const Series& a, u64 p) {
  std::size_t n = a.c.size();
  Series r;
  r.c.assign(n, 0);
  u64 inv0 = inv_mod(a.c[0], p);
  r.c[0] = inv0;
  for (std::size_t k = 1; k < n; ++k) {
    u64 acc = 0;
    for (std::size_t i = 1; i <= k; ++i)
      acc = add_mod(acc, mul_mod(a.c[i], r.c[k - i], p), p);
    r.c[k] = mul_mod(sub_mod(0, acc, p), inv0, p);
  }
  return r;
}

Series spow(Series a, u64 e, u64 p) {
  Series r;
  r.c.assign(a.c.size(), 0);
  r.c[0] = 1;
  while (e) {
    if (e & 1) r = smul(r, a, p);
    a = smul(a, a, p);
    e >>= 1;
  }
  return r;
}

// lead * prod (y + eps - r), truncated
Series factor_series(const std::vector<u64>& roots, u64 lead, u64 y,
                     std::size_t len, u64 p) {
  Series r;
  r.c.assign(len, 0);
  r.c[0] = lead % p;
  for (u64 root : roots) {
    Series lin;
    lin.c.assign(len, 0);
    lin.c[0] = sub_mod(y, root, p);
    if (len > 1) lin.c[1] = 1;
    r = smul(r, lin, p);
  }
  return r;
}

struct GaussResult {
  std::vector<u64> kernel;  // one nontrivial solution
  u64 kernel_dim = 0;
};

// homogeneous system rows * x = 0 over F_p; first free variable set to 1
GaussResult solve_homogeneous(std::vector<std::vector<u64>> rows,
                              std::size_t cols, u64 p) {
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][c] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    u64 inv = inv_mod(rows[r][c], p);
    for (std::size_t j = c; j < cols; ++j)
      rows[r][j] = mul_mod(rows[r][j], inv, p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      u64 f = rows[i][c];
      for (std::size_t j = c; j < cols; ++j)
        rows[i][j] = sub_mod(rows[i][j], mul_mod(f, rows[r][j], p), p);
    }
    pivot_col.push_back(c);
    ++r;
  }
  GaussResult out;
  out.kernel_dim = cols - pivot_col.size();
  if (out.kernel_dim == 0)
    throw std::runtime_error(
        "build_aux_poly: linear system has no nontrivial kernel");

  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  std::size_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;

  out.kernel.assign(cols, 0);
  out.kernel[free_col] = 1;
  for (std::size_t i = pivot_col.size(); i-- > 0;) {
    u64 acc = 0;
    for (std::size_t j = pivot_col[i] + 1; j < cols; ++j)
      acc = add_mod(acc, mul_mod(rows[i][j], out.kernel[j], p), p);
    out.kernel[pivot_col[i]] = sub_mod(0, acc, p);
  }
  return out;
}

std::vector<u64> unit_group(u64 t, const PrimeContext& ctx) {
  require((ctx.p - 1) % t == 0, "t must divide p-1");
  u64 gen = pow_mod(ctx.g, (ctx.p - 1) / t, ctx.p);
  std::vector<u64> out;
  u64 v = 1;
  for (u64 i = 0; i < t; ++i) {
    out.push_back(v);
    v = mul_mod(v, gen, ctx.p);
  }
  return out;
}

}  // namespace

void validate_spec(const RationalFunctionSpec& fn, const PrimeContext& ctx) {
  if (fn.s_lead % ctx.p == 0 || fn.t_lead % ctx.p == 0)
    throw std::invalid_argument("leading constants must be nonzero");
  auto f = all_factors(fn, ctx.p);
  if (f.empty()) throw std::invalid_argument("S and T have no factors");
  std::sort(f.begin(), f.end());
  if (std::adjacent_find(f.begin(), f.end()) != f.end())
    throw std::invalid_argument("roots and poles must be pairwise distinct");
}

RationalFunctionSpec classic_spec(const PrimeContext& ctx) {
  RationalFunctionSpec fn;
  fn.s_roots = {0};
  fn.t_roots = {1};
  fn.t_lead = ctx.p - 1;  // T(x) = 1 - x
  return fn;
}

u64 count_Y(const RationalFunctionSpec& fn, u64 t1, u64 t2,
            const PrimeContext& ctx) {
  validate_spec(fn, ctx);
  require(t1 >= t2 && t1 >= 1, "count_Y: t1 >= t2 >= 1");
  require((ctx.p - 1) % t1 == 0 && (ctx.p - 1) % t2 == 0,
          "count_Y: t1, t2 must divide p-1");
  return y_points(fn, t1, t2, ctx).size();
}

bool params_valid(const RationalFunctionSpec& fn, const AuxPolyParams& pr,
                  const PrimeContext& ctx) {
  const u64 e = fn.e();
  if (pr.J < 1 || pr.B < 1 || pr.M < 1) return false;
  if (pr.t1 < pr.t2 || pr.t2 < 1) return false;
  if ((ctx.p - 1) % pr.t1 != 0 || (ctx.p - 1) % pr.t2 != 0) return false;
  if (pr.M >= ctx.p) return false;  // plain derivatives need m! != 0
  if ((pr.J + e * pr.M) * pr.M >= pr.B * pr.B * pr.J) return false;
  if (ctx.p < (2 * e * pr.B + 2) * pr.t1) return false;
  u64 b2e = ipow_sat(pr.B, 2 * e);
  u64 be = ipow_sat(pr.B, e);
  if (b2e == ~u64{0} || be == ~u64{0}) return false;
  if (2 * pr.t2 < e * b2e + 2 * pr.J * be) return false;
  return true;
}

std::optional<AuxPolyParams> suggest_params(const RationalFunctionSpec& fn,
                                            u64 t1, u64 t2,
                                            const PrimeContext& ctx) {
  validate_spec(fn, ctx);
  const u64 e = fn.e();
  u64 bcap = 2;
  while (ipow_sat(bcap, 2 * e) < t1) ++bcap;

  std::optional<AuxPolyParams> best;
  double best_bound = 0;
  for (u64 b = 2; b <= bcap; ++b)
    for (u64 m = 1; m < b * b; ++m) {
      AuxPolyParams pr;
      pr.B = b;
      pr.M = m;
      pr.J = (e * m * m) / (b * b - m) + 1;
      pr.t1 = t1;
      pr.t2 = t2;
      if (!params_valid(fn, pr, ctx)) continue;
      double bound =
          static_cast<double>(pr.J + e * b * t1) / static_cast<double>(m);
      if (!best || bound < best_bound) {
        best = pr;
        best_bound = bound;
      }
    }
  return best;
}

AuxPoly build_aux_poly(const RationalFunctionSpec& fn, const AuxPolyParams& pr,
                       const PrimeContext& ctx) {
  const u64 p = ctx.p;
  validate_spec(fn, ctx);
  require(params_valid(fn, pr, ctx), "build_aux_poly: parameter constraints");

  const u64 e = fn.e();
  const u64 J = pr.J, B = pr.B, M = pr.M;
  const std::size_t nb = B + 1;
  const std::size_t cols = (J + 1) * nb * nb;
  auto col_of = [&](u64 a, u64 b1, u64 b2) {
    return (a * nb + b1) * nb + b2;
  };

  const auto factors = all_factors(fn, p);
  const Poly bracket = poly::from_roots(factors, p);
  const Poly dbracket = poly::derivative(bracket, p);
  std::vector<Poly> cofactor(e);  // bracket / (x - f_l)
  for (u64 l = 0; l < e; ++l) {
    auto [q, rem] = poly::divmod(bracket, {sub_mod(0, factors[l], p), 1}, p);
    require(poly::is_zero(rem), "build_aux_poly: factor division");
    cofactor[l] = q;
  }
  // signed exponent of factor l in S^{t1 b1} T^{t2 b2}, reduced mod p
  auto nu = [&](u64 l, u64 b1, u64 b2) {
    u64 ns = fn.s_roots.size(), nsp = fn.s_poles.size(),
        nt = fn.t_roots.size();
    if (l < ns) return mul_mod(pr.t1, b1, p);
    if (l < ns + nsp) return sub_mod(0, mul_mod(pr.t1, b1, p), p);
    if (l < ns + nsp + nt) return mul_mod(pr.t2, b2, p);
    return sub_mod(0, mul_mod(pr.t2, b2, p), p);
  };

  // bracket^j F^(j) = F L_j for F = S^{t1 b1} T^{t2 b2}
  std::vector<std::vector<Poly>> L(nb * nb);
  for (u64 b1 = 0; b1 <= B; ++b1)
    for (u64 b2 = 0; b2 <= B; ++b2) {
      Poly n;
      for (u64 l = 0; l < e; ++l)
        n = poly::add(n, poly::scale(cofactor[l], nu(l, b1, b2), p), p);
      auto& chain = L[b1 * nb + b2];
      chain.push_back({1});
      for (u64 j = 0; j + 1 < M; ++j) {
        Poly next = poly::add(
            poly::mul(n, chain[j], p),
            poly::mul(bracket, poly::derivative(chain[j], p), p), p);
        next = poly::add(
            next,
            poly::scale(poly::mul(dbracket, chain[j], p), sub_mod(0, j % p, p),
                        p),
            p);
        chain.push_back(std::move(next));
      }
    }

  std::vector<Poly> bracket_pow = {{1}};
  for (u64 i = 1; i < M; ++i)
    bracket_pow.push_back(poly::mul(bracket_pow[i - 1], bracket, p));

  // bracket^m (x^a F)^(m) = F W_{m,a,b1,b2}, deg W <= a + em
  auto w_poly = [&](u64 m, u64 a, u64 b1, u64 b2) {
    Poly w;
    u64 binom = 1, fall = 1;
    for (u64 i = 0; i <= std::min(m, a); ++i) {
      Poly term = poly::mul(bracket_pow[i], L[b1 * nb + b2][m - i], p);
      term = poly::mul(term, poly::monomial(1, a - i), p);
      w = poly::add(w, poly::scale(term, mul_mod(binom, fall, p), p), p);
      binom = mul_mod(binom, mul_mod(m - i, inv_mod(i + 1, p), p), p);
      fall = mul_mod(fall, a - i, p);
    }
    return w;
  };

  std::vector<std::vector<u64>> rows;
  for (u64 m = 0; m < M; ++m) {
    std::size_t deg_cap = J + e * m;
    std::vector<std::vector<u64>> block(deg_cap + 1,
                                        std::vector<u64>(cols, 0));
    for (u64 a = 0; a <= J; ++a)
      for (u64 b1 = 0; b1 <= B; ++b1)
        for (u64 b2 = 0; b2 <= B; ++b2) {
          Poly w = w_poly(m, a, b1, b2);
          require(w.size() <= deg_cap + 1, "build_aux_poly: degree bound");
          for (std::size_t c = 0; c < w.size(); ++c)
            block[c][col_of(a, b1, b2)] = w[c];
        }
    for (auto& row : block) rows.push_back(std::move(row));
  }
  const auto saved_rows = rows;
  GaussResult sol = solve_homogeneous(std::move(rows), cols, p);
  for (const auto& row : saved_rows) {
    u64 acc = 0;
    for (std::size_t c = 0; c < cols; ++c)
      acc = add_mod(acc, mul_mod(row[c], sol.kernel[c], p), p);
    require(acc == 0, "build_aux_poly: kernel vector fails a row");
  }

  // cleared polynomial: multiply phi by every pole factor to power B t
  Poly cleared;
  for (u64 a = 0; a <= J; ++a)
    for (u64 b1 = 0; b1 <= B; ++b1)
      for (u64 b2 = 0; b2 <= B; ++b2) {
        u64 lam = sol.kernel[col_of(a, b1, b2)];
        if (lam == 0) continue;
        Poly term = poly::monomial(lam, a);
        auto mul_powers = [&](const std::vector<u64>& rs, u64 exp) {
          for (u64 r : rs)
            term = poly::mul(
                term, poly::power({sub_mod(0, r, p), 1}, exp, p), p);
        };
        mul_powers(fn.s_roots, pr.t1 * b1);
        mul_powers(fn.s_poles, (B - b1) * pr.t1);
        mul_powers(fn.t_roots, pr.t2 * b2);
        mul_powers(fn.t_poles, (B - b2) * pr.t2);
        cleared = poly::add(cleared, term, p);
      }
  require(!poly::is_zero(cleared),
          "build_aux_poly: phi vanishes identically");
  require(static_cast<u64>(poly::degree(cleared)) <= J + e * B * pr.t1,
          "build_aux_poly: cleared degree exceeds J + eB t1");

  AuxPoly out;
  out.params = pr;
  out.lambda = sol.kernel;
  out.kernel_dim = sol.kernel_dim;
  out.y_set = y_points(fn, pr.t1, pr.t2, ctx);
  out.cleared_degree = poly::degree(cleared);
  require(M * out.y_set.size() <= J + e * B * pr.t1,
          "build_aux_poly: vanishing-order bound violated");

  // independent re-check: phi(y + eps) = O(eps^M) by truncated series
  for (u64 y : out.y_set) {
    Series phi;
    phi.c.assign(M, 0);
    for (u64 a = 0; a <= J; ++a)
      for (u64 b1 = 0; b1 <= B; ++b1)
        for (u64 b2 = 0; b2 <= B; ++b2) {
          u64 lam = sol.kernel[col_of(a, b1, b2)];
          if (lam == 0) continue;
          Series s_num = factor_series(fn.s_roots, fn.s_lead, y, M, p);
          Series s_den = factor_series(fn.s_poles, 1, y, M, p);
          Series t_num = factor_series(fn.t_roots, fn.t_lead, y, M, p);
          Series t_den = factor_series(fn.t_poles, 1, y, M, p);
          Series s = smul(s_num, sinv(s_den, p), p);
          Series t = smul(t_num, sinv(t_den, p), p);
          Series xa = factor_series({0}, 1, y, M, p);  // y + eps
          Series term = spow(xa, a, p);
          term = smul(term, spow(s, pr.t1 * b1, p), p);
          term = smul(term, spow(t, pr.t2 * b2, p), p);
          for (u64 k = 0; k < M; ++k)
            phi.c[k] = add_mod(phi.c[k], mul_mod(lam, term.c[k], p), p);
        }
    for (u64 k = 0; k < M; ++k)
      require(phi.c[k] == 0, "build_aux_poly: series vanishing check");
  }
  return out;
}

u64 count_unit_intersection(const MoebiusMap& sigma, u64 t,
                            const PrimeContext& ctx) {
  const u64 p = ctx.p;
  const u64 a = sigma.a % p, b = sigma.b % p, c = sigma.c % p,
            d = sigma.d % p;
  if (sub_mod(mul_mod(a, d, p), mul_mod(b, c, p), p) == 0)
    throw std::invalid_argument("count_unit_intersection: singular matrix");
  if (b == 0 && c == 0 && a == d)
    throw std::invalid_argument(
        "count_unit_intersection: identity in the projective group");
  require(t >= 1 && (p - 1) % t == 0, "count_unit_intersection: t | p-1");

  u64 count = 0;
  for (u64 v : unit_group(t, ctx)) {
    u64 den = add_mod(mul_mod(c, v, p), d, p);
    if (den == 0) continue;
    u64 w = mul_mod(add_mod(mul_mod(a, v, p), b, p), inv_mod(den, p), p);
    if (w != 0 && pow_mod(w, t, p) == 1) ++count;
  }

  // oracle: common roots of x^t - 1 and (ax+b)^t - (cx+d)^t
  std::vector<u64> fact(t + 1), inv_fact(t + 1);
  fact[0] = 1;
  for (u64 k = 1; k <= t; ++k) fact[k] = mul_mod(fact[k - 1], k, p);
  inv_fact[t] = inv_mod(fact[t], p);
  for (u64 k = t; k > 0; --k) inv_fact[k - 1] = mul_mod(inv_fact[k], k, p);

  Poly f(t + 1, 0);
  f[0] = p - 1;
  f[t] = 1;
  Poly h(t + 1, 0);
  for (u64 k = 0; k <= t; ++k) {
    u64 binom = mul_mod(fact[t], mul_mod(inv_fact[k], inv_fact[t - k], p), p);
    u64 lhs = mul_mod(pow_mod(a, k, p), pow_mod(b, t - k, p), p);
    u64 rhs = mul_mod(pow_mod(c, k, p), pow_mod(d, t - k, p), p);
    h[k] = mul_mod(binom, sub_mod(lhs, rhs, p), p);
  }
  Poly g = poly::gcd(f, h, p);
  require(static_cast<u64>(poly::degree(g)) == count,
          "count_unit_intersection: gcd oracle disagrees with the scan");
  if (c != 0) {
    u64 pole = mul_mod(sub_mod(0, d, p), inv_mod(c, p), p);
    require(poly::eval(g, pole, p) != 0,
            "count_unit_intersection: pole appears as a common root");
  }
  return count;
}

u64 count_cor_a5(u64 b, u64 t, const PrimeContext& ctx) {
  const u64 p = ctx.p;
  if (b % p == 1)
    throw std::invalid_argument("count_cor_a5: b = 1 rejected");
  require(t >= 1 && (p - 1) % t == 0, "count_cor_a5: t | p-1");

  auto units = unit_group(t, ctx);
  u64 count = 0;
  std::map<std::pair<u64, u64>, u64> fiber;
  for (u64 w : units) {
    u64 lhs = add_mod(w, inv_mod(w, p), p);
    for (u64 rho : units) {
      if (lhs != add_mod(rho, mul_mod(b, inv_mod(rho, p), p), p)) continue;
      ++count;
      ++fiber[{mul_mod(rho, w, p), mul_mod(w, inv_mod(rho, p), p)}];
    }
  }
  for (const auto& [xy, n] : fiber) {
    require(pow_mod(xy.first, t, p) == 1 && pow_mod(xy.second, t, p) == 1,
            "count_cor_a5: substitution leaves the unit group");
    require(n <= 2, "count_cor_a5: substitution fiber exceeds two");
  }
  return count;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  Instance inst;
  inst.p = j.at("p").get<u64>();
  inst.fn.s_roots = j.at("S_roots").get<std::vector<u64>>();
  inst.fn.s_poles = j.at("S_poles").get<std::vector<u64>>();
  inst.fn.t_roots = j.at("T_roots").get<std::vector<u64>>();
  inst.fn.t_poles = j.at("T_poles").get<std::vector<u64>>();
  inst.fn.s_lead = j.value("S_lead", u64{1});
  inst.fn.t_lead = j.value("T_lead", u64{1});
  inst.params.t1 = j.at("t1").get<u64>();
  inst.params.t2 = j.at("t2").get<u64>();
  inst.params.J = j.at("J").get<u64>();
  inst.params.B = j.at("B").get<u64>();
  inst.params.M = j.at("M").get<u64>();
  return inst;
}

void save_instance(const std::string& path, const Instance& inst) {
  nlohmann::json j;
  j["p"] = inst.p;
  j["S_roots"] = inst.fn.s_roots;
  j["S_poles"] = inst.fn.s_poles;
  j["T_roots"] = inst.fn.t_roots;
  j["T_poles"] = inst.fn.t_poles;
  if (inst.fn.s_lead != 1) j["S_lead"] = inst.fn.s_lead;
  if (inst.fn.t_lead != 1) j["T_lead"] = inst.fn.t_lead;
  j["t1"] = inst.params.t1;
  j["t2"] = inst.params.t2;
  j["J"] = inst.params.J;
  j["B"] = inst.params.B;
  j["M"] = inst.params.M;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace markoff::stepanov
