#include "markoff/orbits.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "markoff/check.hpp"

namespace markoff::orbits {

using ff::add_mod;
using ff::inv_mod;
using ff::mul_mod;
using ff::sub_mod;
using surface::canonical_index;
using surface::from_index;

SolutionSet SolutionSet::enumerate(u64 p) {
  SolutionSet s;
  s.p_ = p;
  // smallest square root per residue; p is a safe sentinel
  std::vector<std::uint32_t> root(p, static_cast<std::uint32_t>(p));
  for (u64 r = 0; r <= p / 2; ++r) {
    u64 sq = mul_mod(r, r, p);
    if (root[sq] == p) root[sq] = static_cast<std::uint32_t>(r);
  }
  const u64 inv2 = inv_mod(2, p);
  s.pair_offset_.assign(p * p + 1, 0);
  s.idx_.reserve(p * p + p);
  for (u64 x1 = 0; x1 < p; ++x1) {
    for (u64 x2 = 0; x2 < p; ++x2) {
      // x3^2 - 3 x1 x2 x3 + (x1^2 + x2^2) = 0
      u64 b = mul_mod(3 % p, mul_mod(x1, x2, p), p);
      u64 c = add_mod(mul_mod(x1, x1, p), mul_mod(x2, x2, p), p);
      u64 disc = sub_mod(mul_mod(b, b, p), mul_mod(4 % p, c, p), p);
      u64 base = (x1 * p + x2) * p;
      if (root[disc] != p) {
        u64 r = root[disc];
        u64 z1 = mul_mod(add_mod(b, p - r, p) % p, inv2, p);
        u64 z2 = mul_mod(add_mod(b, r, p), inv2, p);
        if (z1 > z2) std::swap(z1, z2);
        if (!(x1 == 0 && x2 == 0 && z1 == 0)) s.idx_.push_back(base + z1);
        if (z2 != z1 && !(x1 == 0 && x2 == 0 && z2 == 0)) s.idx_.push_back(base + z2);
      }
      s.pair_offset_[x1 * p + x2 + 1] = static_cast<std::uint32_t>(s.idx_.size());
    }
  }
  return s;
}

Triple SolutionSet::point(std::size_t pos) const {
  return from_index(idx_[pos], p_);
}

bool SolutionSet::contains(const Triple& t) const {
  u64 bucket = t.x1 * p_ + t.x2;
  u64 idx = canonical_index(t, p_);
  for (std::uint32_t i = pair_offset_[bucket]; i < pair_offset_[bucket + 1]; ++i)
    if (idx_[i] == idx) return true;
  return false;
}

std::size_t SolutionSet::position(const Triple& t) const {
  u64 bucket = t.x1 * p_ + t.x2;
  u64 idx = canonical_index(t, p_);
  for (std::uint32_t i = pair_offset_[bucket]; i < pair_offset_[bucket + 1]; ++i)
    if (idx_[i] == idx) return i;
  throw std::invalid_argument("SolutionSet::position: not a solution");
}

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  std::vector<std::uint32_t> rank_;

  explicit UnionFind(std::size_t n) : parent(n), rank_(n, 0) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];  // path halving
      x = parent[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }
};

template <typename Visit>
void for_each_neighbor(const Triple& t, u64 p, Visit&& visit) {
  for (int j = 1; j <= 3; ++j) visit(surface::vieta(j, t, p));
  for (int k = 1; k < surface::permutation_count(); ++k)
    visit(surface::permute(k, t));
}

}  // namespace

OrbitPartition components(const SolutionSet& s) {
  const u64 p = s.prime();
  const std::size_t n = s.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i) {
    Triple t = s.point(i);
    for_each_neighbor(t, p, [&](const Triple& u) {
      uf.unite(static_cast<std::uint32_t>(i),
               static_cast<std::uint32_t>(s.position(u)));
    });
  }
  OrbitPartition part;
  part.component.assign(n, 0);
  std::vector<std::uint32_t> root_to_id(n, UINT32_MAX);
  std::vector<u64> sizes;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t r = uf.find(static_cast<std::uint32_t>(i));
    if (root_to_id[r] == UINT32_MAX) {
      root_to_id[r] = static_cast<std::uint32_t>(sizes.size());
      sizes.push_back(0);
    }
    part.component[i] = root_to_id[r];
    ++sizes[root_to_id[r]];
  }
  part.component_sizes = std::move(sizes);
  std::sort(part.component_sizes.rbegin(), part.component_sizes.rend());
  return part;
}

u64 bfs_component_size(const SolutionSet& s) {
  const u64 p = s.prime();
  Triple start{1 % p, 1 % p, 1 % p};
  std::vector<bool> seen(s.size(), false);
  std::vector<std::uint32_t> queue;
  queue.push_back(static_cast<std::uint32_t>(s.position(start)));
  seen[queue[0]] = true;
  u64 visited = 0;
  while (!queue.empty()) {
    std::uint32_t cur = queue.back();
    queue.pop_back();
    ++visited;
    for_each_neighbor(s.point(cur), p, [&](const Triple& u) {
      std::size_t pos = s.position(u);
      if (!seen[pos]) {
        seen[pos] = true;
        queue.push_back(static_cast<std::uint32_t>(pos));
      }
    });
  }
  return visited;
}

std::vector<u64> rot_order_table(const ff::PrimeContext& ctx) {
  std::vector<u64> table(ctx.p);
  for (u64 xi = 0; xi < ctx.p; ++xi)
    table[xi] = surface::classify(xi, ctx).rot_order;
  return table;
}

u64 max_order(const Triple& t, const std::vector<u64>& table) {
  return std::max({table[t.x1], table[t.x2], table[t.x3]});
}

u64 max_order(const Triple& t, const ff::PrimeContext& ctx) {
  return std::max({surface::classify(t.x1, ctx).rot_order,
                   surface::classify(t.x2, ctx).rot_order,
                   surface::classify(t.x3, ctx).rot_order});
}

CageReport cage(const SolutionSet& s, const ff::PrimeContext& ctx,
                const OrbitPartition& part) {
  const u64 p = s.prime();
  auto table = rot_order_table(ctx);
  CageReport rep;
  rep.min_max_order = UINT64_MAX;
  std::uint32_t cage_comp = UINT32_MAX, hyp_comp = UINT32_MAX;
  rep.cage_single_component = true;
  rep.cage_hyperbolic_single_component = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    Triple t = s.point(i);
    u64 mo = max_order(t, table);
    rep.min_max_order = std::min(rep.min_max_order, mo);
    bool in_cage = false, in_hyp = false;
    for (int j = 1; j <= 3; ++j) {
      u64 o = table[surface::coord(t, j)];
      if (o == p - 1 || o == p + 1) in_cage = true;
      if (o == p - 1) in_hyp = true;
    }
    if (in_cage) {
      ++rep.cage_size;
      if (cage_comp == UINT32_MAX)
        cage_comp = part.component[i];
      else if (part.component[i] != cage_comp)
        rep.cage_single_component = false;
    }
    if (in_hyp) {
      ++rep.cage_hyperbolic_size;
      if (hyp_comp == UINT32_MAX)
        hyp_comp = part.component[i];
      else if (part.component[i] != hyp_comp)
        rep.cage_hyperbolic_single_component = false;
    }
  }
  if (cage_comp != UINT32_MAX) {
    u64 comp_size = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (part.component[i] == cage_comp) ++comp_size;
    rep.residual = s.size() - comp_size;
  } else {
    rep.residual = s.size();
    rep.cage_single_component = false;
  }
  return rep;
}

}  // namespace markoff::orbits
