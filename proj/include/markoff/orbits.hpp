// Enumeration of X*(p) (all surface points except the origin), Gamma-orbit
// components under the Vieta involutions and coordinate permutations, per
// coordinate rotation orders, and the cage of maximal-order points.

#pragma once

#include <cstdint>
#include <vector>

#include "markoff/ff.hpp"
#include "markoff/surface.hpp"

namespace markoff::orbits {

using ff::u64;
using surface::Triple;

// The full solution set, sorted by canonical index and bucketed by the
// (x1, x2) prefix so membership and position lookups are O(1).
class SolutionSet {
 public:
  // Solves the quadratic in x3 for every (x1, x2) pair; O(p^2).
  static SolutionSet enumerate(u64 p);

  u64 prime() const { return p_; }
  std::size_t size() const { return idx_.size(); }
  Triple point(std::size_t pos) const;
  bool contains(const Triple& t) const;
  std::size_t position(const Triple& t) const;  // throws if absent

 private:
  u64 p_ = 0;
  std::vector<u64> idx_;                     // ascending canonical indices
  std::vector<std::uint32_t> pair_offset_;   // p*p + 1 prefix sums
};

struct OrbitPartition {
  std::vector<std::uint32_t> component;  // compact component id per position
  std::vector<u64> component_sizes;      // descending
  std::size_t n_components() const { return component_sizes.size(); }
};

// Union-find closure under {R1, R2, R3} and the six permutations.
OrbitPartition components(const SolutionSet& s);

// Independent traversal: BFS from (1,1,1) with the same generator set.
// Returns the number of points reached.
u64 bfs_component_size(const SolutionSet& s);

// rot_order of classify(xi) for xi = 0..p-1, indexed by xi.
std::vector<u64> rot_order_table(const ff::PrimeContext& ctx);

// max over the three coordinates of the rotation order.
u64 max_order(const Triple& t, const std::vector<u64>& table);
u64 max_order(const Triple& t, const ff::PrimeContext& ctx);

struct CageReport {
  u64 cage_size = 0;                 // points with a coordinate of order p-1 or p+1
  bool cage_single_component = false;
  u64 residual = 0;                  // |X*(p)| minus the cage's component
  u64 cage_hyperbolic_size = 0;      // order p-1 coordinates only
  bool cage_hyperbolic_single_component = false;
  u64 min_max_order = 0;             // min over X*(p) of max_order
};

CageReport cage(const SolutionSet& s, const ff::PrimeContext& ctx,
                const OrbitPartition& part);

}  // namespace markoff::orbits
