// Incidence graph of the conic sections: vertices are (axis, xi) pairs with
// xi != 0 and a nonempty section, edges join sections on distinct axes that
// share a surface point, weighted by how many points they share.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "markoff/ff.hpp"
#include "markoff/surface.hpp"

namespace markoff::incidence {

using ff::u64;

class IncidenceGraph {
 public:
  // Evaluates the pairwise intersection counts for every pair of nonempty
  // section values. Requires p >= 5.
  static IncidenceGraph build(const ff::PrimeContext& ctx);

  u64 prime() const { return p_; }

  // Section values xi with a nonempty conic, ascending. Identical for the
  // three axes, so vertices are indexed as axis * value_count() + value index
  // with axis in {0,1,2}.
  std::size_t value_count() const { return xs_.size(); }
  u64 value(std::size_t i) const { return xs_[i]; }
  surface::ConicClass value_class(std::size_t i) const { return cls_[i]; }

  std::size_t vertex_count() const { return 3 * xs_.size(); }
  int axis(std::size_t v) const { return static_cast<int>(v / xs_.size()) + 1; }
  u64 xi(std::size_t v) const { return xs_[v % xs_.size()]; }

  // Shared-point count of two sections on distinct axes; axis-free.
  int multiplicity_by_index(std::size_t i, std::size_t j) const {
    return mult_[i * xs_.size() + j];
  }
  // Zero when the axes coincide (same-axis sections never share a point
  // unless they are the same section).
  int multiplicity(std::size_t u, std::size_t v) const;

 private:
  u64 p_ = 0;
  std::vector<u64> xs_;
  std::vector<surface::ConicClass> cls_;
  std::vector<std::uint8_t> mult_;
};

enum class VertexSet {
  Full,          // every nonempty section
  NonParabolic,  // drop the trace +-2 sections
};

struct DiameterReport {
  bool connected = false;
  u64 diameter = 0;           // valid when connected and vertices exist
  std::size_t n_vertices = 0;
  // A vertex pair with no path between them when disconnected.
  std::size_t witness_u = 0;
  std::size_t witness_v = 0;
};

// Exact diameter by breadth-first search from every vertex.
DiameterReport diameter(const IncidenceGraph& g, VertexSet vs = VertexSet::Full);

// Same search over an explicit n x n adjacency matrix (nonzero = edge);
// a single vertex has diameter 0.
DiameterReport diameter_of_matrix(std::size_t n,
                                  const std::vector<std::uint8_t>& adj);

// Same, after merging the three per-axis copies of each value into one
// class vertex.
DiameterReport merged_diameter(const IncidenceGraph& g,
                               VertexSet vs = VertexSet::Full);

// For each value xi in F_p^* with a nonempty section, the number of eta in
// F_p^* whose section meets it (on another axis). Indexed by xi; entries for
// xi = 0 or empty sections are zero.
std::vector<u64> meeting_degrees(const IncidenceGraph& g);

struct MeetingLaw {
  u64 p = 0;
  bool nonparabolic_uniform = false;  // one common degree across those values
  u64 nonparabolic_degree = 0;
  bool matches_half = false;          // degree == (p-1)/2
  // degree == (p-1)/2 when p = 1 mod 4, (p+1)/2 when p = 3 mod 4
  bool matches_parity_rule = false;
  bool parabolic_meets_all = false;   // nonempty parabolic values meet every
                                      // value in F_p^*; vacuously true
};

MeetingLaw meeting_law(const IncidenceGraph& g);

// Rows: axis_a,xi,axis_b,eta,multiplicity with axis_a < axis_b and
// multiplicity >= 1.
void write_edges_csv(const IncidenceGraph& g, std::ostream& out);

}  // namespace markoff::incidence
