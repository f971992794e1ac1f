#include "markoff/incidence.hpp"

#include <algorithm>
#include <bit>
#include <ostream>

#include "markoff/check.hpp"

namespace markoff::incidence {

using surface::ConicClass;

IncidenceGraph IncidenceGraph::build(const ff::PrimeContext& ctx) {
  require(ctx.p >= 5, "IncidenceGraph::build: p >= 5 required");
  IncidenceGraph g;
  g.p_ = ctx.p;
  for (u64 xi = 1; xi < ctx.p; ++xi) {
    auto sec = surface::classify(xi, ctx);
    if (sec.point_count > 0) {
      g.xs_.push_back(xi);
      g.cls_.push_back(sec.cls);
    }
  }
  const std::size_t n = g.xs_.size();
  g.mult_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      g.mult_[i * n + j] = static_cast<std::uint8_t>(
          surface::intersection_count(g.xs_[i], g.xs_[j], ctx));
  return g;
}

int IncidenceGraph::multiplicity(std::size_t u, std::size_t v) const {
  const std::size_t n = xs_.size();
  if (u / n == v / n) return 0;
  return multiplicity_by_index(u % n, v % n);
}

namespace {

// Dense bitset BFS over an explicit vertex subset.
struct Bfs {
  std::size_t n = 0, w = 0;
  std::vector<u64> rows;  // n rows of w words
  std::vector<u64> mask;  // allowed vertices

  Bfs(std::size_t n_in) : n(n_in), w((n_in + 63) / 64) {
    rows.assign(n * w, 0);
    mask.assign(w, 0);
  }
  static void set(std::vector<u64>& bits, std::size_t i) {
    bits[i >> 6] |= u64{1} << (i & 63);
  }
  static bool test(const std::vector<u64>& bits, std::size_t i) {
    return (bits[i >> 6] >> (i & 63)) & 1;
  }

  DiameterReport run() const {
    DiameterReport rep;
    for (std::size_t k = 0; k < w; ++k)
      rep.n_vertices += static_cast<std::size_t>(std::popcount(mask[k]));
    rep.connected = true;
    std::vector<u64> visited(w), frontier(w), next(w);
    for (std::size_t s = 0; s < n; ++s) {
      if (!test(mask, s)) continue;
      std::fill(visited.begin(), visited.end(), 0);
      std::fill(frontier.begin(), frontier.end(), 0);
      set(visited, s);
      set(frontier, s);
      u64 ecc = 0;
      for (;;) {
        std::fill(next.begin(), next.end(), 0);
        for (std::size_t v = 0; v < n; ++v) {
          if (!test(frontier, v)) continue;
          const u64* row = rows.data() + v * w;
          for (std::size_t k = 0; k < w; ++k) next[k] |= row[k];
        }
        bool grew = false;
        for (std::size_t k = 0; k < w; ++k) {
          next[k] &= mask[k] & ~visited[k];
          if (next[k]) grew = true;
          visited[k] |= next[k];
        }
        if (!grew) break;
        frontier = next;
        ++ecc;
      }
      for (std::size_t k = 0; k < w; ++k) {
        u64 missing = mask[k] & ~visited[k];
        if (missing) {
          rep.connected = false;
          rep.witness_u = s;
          rep.witness_v = (k << 6) + static_cast<std::size_t>(
                                         std::countr_zero(missing));
          return rep;
        }
      }
      rep.diameter = std::max(rep.diameter, ecc);
    }
    return rep;
  }
};

bool value_allowed(const IncidenceGraph& g, std::size_t i, VertexSet vs) {
  return vs == VertexSet::Full || g.value_class(i) != ConicClass::Parabolic;
}

}  // namespace

DiameterReport diameter(const IncidenceGraph& g, VertexSet vs) {
  const std::size_t n = g.value_count();
  Bfs bfs(3 * n);
  for (std::size_t v = 0; v < 3 * n; ++v) {
    if (!value_allowed(g, v % n, vs)) continue;
    bfs.set(bfs.mask, v);
    for (std::size_t u = 0; u < 3 * n; ++u)
      if (value_allowed(g, u % n, vs) && g.multiplicity(v, u) >= 1)
        bfs.rows[v * bfs.w + (u >> 6)] |= u64{1} << (u & 63);
  }
  return bfs.run();
}

DiameterReport diameter_of_matrix(std::size_t n,
                                  const std::vector<std::uint8_t>& adj) {
  require(adj.size() == n * n, "diameter_of_matrix: matrix size mismatch");
  Bfs bfs(n);
  for (std::size_t v = 0; v < n; ++v) {
    bfs.set(bfs.mask, v);
    for (std::size_t u = 0; u < n; ++u)
      if (v != u && adj[v * n + u])
        bfs.rows[v * bfs.w + (u >> 6)] |= u64{1} << (u & 63);
  }
  return bfs.run();
}

DiameterReport merged_diameter(const IncidenceGraph& g, VertexSet vs) {
  const std::size_t n = g.value_count();
  Bfs bfs(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!value_allowed(g, i, vs)) continue;
    bfs.set(bfs.mask, i);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && value_allowed(g, j, vs) &&
          g.multiplicity_by_index(i, j) >= 1)
        bfs.rows[i * bfs.w + (j >> 6)] |= u64{1} << (j & 63);
  }
  return bfs.run();
}

std::vector<u64> meeting_degrees(const IncidenceGraph& g) {
  const std::size_t n = g.value_count();
  std::vector<u64> deg(g.prime(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    u64 d = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (g.multiplicity_by_index(i, j) >= 1) ++d;
    deg[g.value(i)] = d;
  }
  return deg;
}

MeetingLaw meeting_law(const IncidenceGraph& g) {
  MeetingLaw law;
  law.p = g.prime();
  law.nonparabolic_uniform = true;
  law.parabolic_meets_all = true;
  auto deg = meeting_degrees(g);
  bool first = true;
  for (std::size_t i = 0; i < g.value_count(); ++i) {
    u64 d = deg[g.value(i)];
    if (g.value_class(i) == ConicClass::Parabolic) {
      if (d != law.p - 1) law.parabolic_meets_all = false;
    } else if (first) {
      law.nonparabolic_degree = d;
      first = false;
    } else if (d != law.nonparabolic_degree) {
      law.nonparabolic_uniform = false;
    }
  }
  u64 parity = law.p % 4 == 1 ? (law.p - 1) / 2 : (law.p + 1) / 2;
  law.matches_half = law.nonparabolic_uniform &&
                     law.nonparabolic_degree == (law.p - 1) / 2;
  law.matches_parity_rule =
      law.nonparabolic_uniform && law.nonparabolic_degree == parity;
  return law;
}

void write_edges_csv(const IncidenceGraph& g, std::ostream& out) {
  out << "axis_a,xi,axis_b,eta,multiplicity\n";
  const std::size_t n = g.value_count();
  for (int a = 1; a <= 3; ++a)
    for (int b = a + 1; b <= 3; ++b)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          int m = g.multiplicity_by_index(i, j);
          if (m >= 1)
            out << a << ',' << g.value(i) << ',' << b << ',' << g.value(j)
                << ',' << m << '\n';
        }
}

}  // namespace markoff::incidence
