// The Markoff surface x1^2 + x2^2 + x3^2 = 3 x1 x2 x3 over F_p: membership,
// the moves generating Gamma (coordinate permutations, Vieta involutions,
// rotations), conic sections of the fibers x_j = xi, and the row parameters
// (a, b, sigma) that linearize a rotation orbit.
//
// Internally the conic machinery works in trace coordinates X = 3x, where
// the surface becomes X1^2 + X2^2 + X3^2 = X1 X2 X3 and the fiber X1 = X is
// X2^2 + X3^2 - X X2 X3 + X^2 = 0. The rotation fixing x_j acts on the
// (X_{j+1}, X_{j+2}) pair by the matrix [[0,1],[-1,X]] of trace X = 3 xi.

#pragma once

#include <vector>

#include "markoff/ff.hpp"

namespace markoff::surface {

using ff::PrimeContext;
using ff::QuadExt;
using ff::u64;

struct Triple {
  u64 x1 = 0, x2 = 0, x3 = 0;
  bool operator==(const Triple&) const = default;
};

u64 coord(const Triple& t, int j);  // j in {1,2,3}
bool is_on_surface(const Triple& t, u64 p);
u64 canonical_index(const Triple& t, u64 p);  // (x1 p + x2) p + x3
Triple from_index(u64 idx, u64 p);

// Vieta involution on coordinate j: x_j -> 3 x_k x_l - x_j.
Triple vieta(int j, const Triple& t, u64 p);

// The six coordinate permutations, k in [0,6). permute(k,t) has coordinate i
// equal to t's coordinate perm_table(k)[i].
Triple permute(int k, const Triple& t);
int permutation_count();

// Rotation fixing x_j: (x_j, y, z) -> (x_j, z, 3 x_j z - y) on the cyclic
// successor pair. Equals transpose(j+1, j+2) composed with vieta(j+1).
Triple rotate(int j, const Triple& t, u64 p);
Triple rotate_inv(int j, const Triple& t, u64 p);

enum class ConicClass { Parabolic, Hyperbolic, Elliptic };

struct ConicSection {
  int axis = 1;  // classification itself is axis independent
  u64 xi = 0;
  ConicClass cls = ConicClass::Hyperbolic;
  u64 trace = 0;          // 3 xi mod p
  u64 lambda_split = 0;   // eigenvalue, Hyperbolic only
  QuadExt lambda_ext;     // eigenvalue, Elliptic only
  u64 kappa = 0;          // trace^2/(trace^2-4); undefined for Parabolic
  u64 rot_order = 0;      // order of the rotation matrix [[0,1],[-1,trace]]
  u64 point_count = 0;    // p-1, p+1, or {2p, 0}; meaningless at xi = 0
};

// Class from the residue of trace^2 - 4. The parabolic rotation order is the
// matrix order: p at trace +2, 2p at trace -2 (the -2 matrix is -unipotent).
ConicSection classify(u64 xi, const PrimeContext& ctx);

// All points of the fiber x_axis = xi, xi != 0. Hyperbolic fibers carry p-1
// points, elliptic p+1; parabolic fibers are empty for p = 3 mod 4 and two
// disjoint lines (2p points) for p = 1 mod 4.
std::vector<Triple> conic_points(int axis, u64 xi, const PrimeContext& ctx);

// |C_j(xi) cap C_k(eta)| for j != k: 1 + legendre(9 xi^2 eta^2 - 4(xi^2+eta^2)).
int intersection_count(u64 xi, u64 eta, const PrimeContext& ctx);

// Row parameters of the rotation orbit through t around axis j. With
// X2, X3 the trace coordinates of the successor pair and lambda the
// eigenvalue: a = (lambda-1/lambda)^{-1} (X3 - X2/lambda),
// b = (lambda-1/lambda)^{-1} (lambda X2 - X3). After l rotations the
// successor trace coordinate is a lambda^l + b lambda^{-l}, and
// sigma = a b = trace^2/(trace^2-4) lies in F_p and never equals 1.
struct RowParam {
  bool split = true;
  u64 a_split = 0, b_split = 0;
  QuadExt a_ext, b_ext;
  u64 sigma = 0;
};

RowParam row_params(const Triple& t, int j, const PrimeContext& ctx);

}  // namespace markoff::surface
