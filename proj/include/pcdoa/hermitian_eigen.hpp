#pragma once

#include "pcdoa/types.hpp"

namespace pcdoa {

/// 2x2 unitary acting on coordinates (p, q):
///   [ pp  pq ]
///   [ qp  qq ]
struct PlaneRotation {
  Eigen::Index p = 0;
  Eigen::Index q = 1;
  Complex pp{1.0, 0.0};
  Complex pq{0.0, 0.0};
  Complex qp{0.0, 0.0};
  Complex qq{1.0, 0.0};
};

/// a <- G^H a G, touching only rows and columns p, q.
void apply_congruence(CMatrix& a, const PlaneRotation& g);

/// v <- v G, touching only columns p, q.
void apply_right(CMatrix& v, const PlaneRotation& g);

struct EigenDecomposition {
  RVector values;   // descending by magnitude, ties kept in original order
  CMatrix vectors;  // unit-norm columns matching `values`
  int sweeps = 0;
};

/// Cyclic complex Jacobi eigensolver for Hermitian matrices. The input is
/// symmetrized as (A + A^H)/2 before iterating. Throws ShapeError on a
/// non-square argument.
EigenDecomposition hermitian_eigen(const CMatrix& a, int max_sweeps = 100);

}  // namespace pcdoa
