#pragma once

#include <span>
#include <vector>

#include "pcdoa/types.hpp"

namespace pcdoa {

/// Signal-subspace whitening of an N x T data matrix.
struct WhiteningResult {
  CMatrix whitener;              // W, L x N
  double noise_estimate = 0.0;   // sigma-hat, mean of the N - L smallest eigenvalues
  CMatrix whitened;              // Z = W Y, L x T
  RVector covariance_spectrum;   // all N eigenvalues of Y Y^H / T, descending
};

/// Builds W = diag(lambda_l - sigma-hat)^(-1/2) U_L^H from the leading L
/// eigenpairs of the sample covariance. Throws RankDeficiencyError naming the
/// first l with lambda_l - sigma-hat <= 1e-12 * lambda_1.
WhiteningResult estimate_whitener(const CMatrix& y, int sources);

/// Fourth-order sample cumulant of four length-T vectors (plain transposes,
/// no implicit conjugation):
///   (1/T) sum a b c d - (1/T^2) (a'b c'd + a'c b'd + a'd b'c).
Complex sample_cumulant(const CVector& a, const CVector& b, const CVector& c, const CVector& d);

/// 0-based position of the pair (first, second) in the L^2 cumulant index
/// space: first + second * L. Row p of Q pairs (a, b); column q pairs (d, c).
constexpr Eigen::Index cumulant_index(Eigen::Index first, Eigen::Index second, Eigen::Index l) {
  return first + second * l;
}

struct CumulantMatrixSet {
  std::vector<CMatrix> matrices;  // L eigen-scaled L x L eigenmatrices
  RVector eigenvalues;            // their (signed) eigenvalues, descending by magnitude
  RVector spectrum;               // all L^2 eigenvalues of Q, same order
  CMatrix cumulant_matrix;        // Q, L^2 x L^2, Hermitian
};

/// Q(p, q) = Cum(z_a, conj z_b, z_c, conj z_d) with p = (a, b), q = (d, c);
/// keeps the L dominant eigenpairs, each devectorized column-major and scaled
/// by its eigenvalue.
CumulantMatrixSet cumulant_matrix_set(const CMatrix& z);

struct JointDiagonalizationOptions {
  int max_sweeps = 100;
  double angle_threshold = 1e-8;
};

struct UnitaryDiagonalizer {
  CMatrix rotation;                  // V, product of the applied Givens factors
  double off_diagonal_energy = 0.0;  // after the final sweep
  std::vector<CMatrix> transformed;  // V^H R_l V
  std::vector<double> sweep_energies;  // entry 0 is the input energy, then one per sweep
  int sweeps = 0;
};

/// Sum over the set of squared moduli of off-diagonal entries.
double off_diagonal_energy(std::span<const CMatrix> set);

/// Joint approximate diagonalization by pairwise complex Givens rotations,
/// sweeping (m, n) lexicographically. Stops after a sweep in which every
/// rotation has |beta| < angle_threshold, or after max_sweeps.
UnitaryDiagonalizer joint_diagonalize(std::vector<CMatrix> set,
                                      const JointDiagonalizationOptions& options = {});
UnitaryDiagonalizer joint_diagonalize(const CumulantMatrixSet& set,
                                      const JointDiagonalizationOptions& options = {});

struct SeparationResult {
  WhiteningResult whitening;
  CumulantMatrixSet cumulants;
  UnitaryDiagonalizer diagonalizer;
  CMatrix separated;  // H-hat = V^H W Y, L x T
};

SeparationResult jade_separate(const CMatrix& y, int sources,
                               const JointDiagonalizationOptions& options = {});

/// Sum over (r, p, q) of |Cum(s_r, conj s_r, s_p, conj s_q)|^2 with 1/K
/// normalization. Without `include_diagonal_triples` the L terms r = p = q
/// are left out.
double jade_cost(const CMatrix& sources, bool include_diagonal_triples);

/// Same cost through the second-order form valid for constant-modulus rows:
/// sum |R~_rp conj(R~_rq) + R_rq R_pr|^2.
double jade_cost_closed_form(const CMatrix& sources, bool include_diagonal_triples);

}  // namespace pcdoa
