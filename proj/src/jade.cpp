#include "pcdoa/jade.hpp"

#include <cmath>
#include <sstream>

#include "pcdoa/error.hpp"
#include "pcdoa/hermitian_eigen.hpp"
#include "pcdoa/orthogonality.hpp"

namespace pcdoa {

WhiteningResult estimate_whitener(const CMatrix& y, int sources) {
  const Eigen::Index n = y.rows();
  const Eigen::Index t = y.cols();
  if (sources < 1) throw InvalidParameter("need at least one source");
  if (n <= sources) throw ShapeError("whitening needs more measurements than sources");
  if (t < sources) throw ShapeError("whitening needs at least as many samples as sources");

  const CMatrix covariance = y * y.adjoint() / static_cast<double>(t);
  const EigenDecomposition eig = hermitian_eigen(covariance);

  WhiteningResult out;
  out.covariance_spectrum = eig.values;
  out.noise_estimate = eig.values.tail(n - sources).mean();

  const double floor = 1e-12 * std::max(eig.values(0), 0.0);
  out.whitener.resize(sources, n);
  for (int l = 0; l < sources; ++l) {
    const double gap = eig.values(l) - out.noise_estimate;
    if (!(gap > floor)) {
      std::ostringstream msg;
      msg << "noise-debiased covariance eigenvalue " << (l + 1) << " is not positive ("
          << gap << ")";
      throw RankDeficiencyError(static_cast<std::size_t>(l + 1), msg.str());
    }
    out.whitener.row(l) = eig.vectors.col(l).adjoint() / std::sqrt(gap);
  }
  out.whitened = out.whitener * y;
  return out;
}

Complex sample_cumulant(const CVector& a, const CVector& b, const CVector& c, const CVector& d) {
  const Eigen::Index t = a.size();
  if (b.size() != t || c.size() != t || d.size() != t)
    throw ShapeError("cumulant arguments differ in length");
  if (t < 1) throw ShapeError("cumulant needs at least one sample");

  const double inv_t = 1.0 / static_cast<double>(t);
  const Complex fourth = a.cwiseProduct(b).transpose() * c.cwiseProduct(d);
  const Complex ab = a.transpose() * b;
  const Complex cd = c.transpose() * d;
  const Complex ac = a.transpose() * c;
  const Complex bd = b.transpose() * d;
  const Complex ad = a.transpose() * d;
  const Complex bc = b.transpose() * c;
  return inv_t * fourth - inv_t * inv_t * (ab * cd + ac * bd + ad * bc);
}

CumulantMatrixSet cumulant_matrix_set(const CMatrix& z) {
  const Eigen::Index l = z.rows();
  const Eigen::Index t = z.cols();
  if (l < 1) throw ShapeError("cumulant set needs at least one row");
  if (t <= l) throw ShapeError("cumulant set needs more samples than rows");

  std::vector<CVector> rows(static_cast<std::size_t>(l));
  std::vector<CVector> conj_rows(static_cast<std::size_t>(l));
  for (Eigen::Index i = 0; i < l; ++i) {
    rows[static_cast<std::size_t>(i)] = z.row(i).transpose();
    conj_rows[static_cast<std::size_t>(i)] = z.row(i).adjoint();
  }

  CumulantMatrixSet out;
  out.cumulant_matrix.resize(l * l, l * l);
  for (Eigen::Index a = 0; a < l; ++a)
    for (Eigen::Index b = 0; b < l; ++b)
      for (Eigen::Index c = 0; c < l; ++c)
        for (Eigen::Index d = 0; d < l; ++d)
          out.cumulant_matrix(cumulant_index(a, b, l), cumulant_index(d, c, l)) =
              sample_cumulant(rows[static_cast<std::size_t>(a)],
                              conj_rows[static_cast<std::size_t>(b)],
                              rows[static_cast<std::size_t>(c)],
                              conj_rows[static_cast<std::size_t>(d)]);

  const EigenDecomposition eig = hermitian_eigen(out.cumulant_matrix);
  out.spectrum = eig.values;
  out.eigenvalues = eig.values.head(l);
  out.matrices.reserve(static_cast<std::size_t>(l));
  for (Eigen::Index k = 0; k < l; ++k) {
    const CVector column = eig.vectors.col(k);
    out.matrices.push_back(eig.values(k) * CMatrix(column.reshaped(l, l)));
  }
  return out;
}

double off_diagonal_energy(std::span<const CMatrix> set) {
  double energy = 0.0;
  for (const CMatrix& m : set)
    energy += m.squaredNorm() - m.diagonal().squaredNorm();
  return energy;
}

UnitaryDiagonalizer joint_diagonalize(std::vector<CMatrix> set,
                                      const JointDiagonalizationOptions& options) {
  if (set.empty()) throw ShapeError("joint diagonalization needs a nonempty set");
  const Eigen::Index l = set.front().rows();
  for (const CMatrix& m : set)
    if (m.rows() != l || m.cols() != l)
      throw ShapeError("joint diagonalization needs square matrices of one size");

  UnitaryDiagonalizer out;
  out.rotation = CMatrix::Identity(l, l);
  out.sweep_energies.push_back(off_diagonal_energy(set));

  for (; out.sweeps < options.max_sweeps;) {
    bool rotated = false;
    for (Eigen::Index m = 0; m + 1 < l; ++m)
      for (Eigen::Index n = m + 1; n < l; ++n) {
        // Re(O^H O) with one row of O per matrix.
        Eigen::Matrix3d gram = Eigen::Matrix3d::Zero();
        for (const CMatrix& r : set) {
          const Eigen::Vector3cd o(r(m, m) - r(n, n), r(m, n) + r(n, m),
                                   Complex(0.0, 1.0) * (r(n, m) - r(m, n)));
          gram += (o.conjugate() * o.transpose()).real();
        }
        const EigenDecomposition eig = hermitian_eigen(gram.cast<Complex>());
        Eigen::Vector3d eta = eig.vectors.col(0).real();
        eta.normalize();
        if (eta(0) < 0.0) eta = -eta;

        const double alpha = std::sqrt((1.0 + eta(0)) / 2.0);
        const Complex beta = Complex(eta(1), -eta(2)) / (2.0 * alpha);
        if (std::abs(beta) < options.angle_threshold) continue;

        rotated = true;
        const PlaneRotation g{m, n, Complex(alpha, 0.0), -std::conj(beta), beta,
                              Complex(alpha, 0.0)};
        for (CMatrix& r : set) apply_congruence(r, g);
        apply_right(out.rotation, g);
      }
    ++out.sweeps;
    out.sweep_energies.push_back(off_diagonal_energy(set));
    if (!rotated) break;
  }

  out.off_diagonal_energy = out.sweep_energies.back();
  out.transformed = std::move(set);
  return out;
}

UnitaryDiagonalizer joint_diagonalize(const CumulantMatrixSet& set,
                                      const JointDiagonalizationOptions& options) {
  return joint_diagonalize(set.matrices, options);
}

SeparationResult jade_separate(const CMatrix& y, int sources,
                               const JointDiagonalizationOptions& options) {
  SeparationResult out;
  out.whitening = estimate_whitener(y, sources);
  out.cumulants = cumulant_matrix_set(out.whitening.whitened);
  out.diagonalizer = joint_diagonalize(out.cumulants, options);
  out.separated = out.diagonalizer.rotation.adjoint() * out.whitening.whitened;
  return out;
}

double jade_cost(const CMatrix& sources, bool include_diagonal_triples) {
  const Eigen::Index l = sources.rows();
  std::vector<CVector> rows(static_cast<std::size_t>(l));
  std::vector<CVector> conj_rows(static_cast<std::size_t>(l));
  for (Eigen::Index i = 0; i < l; ++i) {
    rows[static_cast<std::size_t>(i)] = sources.row(i).transpose();
    conj_rows[static_cast<std::size_t>(i)] = sources.row(i).adjoint();
  }
  double cost = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t p = 0; p < rows.size(); ++p)
      for (std::size_t q = 0; q < rows.size(); ++q) {
        if (!include_diagonal_triples && r == p && p == q) continue;
        cost += std::norm(sample_cumulant(rows[r], conj_rows[r], rows[p], conj_rows[q]));
      }
  return cost;
}

double jade_cost_closed_form(const CMatrix& sources, bool include_diagonal_triples) {
  const SourceCrossCovariance cov = cross_covariance(sources);
  const CMatrix& r = cov.covariance;
  const CMatrix& rt = cov.conjugate_covariance;
  const Eigen::Index l = sources.rows();
  double cost = 0.0;
  for (Eigen::Index a = 0; a < l; ++a)
    for (Eigen::Index p = 0; p < l; ++p)
      for (Eigen::Index q = 0; q < l; ++q) {
        if (!include_diagonal_triples && a == p && p == q) continue;
        cost += std::norm(rt(a, p) * std::conj(rt(a, q)) + r(a, q) * r(p, a));
      }
  return cost;
}

}  // namespace pcdoa
