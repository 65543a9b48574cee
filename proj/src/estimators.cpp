#include "pcdoa/estimators.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pcdoa/error.hpp"

namespace pcdoa {

PhaseOffsetEstimate estimate_phase_offsets(const CMatrix& separated, double magnitude_threshold) {
  PhaseOffsetEstimate out;
  out.offsets.resize(separated.rows(), separated.cols());
  out.degenerate = BoolMatrix::Constant(separated.rows(), separated.cols(), false);
  for (Eigen::Index j = 0; j < separated.cols(); ++j)
    for (Eigen::Index i = 0; i < separated.rows(); ++i) {
      const Complex v = separated(i, j);
      const double r = std::abs(v);
      if (!(r >= magnitude_threshold) || r == 0.0) {
        out.offsets(i, j) = 1.0;
        out.degenerate(i, j) = true;
      } else {
        out.offsets(i, j) = v / r;
      }
    }
  return out;
}

PhaseOffsetEstimate estimate_phase_offsets(const CMatrix& separated) {
  const double peak = separated.size() == 0 ? 0.0 : separated.cwiseAbs().maxCoeff();
  return estimate_phase_offsets(separated, 1e-12 * peak);
}

std::vector<double> AngleGrid::points() const {
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start)
    throw InvalidParameter("angle grid is empty");
  if (start <= -90.0 || stop >= 90.0) throw InvalidParameter("angle grid leaves (-90, 90) degrees");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + static_cast<double>(i) * step;
  return out;
}

namespace {

double wavenumber(const ArrayGeometry& geometry) { return 2.0 * kPi / geometry.wavelength(); }

CVector steering_rad(const ArrayGeometry& geometry, double theta) {
  const auto eta = geometry.intra_displacements();
  const double phase = wavenumber(geometry) * std::sin(theta);
  CVector b(static_cast<Eigen::Index>(eta.size()));
  for (std::size_t m = 0; m < eta.size(); ++m)
    b(static_cast<Eigen::Index>(m)) = std::polar(1.0, phase * eta[m]);
  return b;
}

void check_shapes(const CMatrix& x, const ArrayGeometry& geometry, const CMatrix& offsets,
                  std::size_t sources) {
  if (x.rows() != geometry.elements() || x.cols() != geometry.subarrays())
    throw ShapeError("measurement matrix does not match the geometry");
  if (offsets.rows() != static_cast<Eigen::Index>(sources) || offsets.cols() != x.cols())
    throw ShapeError("phase offsets do not match the sources and subarrays");
}

// Model evaluation with theta in radians.
struct Model {
  const CMatrix& x;
  const ArrayGeometry& geometry;
  const CMatrix& offsets;

  CMatrix residual(const RVector& theta, const CVector& s) const {
    CMatrix r = x;
    for (Eigen::Index l = 0; l < theta.size(); ++l) {
      const CVector b = steering_rad(geometry, theta(l));
      r.noalias() -= b * (s(l) * offsets.row(l));
    }
    return r;
  }

  double cost(const RVector& theta, const CVector& s) const {
    return residual(theta, s).squaredNorm();
  }

  NlsGradient gradient(const RVector& theta, const CVector& s) const {
    const CMatrix r = residual(theta, s);
    const auto eta = geometry.intra_displacements();
    const double k0 = wavenumber(geometry);
    NlsGradient g;
    g.theta.resize(theta.size());
    g.amplitudes.resize(theta.size());
    for (Eigen::Index l = 0; l < theta.size(); ++l) {
      const CVector b = steering_rad(geometry, theta(l));
      // r_k projected on b, combined across subarrays with conj(phi_lk).
      const CVector projections = r.adjoint() * b;  // entry k: r_k^H b
      const Complex weighted = (projections.transpose() * offsets.row(l).transpose())(0, 0);
      g.amplitudes(l) = -2.0 * std::conj(weighted);

      CVector db(b.size());
      for (Eigen::Index m = 0; m < b.size(); ++m)
        db(m) = Complex(0.0, k0 * eta[static_cast<std::size_t>(m)] * std::cos(theta(l))) * b(m);
      const CVector dprojections = r.adjoint() * db;
      const Complex dweighted = (dprojections.transpose() * offsets.row(l).transpose())(0, 0);
      g.theta(l) = -2.0 * (dweighted * s(l)).real();
    }
    return g;
  }
};

RVector to_radians(std::span<const double> deg) {
  RVector out(static_cast<Eigen::Index>(deg.size()));
  for (std::size_t i = 0; i < deg.size(); ++i) out(static_cast<Eigen::Index>(i)) = deg_to_rad(deg[i]);
  return out;
}

CVector to_vector(std::span<const Complex> values) {
  CVector out(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) out(static_cast<Eigen::Index>(i)) = values[i];
  return out;
}

bool inside_domain(const RVector& theta) {
  for (Eigen::Index l = 0; l < theta.size(); ++l)
    if (!(std::abs(theta(l)) < kPi / 2.0)) return false;
  return true;
}

}  // namespace

DoaEstimate bss_mf(const CMatrix& x, const ArrayGeometry& geometry, const CMatrix& offsets,
                   const AngleGrid& grid) {
  const auto sources = static_cast<std::size_t>(offsets.rows());
  check_shapes(x, geometry, offsets, sources);

  DoaEstimate out;
  out.grid_deg = grid.points();
  const auto n = static_cast<Eigen::Index>(out.grid_deg.size());

  // Rows are b(theta)^H over the grid.
  CMatrix steering_h(n, geometry.elements());
  for (Eigen::Index g = 0; g < n; ++g)
    steering_h.row(g) = steering_rad(geometry, deg_to_rad(out.grid_deg[static_cast<std::size_t>(g)]))
                            .adjoint();

  for (std::size_t l = 0; l < sources; ++l) {
    const CVector y = x * offsets.row(static_cast<Eigen::Index>(l)).adjoint();
    RVector spectrum = (steering_h * y).cwiseAbs();
    Eigen::Index best = 0;
    spectrum.maxCoeff(&best);
    out.directions_deg.push_back(out.grid_deg[static_cast<std::size_t>(best)]);
    out.spectra.push_back(std::move(spectrum));
  }
  return out;
}

double nls_cost(const CMatrix& x, const ArrayGeometry& geometry, const CMatrix& offsets,
                std::span<const double> thetas_deg, std::span<const Complex> amplitudes) {
  if (thetas_deg.size() != amplitudes.size()) throw ShapeError("directions and amplitudes differ in count");
  check_shapes(x, geometry, offsets, thetas_deg.size());
  return Model{x, geometry, offsets}.cost(to_radians(thetas_deg), to_vector(amplitudes));
}

NlsGradient nls_gradient(const CMatrix& x, const ArrayGeometry& geometry, const CMatrix& offsets,
                         std::span<const double> thetas_deg, std::span<const Complex> amplitudes) {
  if (thetas_deg.size() != amplitudes.size()) throw ShapeError("directions and amplitudes differ in count");
  check_shapes(x, geometry, offsets, thetas_deg.size());
  return Model{x, geometry, offsets}.gradient(to_radians(thetas_deg), to_vector(amplitudes));
}

std::vector<Complex> least_squares_amplitudes(const CMatrix& x, const ArrayGeometry& geometry,
                                              const CMatrix& offsets,
                                              std::span<const double> thetas_deg) {
  check_shapes(x, geometry, offsets, thetas_deg.size());
  const Eigen::Index m = x.rows();
  const Eigen::Index k = x.cols();
  const auto l = static_cast<Eigen::Index>(thetas_deg.size());
  CMatrix design(m * k, l);
  for (Eigen::Index i = 0; i < l; ++i) {
    const CVector b = steering_rad(geometry, deg_to_rad(thetas_deg[static_cast<std::size_t>(i)]));
    for (Eigen::Index c = 0; c < k; ++c) design.col(i).segment(c * m, m) = b * offsets(i, c);
  }
  const CVector target = x.reshaped();
  const CVector s = design.colPivHouseholderQr().solve(target);
  return {s.data(), s.data() + s.size()};
}

DoaEstimate bss_nls(const CMatrix& x, const ArrayGeometry& geometry, const CMatrix& offsets,
                    std::span<const double> initial_deg, std::span<const Complex> initial_amplitudes,
                    const NlsOptions& options) {
  if (initial_deg.size() != initial_amplitudes.size())
    throw ShapeError("directions and amplitudes differ in count");
  check_shapes(x, geometry, offsets, initial_deg.size());

  const Model model{x, geometry, offsets};
  RVector theta = to_radians(initial_deg);
  CVector s = to_vector(initial_amplitudes);
  if (!inside_domain(theta)) throw DomainError("initial direction outside (-90, 90) degrees");

  DoaEstimate out;
  double cost = model.cost(theta, s);
  out.cost_history.push_back(cost);

  auto require_finite = [](double norm2) {
    if (!std::isfinite(norm2)) throw DomainError("non-finite gradient");
  };

  // Residual at the rounding level of the data: nothing left to fit.
  const double cost_floor = 1e-24 * x.squaredNorm();
  for (; out.iterations < options.max_iterations && cost > cost_floor;) {
    const double start_cost = cost;
    ++out.iterations;

    // Amplitude step.
    {
      const CVector g = model.gradient(theta, s).amplitudes;
      const double g2 = g.squaredNorm();
      require_finite(g2);
      double mu = options.initial_step;
      for (int h = 0; h <= options.max_halvings && g2 > 0.0; ++h, mu *= options.backtrack) {
        const CVector trial = s - mu * g;
        const double c = model.cost(theta, trial);
        if (c <= cost - options.sufficient_decrease * mu * g2) {
          s = trial;
          cost = c;
          out.cost_history.push_back(cost);
          break;
        }
      }
    }

    // Direction step.
    {
      const RVector g = model.gradient(theta, s).theta;
      const double g2 = g.squaredNorm();
      require_finite(g2);
      double mu = options.initial_step;
      for (int h = 0; h <= options.max_halvings && g2 > 0.0; ++h, mu *= options.backtrack) {
        const RVector trial = theta - mu * g;
        if (!inside_domain(trial)) continue;
        const double c = model.cost(trial, s);
        if (c <= cost - options.sufficient_decrease * mu * g2) {
          theta = trial;
          cost = c;
          out.cost_history.push_back(cost);
          break;
        }
      }
    }

    if (start_cost - cost <= options.tolerance * start_cost) break;
  }

  out.final_cost = cost;
  for (Eigen::Index l = 0; l < theta.size(); ++l) {
    out.directions_deg.push_back(rad_to_deg(theta(l)));
    out.amplitudes.push_back(s(l));
  }
  return out;
}

DoaEstimate bss_nls(const CMatrix& x, const ArrayGeometry& geometry, const CMatrix& offsets,
                    std::span<const double> initial_deg, const NlsOptions& options) {
  const std::vector<Complex> s0 = least_squares_amplitudes(x, geometry, offsets, initial_deg);
  return bss_nls(x, geometry, offsets, initial_deg, s0, options);
}

SourceMatch match_sources(std::span<const double> estimates_deg,
                          std::span<const double> truths_deg) {
  if (estimates_deg.size() != truths_deg.size())
    throw ShapeError("estimates and truths differ in count");
  if (truths_deg.size() > 8) throw InvalidParameter("source matching supports at most 8 sources");

  std::vector<std::size_t> perm(truths_deg.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  SourceMatch best;
  best.squared_error = std::numeric_limits<double>::infinity();
  do {
    double err = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      const double e = estimates_deg[perm[i]] - truths_deg[i];
      err += e * e;
    }
    if (err < best.squared_error) {
      best.squared_error = err;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (best.permutation.empty()) best.squared_error = 0.0;
  return best;
}

}  // namespace pcdoa
