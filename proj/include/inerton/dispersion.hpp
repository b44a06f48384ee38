#pragma once

// Reciprocal-space side of the model: mass-normalised Fourier force matrix,
// Fourier coupling matrix, the effective matrix W(k) including the squared
// coupling correction, and branch frequencies from its eigenvalues.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "inerton/errors.hpp"
#include "inerton/lattice_model.hpp"

namespace inerton {

struct WaveVector {
  int dimension = 1;
  std::array<double, kMaxDimension> k{0.0, 0.0, 0.0};  // rad/m

  double norm() const {
    double s = 0.0;
    for (int a = 0; a < dimension; ++a) s += k[a] * k[a];
    return std::sqrt(s);
  }

  WaveVector operator-() const {
    WaveVector w = *this;
    for (auto& v : w.k) v = -v;
    return w;
  }
};

/// One point of the periodic k-grid. `index` holds the integers j_a with
/// k_a = 2 pi j_a / (points_a g0), j_a in (-points_a/2, points_a/2].
struct GridPoint {
  std::size_t flat = 0;
  Offset index{0, 0, 0};
  WaveVector k;
};

using KGrid = std::vector<GridPoint>;

inline int grid_index_min(int points) { return -((points - 1) / 2); }

/// Maps an arbitrary integer j onto the canonical range (-points/2, points/2].
inline int wrap_grid_index(int j, int points) {
  const int lo = grid_index_min(points);
  int r = (j - lo) % points;
  if (r < 0) r += points;
  return lo + r;
}

inline WaveVector wave_vector(const LatticeSpec& spec, const Offset& index,
                              const Offset& points) {
  WaveVector w;
  w.dimension = spec.dimension;
  for (int a = 0; a < spec.dimension; ++a) {
    w.k[a] = 2.0 * kPi * index[a] / (points[a] * spec.g0);
  }
  return w;
}

/// Full k-grid in deterministic row-major order (last axis fastest).
/// `points_per_axis` = 0 uses the lattice's own n_sites.
inline KGrid make_k_grid(const LatticeSpec& spec, int points_per_axis = 0) {
  check_lattice_spec(spec);
  Offset points{1, 1, 1};
  for (int a = 0; a < spec.dimension; ++a) {
    points[a] = points_per_axis > 0 ? points_per_axis : spec.n_sites[a];
  }
  if (points_per_axis < 0) throw Error(ErrorCode::InvalidParameter, "grid size must be positive");

  KGrid grid;
  grid.reserve(static_cast<std::size_t>(points[0]) * points[1] * points[2]);
  for (int i0 = 0; i0 < points[0]; ++i0) {
    for (int i1 = 0; i1 < points[1]; ++i1) {
      for (int i2 = 0; i2 < points[2]; ++i2) {
        GridPoint p;
        p.flat = grid.size();
        const std::array<int, 3> i{i0, i1, i2};
        for (int a = 0; a < kMaxDimension; ++a) {
          p.index[a] = a < spec.dimension ? grid_index_min(points[a]) + i[a] : 0;
        }
        p.k = wave_vector(spec, p.index, points);
        grid.push_back(p);
      }
    }
  }
  return grid;
}

inline constexpr double kImaginaryResidualTolerance = 1e-12;
inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kNegativeEigenTolerance = 1e-10;

namespace detail {

inline double phase(const WaveVector& k, const Offset& l, double g0) {
  double s = 0.0;
  for (int a = 0; a < k.dimension; ++a) s += k.k[a] * l[a] * g0;
  return s;
}

/// Sum_l T(l) exp(i k.l); the imaginary part must vanish relative to the
/// magnitude of the summed terms.
inline Eigen::MatrixXd real_lattice_sum(const OffsetTensorField& field, const LatticeSpec& spec,
                                        const WaveVector& k, const char* what) {
  const int d = spec.dimension;
  Eigen::MatrixXd re = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(d, d);
  double scale = 0.0;
  for (const auto& [l, m] : field.entries) {
    const double ph = phase(k, l, spec.g0);
    re += m * std::cos(ph);
    im += m * std::sin(ph);
    scale += m.norm();
  }
  const double residual = im.norm();
  if (residual > kImaginaryResidualTolerance * std::max(re.norm(), scale)) {
    throw Error(ErrorCode::ImaginaryResidual,
                std::string(what) + " has imaginary part " + std::to_string(residual) +
                    "; the model breaks inversion symmetry");
  }
  return re;
}

}  // namespace detail

/// V~(k) = (1/M) sum_l V(l) e^{i k.l}, in s^-2.
inline Eigen::MatrixXd fourier_force(const ForceConstants& force, const LatticeSpec& spec,
                                     const WaveVector& k) {
  return detail::real_lattice_sum(force, spec, k, "Fourier force matrix") / spec.atom_mass();
}

/// tau~^{-1}(k) = sum_l tau^{-1}(l) e^{i k.l}, in s^-1.
inline Eigen::MatrixXd fourier_coupling(const CouplingConstants& coupling,
                                        const LatticeSpec& spec, const WaveVector& k) {
  return detail::real_lattice_sum(coupling, spec, k, "Fourier coupling matrix");
}

struct FourierMatrices {
  Eigen::MatrixXd V_tilde;
  Eigen::MatrixXd tau_tilde_inv;
  WaveVector at;
  bool isotropic_scalar = true;
};

inline FourierMatrices fourier_matrices(const Model& model, const WaveVector& k) {
  return {fourier_force(model.force, model.lattice, k),
          fourier_coupling(model.coupling, model.lattice, k), k,
          model.coupling.isotropic_scalar || model.lattice.dimension == 1};
}

/// Scalar value t when `tau` equals t * identity (within rounding).
inline std::optional<double> isotropic_value(const Eigen::MatrixXd& tau) {
  const double t = tau(0, 0);
  const Eigen::MatrixXd diff = tau - t * Eigen::MatrixXd::Identity(tau.rows(), tau.cols());
  const double tol = 1e-12 * std::max(std::abs(t), tau.norm());
  if (diff.cwiseAbs().maxCoeff() > tol) return std::nullopt;
  return t;
}

/// Isotropic coupling: W = V~ + (tau~)^2, independent of polarisation.
inline Eigen::MatrixXd effective_matrix(const FourierMatrices& fm) {
  const auto t = isotropic_value(fm.tau_tilde_inv);
  if (!t) {
    throw Error(ErrorCode::InvalidParameter,
                "coupling matrix is not isotropic; supply a fixed polarisation");
  }
  Eigen::MatrixXd w = fm.V_tilde;
  w.diagonal().array() += (*t) * (*t);
  return w;
}

/// Literal evaluation for a fixed polarisation e:
///   W_ab = V~_ab + tau~_ab * sum_a' tau~_a'b e_a' / e_b.
/// Refuses a zero component e_b unless the coupling is isotropic.
inline Eigen::MatrixXd effective_matrix(const FourierMatrices& fm,
                                        const Eigen::VectorXd& polarization) {
  const Eigen::Index d = fm.V_tilde.rows();
  if (polarization.size() != d) {
    throw Error(ErrorCode::InvalidParameter, "polarisation has wrong dimension");
  }
  if (fm.isotropic_scalar && isotropic_value(fm.tau_tilde_inv)) return effective_matrix(fm);

  std::string zero_components;
  for (Eigen::Index b = 0; b < d; ++b) {
    if (polarization(b) == 0.0) {
      zero_components += (zero_components.empty() ? "" : ",") + std::to_string(b + 1);
    }
  }
  if (!zero_components.empty()) {
    throw Error(ErrorCode::PolarizationSingularity,
                "polarisation component(s) " + zero_components +
                    " vanish with anisotropic coupling");
  }
  const Eigen::MatrixXd& tau = fm.tau_tilde_inv;
  Eigen::MatrixXd w = fm.V_tilde;
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      w(a, b) += tau(a, b) * tau.col(b).dot(polarization) / polarization(b);
    }
  }
  return w;
}

struct Branches {
  Eigen::VectorXd omegas;         // ascending, rad/s
  Eigen::MatrixXd polarizations;  // column s belongs to omegas(s)
};

/// Solves det(Omega^2 - W) = 0 for a symmetric W.
inline Branches branch_frequencies(const Eigen::MatrixXd& w) {
  const double norm = w.norm();
  const double asym = (w - w.transpose()).norm();
  if (asym > kSymmetryTolerance * norm) {
    throw Error(ErrorCode::Asymmetry, "effective matrix is not symmetric (|W - W^T| = " +
                                          std::to_string(asym) + ")");
  }
  const Eigen::MatrixXd sym = 0.5 * (w + w.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::Instability, "eigen decomposition failed");
  }
  Branches out;
  out.omegas.resize(sym.rows());
  for (Eigen::Index s = 0; s < sym.rows(); ++s) {
    double ev = solver.eigenvalues()(s);
    if (ev < -kNegativeEigenTolerance * norm) {
      throw Error(ErrorCode::Instability,
                  "negative eigenvalue " + std::to_string(ev) + " (unstable lattice)");
    }
    out.omegas(s) = std::sqrt(std::max(ev, 0.0));
  }
  out.polarizations = solver.eigenvectors();
  return out;
}

enum class CouplingMode { IsotropicScalar, FixedPolarization };

struct DispersionOptions {
  CouplingMode mode = CouplingMode::IsotropicScalar;
  Eigen::VectorXd polarization;  // used in FixedPolarization mode
};

struct DispersionResult {
  GridPoint at;
  Eigen::MatrixXd W;
  Eigen::VectorXd omegas;
  Eigen::MatrixXd polarizations;
  Eigen::VectorXd elastic_omegas;  // branches of V~ alone
  /// True where the coupling raises the branch above its elastic value.
  std::vector<bool> gapped;
};

inline DispersionResult dispersion_at(const Model& model, const GridPoint& point,
                                      const DispersionOptions& options = {}) {
  const FourierMatrices fm = fourier_matrices(model, point.k);
  DispersionResult r;
  r.at = point;
  r.W = options.mode == CouplingMode::IsotropicScalar
            ? effective_matrix(fm)
            : effective_matrix(fm, options.polarization);
  auto branches = branch_frequencies(r.W);
  r.omegas = std::move(branches.omegas);
  r.polarizations = std::move(branches.polarizations);
  r.elastic_omegas = branch_frequencies(fm.V_tilde).omegas;
  const double scale = std::max(r.W.norm(), 1e-300);
  r.gapped.resize(r.omegas.size());
  for (Eigen::Index s = 0; s < r.omegas.size(); ++s) {
    const double shift = r.omegas(s) * r.omegas(s) - r.elastic_omegas(s) * r.elastic_omegas(s);
    r.gapped[s] = shift > 1e-12 * scale;
  }
  return r;
}

inline std::string describe(const GridPoint& p) {
  std::string s = "k_index=" + std::to_string(p.flat) + " k=(";
  for (int a = 0; a < p.k.dimension; ++a) s += (a ? "," : "") + std::to_string(p.k.k[a]);
  return s + ")";
}

/// One result per grid point, in grid order. Per-point failures are rethrown
/// with the offending wavevector attached.
inline std::vector<DispersionResult> dispersion_sweep(const Model& model, const KGrid& grid,
                                                      const DispersionOptions& options = {}) {
  std::vector<DispersionResult> table;
  table.reserve(grid.size());
  for (const auto& point : grid) {
    try {
      table.push_back(dispersion_at(model, point, options));
    } catch (const Error& e) {
      throw Error(e.code(), describe(point) + ": " + e.message());
    }
  }
  return table;
}

}  // namespace inerton
