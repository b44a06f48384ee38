#pragma once

// Time evolution of the collective coordinates of one or more modes:
//
//   A'' = -V~ A - tau~ a' - eta A' + g sin(w t)
//   a'' =  tau~^T A' + f cos(w t)
//
// A is the atom coordinate, a the cloud coordinate. g is zero for the full
// model and carries tau~ f / w in the reduced (strong-drive) model where the
// cloud follows the drive alone. Free undamped motion conserves
//   E = |A'|^2/2 + |a'|^2/2 + Re(A^H V~ A)/2   and   P = a' - tau~^T A.
//
// The integrator works on the canonical pair (A, p_A = A') and the cloud
// momentum p_a = a' - tau~^T A. It composes exact sub-flows
// (damping, drive, potential kick, drift) into a symmetric second-order step,
// lifted to fourth order by a triple-jump composition. p_a is only touched by
// the drive, so P is conserved to rounding in the free system.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "inerton/dispersion.hpp"
#include "inerton/errors.hpp"
#include "inerton/lattice_model.hpp"

namespace inerton {

using Complex = std::complex<double>;

/// Arithmetic needed by the integrator, for scalar modes (one branch per k)
/// and vector modes (full polarisation space per k).
template <class Vec>
struct ModeAlgebra;

template <>
struct ModeAlgebra<Complex> {
  using Matrix = double;
  using Real = double;

  static Complex apply(double m, const Complex& x) { return m * x; }
  static Complex apply_transposed(double m, const Complex& x) { return m * x; }
  static Complex lift(double r) { return {r, 0.0}; }
  static double squared_norm(const Complex& x) { return std::norm(x); }
  static double norm(const Complex& x) { return std::abs(x); }
  static double quadratic(double m, const Complex& x) { return m * std::norm(x); }
  static Complex zero_like(const Complex&) { return {}; }
  /// Largest eigenvalue of V~ + tau~ tau~^T.
  static double max_stiffness(double v, double tau) { return v + tau * tau; }
  static double max_abs(double m) { return std::abs(m); }
  static Complex conj(const Complex& x) { return std::conj(x); }
};

template <>
struct ModeAlgebra<Eigen::VectorXcd> {
  using Matrix = Eigen::MatrixXd;
  using Real = Eigen::VectorXd;

  static Eigen::VectorXcd apply(const Matrix& m, const Eigen::VectorXcd& x) {
    return m.cast<Complex>() * x;
  }
  static Eigen::VectorXcd apply_transposed(const Matrix& m, const Eigen::VectorXcd& x) {
    return m.transpose().cast<Complex>() * x;
  }
  static Eigen::VectorXcd lift(const Real& r) { return r.cast<Complex>(); }
  static double squared_norm(const Eigen::VectorXcd& x) { return x.squaredNorm(); }
  static double norm(const Eigen::VectorXcd& x) { return x.norm(); }
  static double quadratic(const Matrix& m, const Eigen::VectorXcd& x) {
    return (x.adjoint() * m.cast<Complex>() * x)(0, 0).real();
  }
  static Eigen::VectorXcd zero_like(const Eigen::VectorXcd& x) {
    return Eigen::VectorXcd::Zero(x.size());
  }
  static double max_stiffness(const Matrix& v, const Matrix& tau) {
    const Matrix w = v + tau * tau.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (w + w.transpose()), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().maxCoeff();
  }
  static double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }
  static Eigen::VectorXcd conj(const Eigen::VectorXcd& x) { return x.conjugate(); }
};

template <class Vec>
struct BasicModeCoordinates {
  Vec A{};
  Vec A_dot{};
  Vec a{};
  Vec a_dot{};
};

template <class Vec>
struct BasicModeState {
  double t = 0.0;
  std::vector<BasicModeCoordinates<Vec>> modes;
};

template <class Vec>
struct BasicModeCoefficients {
  typename ModeAlgebra<Vec>::Matrix v_tilde{};    // s^-2
  typename ModeAlgebra<Vec>::Matrix tau_tilde{};  // s^-1
};

template <class Vec>
struct BasicModeDrive {
  typename ModeAlgebra<Vec>::Real cloud_force{};  // f, acts on the cloud as f cos(w t)
  typename ModeAlgebra<Vec>::Real atom_force{};   // g, acts on the atom as g sin(w t)
  double omega = 0.0;                             // rad/s
};

using ModeCoordinates = BasicModeCoordinates<Complex>;
using ModeState = BasicModeState<Complex>;
using ModeCoefficients = BasicModeCoefficients<Complex>;
using ModeDrive = BasicModeDrive<Complex>;

using VectorModeCoordinates = BasicModeCoordinates<Eigen::VectorXcd>;
using VectorModeState = BasicModeState<Eigen::VectorXcd>;
using VectorModeCoefficients = BasicModeCoefficients<Eigen::VectorXcd>;
using VectorModeDrive = BasicModeDrive<Eigen::VectorXcd>;

/// Per-mode drive; an empty list means the free system.
template <class Vec>
using BasicDriveSpec = std::vector<BasicModeDrive<Vec>>;
using DriveSpec = BasicDriveSpec<Complex>;

struct DampingSpec {
  double eta = 0.0;  // s^-1, acts on A only
};

/// Uniform cosine drive of strength f at frequency w on every mode.
inline DriveSpec uniform_drive(std::size_t n_modes, double force, double omega) {
  DriveSpec drive(n_modes);
  for (auto& d : drive) {
    d.cloud_force = force;
    d.omega = omega;
  }
  return drive;
}

namespace detail {

template <class Vec>
void check_drive(const BasicDriveSpec<Vec>& drive, std::size_t n_modes) {
  if (!drive.empty() && drive.size() != n_modes) {
    throw Error(ErrorCode::InvalidParameter, "drive list does not match the mode count");
  }
  for (const auto& d : drive) {
    if (!(d.omega > 0.0) &&
        (ModeAlgebra<Vec>::norm(ModeAlgebra<Vec>::lift(d.cloud_force)) > 0.0 ||
         ModeAlgebra<Vec>::norm(ModeAlgebra<Vec>::lift(d.atom_force)) > 0.0)) {
      throw Error(ErrorCode::InvalidParameter, "drive frequency must be positive");
    }
  }
}

inline void check_damping(const DampingSpec& damping) {
  if (!(damping.eta >= 0.0)) throw Error(ErrorCode::InvalidParameter, "eta must be >= 0");
}

}  // namespace detail

/// Time derivative of every mode: (A, A', a, a') -> (A', A'', a', a'').
template <class Vec>
BasicModeState<Vec> derivatives(const BasicModeState<Vec>& state,
                                const std::vector<BasicModeCoefficients<Vec>>& coefficients,
                                const BasicDriveSpec<Vec>& drive = {},
                                const DampingSpec& damping = {}) {
  using Alg = ModeAlgebra<Vec>;
  if (coefficients.size() != state.modes.size()) {
    throw Error(ErrorCode::InvalidParameter, "coefficient list does not match the mode count");
  }
  detail::check_drive(drive, state.modes.size());
  detail::check_damping(damping);

  BasicModeState<Vec> out;
  out.t = 1.0;
  out.modes.resize(state.modes.size());
  for (std::size_t i = 0; i < state.modes.size(); ++i) {
    const auto& s = state.modes[i];
    const auto& c = coefficients[i];
    auto& o = out.modes[i];
    o.A = s.A_dot;
    o.a = s.a_dot;
    o.A_dot = -Alg::apply(c.v_tilde, s.A) - Alg::apply(c.tau_tilde, s.a_dot) - damping.eta * s.A_dot;
    o.a_dot = Alg::apply_transposed(c.tau_tilde, s.A_dot);
    if (!drive.empty()) {
      const auto& d = drive[i];
      o.a_dot += Alg::lift(d.cloud_force) * std::cos(d.omega * state.t);
      o.A_dot += Alg::lift(d.atom_force) * std::sin(d.omega * state.t);
    }
  }
  return out;
}

template <class Vec>
double mode_energy(const BasicModeCoordinates<Vec>& m, const BasicModeCoefficients<Vec>& c) {
  using Alg = ModeAlgebra<Vec>;
  return 0.5 * Alg::squared_norm(m.A_dot) + 0.5 * Alg::squared_norm(m.a_dot) +
         0.5 * Alg::quadratic(c.v_tilde, m.A);
}

/// P = a' - tau~^T A.
template <class Vec>
Vec cloud_momentum(const BasicModeCoordinates<Vec>& m, const BasicModeCoefficients<Vec>& c) {
  return m.a_dot - ModeAlgebra<Vec>::apply_transposed(c.tau_tilde, m.A);
}

/// Initial cloud at rest relative to the atoms: a = 0, a' = tau~^T A, which
/// makes the cloud momentum (and the constant of the integrated atom
/// equation) zero.
template <class Vec>
BasicModeCoordinates<Vec> quiescent_cloud(const Vec& A, const Vec& A_dot,
                                          const BasicModeCoefficients<Vec>& c) {
  BasicModeCoordinates<Vec> m;
  m.A = A;
  m.A_dot = A_dot;
  m.a = ModeAlgebra<Vec>::zero_like(A);
  m.a_dot = ModeAlgebra<Vec>::apply_transposed(c.tau_tilde, A);
  return m;
}

struct IntegrationOptions {
  double t_end = 0.0;            // s
  double dt = 0.0;               // s, upper bound on the step
  std::size_t sample_stride = 1; // record every n-th step (the final step is always kept)
};

inline constexpr double kStabilityGuard = 0.1;

template <class Vec>
struct BasicTrajectoryRecord {
  std::vector<double> times;
  std::vector<BasicModeState<Vec>> snapshots;
  std::vector<std::vector<double>> energy;  // [sample][mode]
  std::vector<std::vector<Vec>> momentum;   // [sample][mode]
  /// max over steps and modes of |E - E0| / E0 (modes with E0 = 0 skipped).
  double max_energy_drift = 0.0;
  /// max over modes of max_t |P - P0| / max_t (|a'| + |tau~^T A|).
  double max_momentum_drift = 0.0;
  std::size_t steps = 0;
  double dt = 0.0;  // step actually used
};

using TrajectoryRecord = BasicTrajectoryRecord<Complex>;
using VectorTrajectoryRecord = BasicTrajectoryRecord<Eigen::VectorXcd>;

namespace detail {

// Triple-jump weights for a fourth-order symmetric composition.
inline const double kTripleJumpOuter = 1.0 / (2.0 - std::cbrt(2.0));
inline const double kTripleJumpInner = 1.0 - 2.0 * kTripleJumpOuter;

template <class Vec>
struct CanonicalMode {
  Vec A, p_A, a, p_a;
  double t = 0.0;
};

template <class Vec>
class SplittingStepper {
  using Alg = ModeAlgebra<Vec>;

 public:
  SplittingStepper(const BasicModeCoefficients<Vec>& c, const BasicModeDrive<Vec>* drive,
                   double eta)
      : c_(c), drive_(drive), eta_(eta) {
    if (drive_) {
      f_ = Alg::lift(drive_->cloud_force);
      g_ = Alg::lift(drive_->atom_force);
    }
  }

  void step(CanonicalMode<Vec>& s, double h) const {
    strang(s, kTripleJumpOuter * h);
    strang(s, kTripleJumpInner * h);
    strang(s, kTripleJumpOuter * h);
  }

 private:
  void strang(CanonicalMode<Vec>& s, double h) const {
    const double half = 0.5 * h;
    damp(s, half);
    drive(s, half);
    kick(s, half);
    s.A += h * s.p_A;
    s.t += h;
    kick(s, half);
    drive(s, half);
    damp(s, half);
  }

  void damp(CanonicalMode<Vec>& s, double h) const {
    if (eta_ > 0.0) s.p_A *= std::exp(-eta_ * h);
  }

  void drive(CanonicalMode<Vec>& s, double h) const {
    if (drive_) s.p_a += (h * std::cos(drive_->omega * s.t)) * f_;
  }

  void kick(CanonicalMode<Vec>& s, double h) const {
    const Vec cloud_velocity = s.p_a + Alg::apply_transposed(c_.tau_tilde, s.A);
    Vec force = -Alg::apply(c_.v_tilde, s.A) - Alg::apply(c_.tau_tilde, cloud_velocity);
    if (drive_) force += std::sin(drive_->omega * s.t) * g_;
    s.p_A += h * force;
    s.a += h * cloud_velocity;
  }

  const BasicModeCoefficients<Vec>& c_;
  const BasicModeDrive<Vec>* drive_;
  double eta_;
  Vec f_{}, g_{};
};

}  // namespace detail

/// Largest of Omega, the drive frequency and |tau~| over all modes; dt times
/// this must stay below 0.1.
template <class Vec>
double fastest_rate(const std::vector<BasicModeCoefficients<Vec>>& coefficients,
                    const BasicDriveSpec<Vec>& drive) {
  using Alg = ModeAlgebra<Vec>;
  double rate = 0.0;
  for (const auto& c : coefficients) {
    rate = std::max(rate, std::sqrt(std::max(Alg::max_stiffness(c.v_tilde, c.tau_tilde), 0.0)));
    rate = std::max(rate, Alg::max_abs(c.tau_tilde));
  }
  for (const auto& d : drive) rate = std::max(rate, d.omega);
  return rate;
}

template <class Vec>
BasicTrajectoryRecord<Vec> integrate(const BasicModeState<Vec>& initial,
                                     const std::vector<BasicModeCoefficients<Vec>>& coefficients,
                                     const BasicDriveSpec<Vec>& drive,
                                     const DampingSpec& damping,
                                     const IntegrationOptions& options) {
  using Alg = ModeAlgebra<Vec>;
  const std::size_t n_modes = initial.modes.size();
  if (coefficients.size() != n_modes) {
    throw Error(ErrorCode::InvalidParameter, "coefficient list does not match the mode count");
  }
  detail::check_drive(drive, n_modes);
  detail::check_damping(damping);
  detail::require_positive(options.dt, "dt");
  detail::require_positive(options.t_end, "t_end");
  if (options.sample_stride == 0) {
    throw Error(ErrorCode::InvalidParameter, "sample stride must be >= 1");
  }
  const double rate = fastest_rate(coefficients, drive);
  if (options.dt * rate >= kStabilityGuard) {
    throw Error(ErrorCode::StepSize, "dt * max(Omega, omega, tau) = " +
                                         std::to_string(options.dt * rate) + " must be < 0.1");
  }

  const auto steps = static_cast<std::size_t>(std::ceil(options.t_end / options.dt - 1e-9));
  const double h = options.t_end / static_cast<double>(steps);

  std::vector<std::size_t> sample_steps;
  for (std::size_t n = 0; n <= steps; n += options.sample_stride) sample_steps.push_back(n);
  if (sample_steps.back() != steps) sample_steps.push_back(steps);

  BasicTrajectoryRecord<Vec> record;
  record.steps = steps;
  record.dt = h;
  record.times.resize(sample_steps.size());
  record.snapshots.resize(sample_steps.size());
  record.energy.assign(sample_steps.size(), std::vector<double>(n_modes));
  record.momentum.resize(sample_steps.size());
  for (std::size_t k = 0; k < sample_steps.size(); ++k) {
    record.times[k] = initial.t + static_cast<double>(sample_steps[k]) * h;
    record.snapshots[k].t = record.times[k];
    record.snapshots[k].modes.resize(n_modes);
    record.momentum[k].resize(n_modes);
  }

  // Modes are independent; each is advanced through the whole run.
  for (std::size_t i = 0; i < n_modes; ++i) {
    const auto& c = coefficients[i];
    const detail::SplittingStepper<Vec> stepper(c, drive.empty() ? nullptr : &drive[i],
                                                damping.eta);
    const auto& m0 = initial.modes[i];
    detail::CanonicalMode<Vec> s{m0.A, m0.A_dot, m0.a, cloud_momentum(m0, c), initial.t};

    auto coordinates = [&]() {
      BasicModeCoordinates<Vec> m;
      m.A = s.A;
      m.A_dot = s.p_A;
      m.a = s.a;
      m.a_dot = s.p_a + Alg::apply_transposed(c.tau_tilde, s.A);
      return m;
    };

    const double e0 = mode_energy(m0, c);
    const Vec p0 = cloud_momentum(m0, c);
    double momentum_error = 0.0;
    double momentum_scale = 0.0;
    std::size_t next_sample = 0;

    for (std::size_t n = 0;; ++n) {
      const auto m = coordinates();
      const double e = mode_energy(m, c);
      const Vec p = cloud_momentum(m, c);
      if (e0 > 0.0) record.max_energy_drift = std::max(record.max_energy_drift, std::abs(e - e0) / e0);
      momentum_error = std::max(momentum_error, Alg::norm(p - p0));
      momentum_scale = std::max(momentum_scale,
                                Alg::norm(m.a_dot) + Alg::norm(Alg::apply_transposed(c.tau_tilde, m.A)));
      if (next_sample < sample_steps.size() && sample_steps[next_sample] == n) {
        record.snapshots[next_sample].modes[i] = m;
        record.energy[next_sample][i] = e;
        record.momentum[next_sample][i] = p;
        ++next_sample;
      }
      if (n == steps) break;
      stepper.step(s, h);
    }
    if (momentum_scale > 0.0) {
      record.max_momentum_drift = std::max(record.max_momentum_drift, momentum_error / momentum_scale);
    }
  }
  return record;
}

/// Reduced strong-drive model: the cloud follows the drive alone, so the atom
/// sees A'' + V~ A = -(tau~ f / w) sin(w t) and no cloud back-reaction.
template <class Vec>
std::pair<std::vector<BasicModeCoefficients<Vec>>, BasicDriveSpec<Vec>> reduced_drive_system(
    const std::vector<BasicModeCoefficients<Vec>>& coefficients, const BasicDriveSpec<Vec>& drive) {
  if (drive.size() != coefficients.size()) {
    throw Error(ErrorCode::InvalidParameter, "reduced model needs one drive per mode");
  }
  std::vector<BasicModeCoefficients<Vec>> reduced = coefficients;
  BasicDriveSpec<Vec> reduced_drive(drive.size());
  for (std::size_t i = 0; i < drive.size(); ++i) {
    detail::require_positive(drive[i].omega, "drive frequency");
    reduced[i].tau_tilde = coefficients[i].tau_tilde * 0.0;
    reduced_drive[i].omega = drive[i].omega;
    reduced_drive[i].cloud_force = drive[i].cloud_force * 0.0;
    reduced_drive[i].atom_force = -(coefficients[i].tau_tilde * drive[i].cloud_force) / drive[i].omega;
  }
  return {reduced, reduced_drive};
}

// ---------------------------------------------------------------------------
// Mode systems built from a lattice model.

struct ModeLabel {
  std::size_t k_index = 0;
  int branch = 0;
};

struct ModeSystem {
  std::vector<ModeCoefficients> coefficients;
  std::vector<ModeLabel> labels;
  std::vector<Eigen::VectorXd> polarizations;
};

/// One scalar mode per (k, branch). Requires isotropic coupling so that the
/// branches of V~ decouple.
inline ModeSystem scalar_mode_system(const Model& model, const KGrid& grid) {
  ModeSystem system;
  for (const auto& point : grid) {
    const FourierMatrices fm = fourier_matrices(model, point.k);
    const auto t = isotropic_value(fm.tau_tilde_inv);
    if (!t) {
      throw Error(ErrorCode::InvalidParameter,
                  describe(point) + ": scalar modes need isotropic coupling");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        0.5 * (fm.V_tilde + fm.V_tilde.transpose()));
    for (Eigen::Index s = 0; s < fm.V_tilde.rows(); ++s) {
      system.coefficients.push_back({solver.eigenvalues()(s), *t});
      system.labels.push_back({point.flat, static_cast<int>(s)});
      system.polarizations.push_back(solver.eigenvectors().col(s));
    }
  }
  return system;
}

/// Full-matrix coefficients per k (advanced mode, any coupling).
inline std::vector<VectorModeCoefficients> matrix_mode_system(const Model& model,
                                                              const KGrid& grid) {
  std::vector<VectorModeCoefficients> out;
  out.reserve(grid.size());
  for (const auto& point : grid) {
    const FourierMatrices fm = fourier_matrices(model, point.k);
    out.push_back({fm.V_tilde, fm.tau_tilde_inv});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Steady state under a harmonic drive.

inline constexpr double kResonanceTolerance = 1e-12;

/// Atom amplitude for a mode of frequency Omega under a cloud drive f cos(w t).
/// eta = 0: f (tau/w) / (Omega^2 - w^2), signed.
/// eta > 0: f (tau/w) / sqrt((Omega^2 - w^2)^2 + eta^2 w^2), a magnitude.
inline double steady_state_amplitude(double omega_mode, double tau, double force, double omega,
                                     double eta = 0.0) {
  detail::require_positive(omega, "drive frequency");
  if (!(eta >= 0.0)) throw Error(ErrorCode::InvalidParameter, "eta must be >= 0");
  if (!(omega_mode >= 0.0)) throw Error(ErrorCode::InvalidParameter, "mode frequency must be >= 0");
  const double detuning = omega_mode * omega_mode - omega * omega;
  const double numerator = force * tau / omega;
  if (eta == 0.0) {
    if (std::abs(detuning) <= kResonanceTolerance * std::max(omega_mode * omega_mode, omega * omega)) {
      throw Error(ErrorCode::ExactResonance, "drive frequency equals the mode frequency with eta = 0");
    }
    return numerator / detuning;
  }
  return std::abs(numerator) / std::sqrt(detuning * detuning + eta * eta * omega * omega);
}

struct DriveParameters {
  double force = 0.0;
  double omega = 0.0;
};

/// Mode frequency and scalar coupling of `branch` at wavevector k.
inline std::pair<double, double> mode_frequency_and_coupling(const Model& model,
                                                             const WaveVector& k, int branch = 0) {
  const FourierMatrices fm = fourier_matrices(model, k);
  const auto t = isotropic_value(fm.tau_tilde_inv);
  if (!t) throw Error(ErrorCode::InvalidParameter, "steady state needs isotropic coupling");
  const Branches b = branch_frequencies(effective_matrix(fm));
  if (branch < 0 || branch >= b.omegas.size()) {
    throw Error(ErrorCode::InvalidParameter, "branch out of range");
  }
  return {b.omegas(branch), *t};
}

inline double steady_state_amplitude(const Model& model, const WaveVector& k,
                                     const DriveParameters& drive, const DampingSpec& damping,
                                     int branch = 0) {
  const auto [omega_mode, tau] = mode_frequency_and_coupling(model, k, branch);
  return steady_state_amplitude(omega_mode, tau, drive.force, drive.omega, damping.eta);
}

struct OmegaRange {
  double min = 0.0;
  double max = 0.0;
  std::size_t steps = 0;  // number of samples, endpoints included
};

struct ResonancePoint {
  double omega = 0.0;
  double amplitude = 0.0;
};

struct ResonanceCurve {
  std::vector<ResonancePoint> points;
  std::size_t peak_index = 0;
  double peak_omega() const { return points.at(peak_index).omega; }
  double grid_step() const {
    return points.size() > 1 ? points[1].omega - points[0].omega : 0.0;
  }
};

/// |A0(w)| on a uniform grid of drive frequencies; requires eta > 0.
inline ResonanceCurve resonance_sweep(double omega_mode, double tau, double force,
                                      const OmegaRange& range, const DampingSpec& damping) {
  if (!(damping.eta > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "resonance sweep needs eta > 0");
  }
  detail::require_positive(range.min, "omega_min");
  if (!(range.max > range.min)) throw Error(ErrorCode::InvalidParameter, "omega_max <= omega_min");
  if (range.steps < 2) throw Error(ErrorCode::InvalidParameter, "omega_steps must be >= 2");

  ResonanceCurve curve;
  curve.points.resize(range.steps);
  const double step = (range.max - range.min) / static_cast<double>(range.steps - 1);
  for (std::size_t i = 0; i < range.steps; ++i) {
    const double w = i + 1 == range.steps ? range.max : range.min + step * static_cast<double>(i);
    curve.points[i] = {w, steady_state_amplitude(omega_mode, tau, force, w, damping.eta)};
    if (curve.points[i].amplitude > curve.points[curve.peak_index].amplitude) curve.peak_index = i;
  }
  return curve;
}

inline ResonanceCurve resonance_sweep(const Model& model, const WaveVector& k, double force,
                                      const OmegaRange& range, const DampingSpec& damping,
                                      int branch = 0) {
  const auto [omega_mode, tau] = mode_frequency_and_coupling(model, k, branch);
  return resonance_sweep(omega_mode, tau, force, range, damping);
}

// ---------------------------------------------------------------------------
// Real space <-> collective coordinates, one Cartesian component at a time.

using Site = Offset;

struct AmplitudeEntry {
  Offset index{0, 0, 0};  // grid integers j_a
  Complex amplitude;
};

inline constexpr double kRealityTolerance = 1e-10;

namespace detail {

inline double site_phase(const LatticeSpec& spec, const Offset& index, const Site& site) {
  double s = 0.0;
  for (int a = 0; a < spec.dimension; ++a) {
    s += 2.0 * kPi * static_cast<double>(index[a]) * site[a] / spec.n_sites[a];
  }
  return s;
}

inline Offset canonical_index(const LatticeSpec& spec, const Offset& j) {
  Offset out{0, 0, 0};
  for (int a = 0; a < spec.dimension; ++a) out[a] = wrap_grid_index(j[a], spec.n_sites[a]);
  return out;
}

}  // namespace detail

/// Sites of the periodic box in row-major order (last axis fastest).
inline std::vector<Site> lattice_sites(const LatticeSpec& spec) {
  check_lattice_spec(spec);
  std::vector<Site> sites;
  Offset n{1, 1, 1};
  for (int a = 0; a < spec.dimension; ++a) n[a] = spec.n_sites[a];
  for (int i0 = 0; i0 < n[0]; ++i0)
    for (int i1 = 0; i1 < n[1]; ++i1)
      for (int i2 = 0; i2 < n[2]; ++i2) sites.push_back({i0, i1, i2});
  return sites;
}

/// A_k = sqrt(M/N) sum_n xi_n e^{-i k.n}; inverse of real_space_displacement
/// over the lattice's own k-grid. `field` is ordered like lattice_sites().
inline std::vector<AmplitudeEntry> collective_amplitudes(const std::vector<double>& field,
                                                         const LatticeSpec& spec) {
  const auto sites = lattice_sites(spec);
  if (field.size() != sites.size()) {
    throw Error(ErrorCode::InvalidParameter, "field size does not match the lattice");
  }
  const KGrid grid = make_k_grid(spec);
  const double norm = std::sqrt(spec.atom_mass() / static_cast<double>(sites.size()));
  std::vector<AmplitudeEntry> out;
  out.reserve(grid.size());
  for (const auto& point : grid) {
    Complex sum{};
    for (std::size_t n = 0; n < sites.size(); ++n) {
      sum += field[n] * std::polar(1.0, -detail::site_phase(spec, point.index, sites[n]));
    }
    out.push_back({point.index, norm * sum});
  }
  return out;
}

/// xi_n = (1/sqrt(N M)) sum_k A_k e^{i k.n}. The list must pair every k with
/// -k carrying the conjugate amplitude.
inline double real_space_displacement(const std::vector<AmplitudeEntry>& amplitudes,
                                      const LatticeSpec& spec, const Site& site) {
  check_lattice_spec(spec);
  std::map<Offset, Complex> by_index;
  double max_amplitude = 0.0;
  for (const auto& e : amplitudes) {
    by_index[detail::canonical_index(spec, e.index)] += e.amplitude;
    max_amplitude = std::max(max_amplitude, std::abs(e.amplitude));
  }
  for (const auto& [j, amp] : by_index) {
    const auto partner = by_index.find(detail::canonical_index(spec, -j));
    const Complex expected = std::conj(amp);
    if (partner == by_index.end()
            ? std::abs(amp) > kRealityTolerance * max_amplitude
            : std::abs(partner->second - expected) > kRealityTolerance * max_amplitude) {
      throw Error(ErrorCode::RealityViolation,
                  "amplitude at k index " + to_string(j, spec.dimension) +
                      " has no conjugate partner at -k");
    }
  }

  const double norm = 1.0 / std::sqrt(static_cast<double>(spec.total_sites()) * spec.atom_mass());
  Complex sum{};
  double scale = 0.0;
  for (const auto& [j, amp] : by_index) {
    sum += amp * std::polar(1.0, detail::site_phase(spec, j, site));
    scale += std::abs(amp);
  }
  if (std::abs(sum.imag()) > kRealityTolerance * scale) {
    throw Error(ErrorCode::RealityViolation, "displacement has an imaginary part");
  }
  return norm * sum.real();
}

/// Largest |A_k - conj(A_-k)| (and likewise for a) over the state's modes,
/// relative to the largest amplitude. `labels` pair each mode with its k.
inline double reality_residual(const ModeState& state, const std::vector<ModeLabel>& labels,
                               const KGrid& grid, const LatticeSpec& spec) {
  std::map<std::pair<Offset, int>, const ModeCoordinates*> lookup;
  double scale = 0.0;
  for (std::size_t i = 0; i < state.modes.size(); ++i) {
    lookup[{grid.at(labels[i].k_index).index, labels[i].branch}] = &state.modes[i];
    scale = std::max({scale, std::abs(state.modes[i].A), std::abs(state.modes[i].a)});
  }
  double worst = 0.0;
  for (const auto& [key, mode] : lookup) {
    const auto it = lookup.find({detail::canonical_index(spec, -key.first), key.second});
    if (it == lookup.end()) return std::numeric_limits<double>::infinity();
    worst = std::max({worst, std::abs(mode->A - std::conj(it->second->A)),
                      std::abs(mode->a - std::conj(it->second->a))});
  }
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace inerton
