#pragma once

// Real-space model of the crystal: a periodic simple-cubic Bravais lattice
// (1, 2 or 3 dimensions) with elastic force constants V(l) and the
// atom/cloud coupling rates tau^{-1}(l), both keyed by integer lattice offset.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "inerton/constants.hpp"
#include "inerton/errors.hpp"

namespace inerton {

inline constexpr int kMaxDimension = 3;

/// Integer lattice offset in units of the lattice constant. Components past
/// the model dimension are zero.
using Offset = std::array<int, kMaxDimension>;

inline Offset operator-(const Offset& l) { return {-l[0], -l[1], -l[2]}; }

inline std::string to_string(const Offset& l, int dimension) {
  std::ostringstream os;
  os << '(';
  for (int a = 0; a < dimension; ++a) os << (a ? "," : "") << l[a];
  os << ')';
  return os.str();
}

struct LatticeSpec {
  int dimension = 1;
  Offset n_sites{2, 1, 1};
  double g0 = 4e-10;              // m
  double mass_in_mp = 30.0;       // M / M_p
  double cloud_mass_ratio = 1e-3; // m / M
  PhysicalConstants constants{};

  double atom_mass() const { return mass_in_mp * constants.M_p; }
  double cloud_mass() const { return cloud_mass_ratio * atom_mass(); }

  int total_sites() const {
    int n = 1;
    for (int a = 0; a < dimension; ++a) n *= n_sites[a];
    return n;
  }
};

/// Throws InvalidParameter unless the geometry and masses are admissible.
inline void check_lattice_spec(const LatticeSpec& spec) {
  if (spec.dimension < 1 || spec.dimension > kMaxDimension) {
    throw Error(ErrorCode::InvalidParameter,
                "dimension must be 1, 2 or 3, got " + std::to_string(spec.dimension));
  }
  for (int a = 0; a < spec.dimension; ++a) {
    if (spec.n_sites[a] < 2) {
      throw Error(ErrorCode::InvalidParameter, "n_sites must be >= 2 on every axis");
    }
  }
  detail::require_positive(spec.g0, "g0");
  detail::require_positive(spec.mass_in_mp, "atom mass");
  detail::require_positive(spec.cloud_mass_ratio, "cloud mass");
}

/// Real-space tensor field keyed by lattice offset; shared representation for
/// elastic constants (N/m) and coupling rates (1/s).
struct OffsetTensorField {
  std::map<Offset, Eigen::MatrixXd> entries;

  /// Largest |l_a| over all stored offsets.
  int cutoff() const {
    int c = 0;
    for (const auto& [l, m] : entries) {
      for (int v : l) c = std::max(c, std::abs(v));
    }
    return c;
  }

  Eigen::MatrixXd sum(int dimension) const {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dimension, dimension);
    for (const auto& [l, m] : entries) s += m;
    return s;
  }

  double abs_scale() const {
    double s = 0.0;
    for (const auto& [l, m] : entries) s += m.cwiseAbs().maxCoeff();
    return s;
  }
};

struct ForceConstants : OffsetTensorField {};

struct CouplingConstants : OffsetTensorField {
  bool isotropic_scalar = true;
};

struct Model {
  LatticeSpec lattice;
  ForceConstants force;
  CouplingConstants coupling;
};

/// Nearest-neighbour chain: V(0) = 2C, V(+-1) = -C, tau(+-1) = tau.
/// Masses are in kilograms.
inline Model build_chain_1d(int n_sites, double g0, double atom_mass, double cloud_mass,
                            double stiffness, double coupling_rate,
                            const PhysicalConstants& constants = kConstants) {
  if (n_sites < 2) {
    throw Error(ErrorCode::InvalidParameter, "n_sites must be >= 2");
  }
  detail::require_positive(g0, "g0");
  detail::require_positive(atom_mass, "atom mass");
  detail::require_positive(cloud_mass, "cloud mass");
  detail::require_positive(stiffness, "stiffness");
  if (!(coupling_rate >= 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "coupling rate must be non-negative");
  }

  Model model;
  model.lattice.dimension = 1;
  model.lattice.n_sites = {n_sites, 1, 1};
  model.lattice.g0 = g0;
  model.lattice.constants = constants;
  model.lattice.mass_in_mp = atom_mass / constants.M_p;
  model.lattice.cloud_mass_ratio = cloud_mass / atom_mass;

  auto scalar = [](double v) { return Eigen::MatrixXd::Constant(1, 1, v); };
  model.force.entries[{0, 0, 0}] = scalar(2.0 * stiffness);
  model.force.entries[{1, 0, 0}] = scalar(-stiffness);
  model.force.entries[{-1, 0, 0}] = scalar(-stiffness);
  model.coupling.entries[{1, 0, 0}] = scalar(coupling_rate);
  model.coupling.entries[{-1, 0, 0}] = scalar(coupling_rate);
  model.coupling.isotropic_scalar = true;
  return model;
}

/// Simple (hyper)cubic lattice with nearest-neighbour springs: longitudinal
/// stiffness along each bond and an optional transverse stiffness.
inline Model build_simple_cubic(int dimension, int n_sites, double g0, double atom_mass,
                                double cloud_mass, double longitudinal, double transverse,
                                double coupling_rate,
                                const PhysicalConstants& constants = kConstants) {
  if (dimension < 1 || dimension > kMaxDimension) {
    throw Error(ErrorCode::InvalidParameter, "dimension must be 1, 2 or 3");
  }
  if (n_sites < 2) throw Error(ErrorCode::InvalidParameter, "n_sites must be >= 2");
  detail::require_positive(g0, "g0");
  detail::require_positive(atom_mass, "atom mass");
  detail::require_positive(cloud_mass, "cloud mass");
  detail::require_positive(longitudinal, "longitudinal stiffness");
  if (!(transverse >= 0.0)) throw Error(ErrorCode::InvalidParameter, "transverse stiffness < 0");
  if (!(coupling_rate >= 0.0)) throw Error(ErrorCode::InvalidParameter, "coupling rate < 0");

  Model model;
  model.lattice.dimension = dimension;
  model.lattice.n_sites = {1, 1, 1};
  for (int a = 0; a < dimension; ++a) model.lattice.n_sites[a] = n_sites;
  model.lattice.g0 = g0;
  model.lattice.constants = constants;
  model.lattice.mass_in_mp = atom_mass / constants.M_p;
  model.lattice.cloud_mass_ratio = cloud_mass / atom_mass;

  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(dimension, dimension);
  Eigen::MatrixXd onsite = Eigen::MatrixXd::Zero(dimension, dimension);
  for (int a = 0; a < dimension; ++a) {
    Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(dimension, dimension);
    proj(a, a) = 1.0;
    const Eigen::MatrixXd bond = -(longitudinal * proj + transverse * (identity - proj));
    Offset plus{0, 0, 0};
    plus[a] = 1;
    model.force.entries[plus] = bond;
    model.force.entries[-plus] = bond;
    model.coupling.entries[plus] = coupling_rate * identity;
    model.coupling.entries[-plus] = coupling_rate * identity;
    onsite -= 2.0 * bond;
  }
  model.force.entries[{0, 0, 0}] = onsite;
  model.coupling.isotropic_scalar = true;
  return model;
}

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
  std::optional<Offset> offset;
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

namespace detail {

inline constexpr double kModelTolerance = 1e-12;

inline CheckResult check_shapes(const OffsetTensorField& field, const LatticeSpec& spec,
                                const std::string& name) {
  CheckResult r;
  r.name = name;
  for (const auto& [l, m] : field.entries) {
    bool bad_offset = false;
    for (int a = spec.dimension; a < kMaxDimension; ++a) bad_offset |= (l[a] != 0);
    if (bad_offset || m.rows() != spec.dimension || m.cols() != spec.dimension) {
      r.passed = false;
      r.offset = l;
      r.detail = "entry does not match dimension " + std::to_string(spec.dimension);
      return r;
    }
  }
  return r;
}

inline CheckResult check_inversion(const OffsetTensorField& field, int dimension,
                                   const std::string& name) {
  CheckResult r;
  r.name = name;
  const double tol = kModelTolerance * std::max(field.abs_scale(), 1e-300);
  for (const auto& [l, m] : field.entries) {
    auto it = field.entries.find(-l);
    if (it == field.entries.end()) {
      r.passed = false;
      r.offset = l;
      r.detail = "offset " + to_string(l, dimension) + " has no inverse partner";
      return r;
    }
    if (it->second.rows() != m.rows() || it->second.cols() != m.cols()) continue;
    const double diff = (m - it->second.transpose()).cwiseAbs().maxCoeff();
    if (diff > tol) {
      r.passed = false;
      r.offset = l;
      r.residual = diff;
      r.detail = "V(l) != V(-l)^T at offset " + to_string(l, dimension);
      return r;
    }
  }
  return r;
}

inline CheckResult check_cutoff(const OffsetTensorField& field, const LatticeSpec& spec,
                                const std::string& name) {
  CheckResult r;
  r.name = name;
  for (const auto& [l, m] : field.entries) {
    for (int a = 0; a < spec.dimension; ++a) {
      if (2 * std::abs(l[a]) > spec.n_sites[a]) {
        r.passed = false;
        r.offset = l;
        r.detail = "offset " + to_string(l, spec.dimension) + " exceeds half the periodic box";
        return r;
      }
    }
  }
  return r;
}

}  // namespace detail

/// Report-only consistency check of a model; never throws.
inline ValidationReport validate_model(const ForceConstants& force,
                                       const CouplingConstants& coupling,
                                       const LatticeSpec& spec) {
  ValidationReport report;

  CheckResult lattice;
  lattice.name = "lattice";
  try {
    check_lattice_spec(spec);
  } catch (const Error& e) {
    lattice.passed = false;
    lattice.detail = e.what();
  }
  report.checks.push_back(lattice);
  if (!lattice.passed) return report;

  auto force_shape = detail::check_shapes(force, spec, "force-shape");
  auto coupling_shape = detail::check_shapes(coupling, spec, "coupling-shape");
  report.checks.push_back(force_shape);
  report.checks.push_back(coupling_shape);
  if (!force_shape.passed || !coupling_shape.passed) return report;

  report.checks.push_back(detail::check_inversion(force, spec.dimension, "force-inversion-symmetry"));

  CheckResult sum_rule;
  sum_rule.name = "acoustic-sum-rule";
  if (force.entries.empty()) {
    sum_rule.passed = false;
    sum_rule.detail = "no force constants";
  } else {
    const Eigen::MatrixXd residual = force.sum(spec.dimension);
    Eigen::Index row = 0, col = 0;
    sum_rule.residual = residual.cwiseAbs().maxCoeff(&row, &col);
    if (sum_rule.residual > detail::kModelTolerance * force.abs_scale()) {
      sum_rule.passed = false;
      sum_rule.detail = "sum over offsets of V(l) is nonzero (max |residual| = " +
                        std::to_string(sum_rule.residual) + ")";
    }
  }
  report.checks.push_back(sum_rule);

  report.checks.push_back(
      detail::check_inversion(coupling, spec.dimension, "coupling-inversion-symmetry"));

  CheckResult isotropic;
  isotropic.name = "coupling-isotropic";
  if (coupling.isotropic_scalar) {
    for (const auto& [l, m] : coupling.entries) {
      const double t = m(0, 0);
      const Eigen::MatrixXd diff =
          m - t * Eigen::MatrixXd::Identity(spec.dimension, spec.dimension);
      const double r = diff.cwiseAbs().maxCoeff();
      if (r > detail::kModelTolerance * std::max(std::abs(t), 1e-300) && r > 0.0) {
        isotropic.passed = false;
        isotropic.offset = l;
        isotropic.residual = r;
        isotropic.detail = "coupling flagged isotropic but entry at " +
                           to_string(l, spec.dimension) + " is not a multiple of identity";
        break;
      }
    }
  }
  report.checks.push_back(isotropic);

  report.checks.push_back(detail::check_cutoff(force, spec, "force-cutoff"));
  report.checks.push_back(detail::check_cutoff(coupling, spec, "coupling-cutoff"));
  return report;
}

inline ValidationReport validate_model(const Model& model) {
  return validate_model(model.force, model.coupling, model.lattice);
}

}  // namespace inerton
