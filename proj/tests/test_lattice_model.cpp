#include <gtest/gtest.h>

#include "inerton/dispersion.hpp"
#include "inerton/lattice_model.hpp"

using namespace inerton;

namespace {

constexpr double kMass = 30.0 * 1.67e-27;

Model canonical_chain(int n = 8, double tau = 0.0) {
  return build_chain_1d(n, 4e-10, kMass, 1e-3 * kMass, 10.0, tau);
}

}  // namespace

TEST(BuildChain, SumRuleHoldsByConstruction) {
  const Model m = canonical_chain();
  EXPECT_EQ(m.lattice.total_sites(), 8);
  EXPECT_EQ(m.force.sum(1)(0, 0), 0.0);
  EXPECT_EQ(m.force.entries.at({0, 0, 0})(0, 0), 20.0);
  EXPECT_EQ(m.force.entries.at({1, 0, 0})(0, 0), -10.0);
  EXPECT_EQ(m.force.entries.at({-1, 0, 0})(0, 0), -10.0);
  EXPECT_FALSE(m.coupling.entries.count({0, 0, 0}));
  EXPECT_NEAR(m.lattice.atom_mass(), kMass, 1e-40);
  EXPECT_NEAR(m.lattice.cloud_mass(), 1e-3 * kMass, 1e-42);
  EXPECT_TRUE(validate_model(m).ok());
}

TEST(BuildChain, MinimalChain) {
  const Model m = build_chain_1d(2, 4e-10, kMass, 1e-3 * kMass, 1.0, 1.0);
  EXPECT_EQ(m.lattice.total_sites(), 2);
  EXPECT_TRUE(validate_model(m).ok());
}

TEST(BuildChain, RejectsBadParameters) {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  EXPECT_EQ(code_of([] { canonical_chain(1); }), ErrorCode::InvalidParameter);
  EXPECT_EQ(code_of([] { build_chain_1d(8, 4e-10, kMass, 1e-3 * kMass, -1.0, 0.0); }),
            ErrorCode::InvalidParameter);
  EXPECT_EQ(code_of([] { build_chain_1d(8, 0.0, kMass, 1e-3 * kMass, 1.0, 0.0); }),
            ErrorCode::InvalidParameter);
  EXPECT_EQ(code_of([] { build_chain_1d(8, 4e-10, kMass, 0.0, 1.0, 0.0); }),
            ErrorCode::InvalidParameter);
  EXPECT_EQ(code_of([] { build_chain_1d(8, 4e-10, kMass, kMass, 1.0, -1.0); }),
            ErrorCode::InvalidParameter);
}

TEST(ValidateModel, ReportsSumRuleResidual) {
  Model m = canonical_chain();
  m.force.entries[{0, 0, 0}](0, 0) += 1.0;
  const auto report = validate_model(m);
  EXPECT_FALSE(report.ok());
  const auto* check = report.find("acoustic-sum-rule");
  ASSERT_NE(check, nullptr);
  EXPECT_FALSE(check->passed);
  EXPECT_DOUBLE_EQ(check->residual, 1.0);
  EXPECT_TRUE(report.find("force-inversion-symmetry")->passed);
}

TEST(ValidateModel, ReportsInversionAsymmetryWithOffset) {
  Model m = canonical_chain();
  m.force.entries[{1, 0, 0}](0, 0) = -9.0;
  m.force.entries[{0, 0, 0}](0, 0) = 19.0;  // keep the sum rule intact
  const auto report = validate_model(m);
  const auto* check = report.find("force-inversion-symmetry");
  ASSERT_NE(check, nullptr);
  EXPECT_FALSE(check->passed);
  ASSERT_TRUE(check->offset.has_value());
  EXPECT_EQ(std::abs((*check->offset)[0]), 1);
  EXPECT_TRUE(report.find("acoustic-sum-rule")->passed);
}

TEST(ValidateModel, MissingPartnerAndCutoff) {
  Model m = canonical_chain(4);
  m.force.entries[{3, 0, 0}] = Eigen::MatrixXd::Constant(1, 1, 0.0);
  const auto report = validate_model(m);
  EXPECT_FALSE(report.find("force-inversion-symmetry")->passed);
  EXPECT_FALSE(report.find("force-cutoff")->passed);
  EXPECT_EQ((*report.find("force-cutoff")->offset)[0], 3);
}

TEST(ValidateModel, IsotropicFlagMustMatchEntries) {
  Model m = build_simple_cubic(3, 4, 4e-10, kMass, 1e-3 * kMass, 10.0, 4.0, 1e12);
  EXPECT_TRUE(validate_model(m).ok());
  m.coupling.entries[{1, 0, 0}](0, 1) = 5.0;
  m.coupling.entries[{-1, 0, 0}](1, 0) = 5.0;
  const auto report = validate_model(m);
  EXPECT_FALSE(report.find("coupling-isotropic")->passed);
  EXPECT_TRUE(report.find("coupling-inversion-symmetry")->passed);
}

TEST(ValidateModel, BadLatticeIsReportedNotThrown) {
  Model m = canonical_chain();
  m.lattice.g0 = -1.0;
  ValidationReport report;
  EXPECT_NO_THROW(report = validate_model(m));
  EXPECT_FALSE(report.ok());
  EXPECT_FALSE(report.find("lattice")->passed);
}

TEST(ValidateModel, ShapeMismatch) {
  Model m = canonical_chain();
  m.force.entries[{0, 0, 0}] = Eigen::MatrixXd::Zero(2, 2);
  EXPECT_FALSE(validate_model(m).find("force-shape")->passed);
}

// Any model passing validation yields a real-symmetric V~(k) on its grid.
TEST(ValidateModel, ValidModelsGiveSymmetricFourierMatrices) {
  for (int dim = 1; dim <= 3; ++dim) {
    for (double transverse : {0.0, 3.0}) {
      const Model m = build_simple_cubic(dim, 4, 4e-10, kMass, 1e-3 * kMass, 10.0, transverse, 0.0);
      ASSERT_TRUE(validate_model(m).ok());
      for (const auto& p : make_k_grid(m.lattice)) {
        const Eigen::MatrixXd v = fourier_force(m.force, m.lattice, p.k);
        EXPECT_LE((v - v.transpose()).norm(), 1e-12 * std::max(v.norm(), 1e-300));
      }
    }
  }
}

TEST(ValidateModel, SumRuleGivesZeroFrequencyAtZoneCentre) {
  for (int dim = 1; dim <= 3; ++dim) {
    const Model m = build_simple_cubic(dim, 6, 4e-10, kMass, 1e-3 * kMass, 10.0, 2.5, 0.0);
    const auto table = dispersion_sweep(m, make_k_grid(m.lattice));
    double max_omega = 0.0;
    for (const auto& r : table) max_omega = std::max(max_omega, r.omegas.maxCoeff());
    for (const auto& r : table) {
      if (r.at.k.norm() == 0.0) {
        EXPECT_LE(r.omegas.maxCoeff(), 1e-8 * max_omega);
      }
    }
  }
}
