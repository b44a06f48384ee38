#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "inerton/model_io.hpp"

using namespace inerton;

namespace {

const char* kChain = R"(# canonical chain
[lattice]
dimension = 1
n_sites = 8
g0 = 4e-10
M_over_Mp = 30
m_over_M = 0.001

[force_constants]
offset = 0 : 20
offset = 1 : -10
offset = -1 : -10

[coupling_constants]
isotropic_scalar = true
offset = 1 : 2.5e12
offset = -1 : 2.5e12
)";

Model parse(const std::string& text) {
  std::istringstream in(text);
  return read_model(in);
}

ErrorCode parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

}  // namespace

TEST(ModelIo, ReadsChain) {
  const Model m = parse(kChain);
  EXPECT_EQ(m.lattice.dimension, 1);
  EXPECT_EQ(m.lattice.n_sites[0], 8);
  EXPECT_EQ(m.lattice.g0, 4e-10);
  EXPECT_EQ(m.lattice.mass_in_mp, 30.0);
  EXPECT_EQ(m.lattice.cloud_mass_ratio, 0.001);
  EXPECT_EQ(m.force.entries.size(), 3u);
  EXPECT_EQ(m.coupling.entries.at({-1, 0, 0})(0, 0), 2.5e12);
  EXPECT_TRUE(m.coupling.isotropic_scalar);
  EXPECT_TRUE(validate_model(m).ok());
}

TEST(ModelIo, WriterOutputReparsesToIdenticalText) {
  const Model m = parse(kChain);
  const std::string once = model_to_string(m);
  const std::string twice = model_to_string(parse(once));
  EXPECT_EQ(once, twice);
}

// Randomised round trip over 1D to 3D models with arbitrary decimal entries.
TEST(ModelIo, RoundTripIsExactForRandomModels) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> value(-1e3, 1e3);
  std::uniform_int_distribution<int> exponent(-30, 30);
  for (int trial = 0; trial < 25; ++trial) {
    Model m;
    m.lattice.dimension = 1 + trial % 3;
    const int d = m.lattice.dimension;
    m.lattice.n_sites = {1, 1, 1};
    for (int a = 0; a < d; ++a) m.lattice.n_sites[a] = 2 + (trial + a) % 5;
    m.lattice.g0 = std::abs(value(rng)) * 1e-12 + 1e-10;
    m.lattice.mass_in_mp = std::abs(value(rng)) + 1.0;
    m.lattice.cloud_mass_ratio = std::abs(value(rng)) * 1e-6 + 1e-9;
    m.coupling.isotropic_scalar = trial % 2 == 0;
    for (int e = 0; e < 4; ++e) {
      Offset l{0, 0, 0};
      for (int a = 0; a < d; ++a) l[a] = e - 1 - a;
      Eigen::MatrixXd mat(d, d);
      for (int i = 0; i < d * d; ++i) mat(i / d, i % d) = value(rng) * std::pow(10.0, exponent(rng));
      m.force.entries[l] = mat;
      m.coupling.entries[l] = -mat;
    }
    const Model back = parse(model_to_string(m));
    EXPECT_EQ(back.lattice.g0, m.lattice.g0);
    EXPECT_EQ(back.lattice.mass_in_mp, m.lattice.mass_in_mp);
    EXPECT_EQ(back.lattice.cloud_mass_ratio, m.lattice.cloud_mass_ratio);
    EXPECT_EQ(back.lattice.n_sites, m.lattice.n_sites);
    EXPECT_EQ(back.coupling.isotropic_scalar, m.coupling.isotropic_scalar);
    ASSERT_EQ(back.force.entries.size(), m.force.entries.size());
    for (const auto& [l, mat] : m.force.entries) {
      EXPECT_TRUE(back.force.entries.at(l) == mat);
      EXPECT_TRUE(back.coupling.entries.at(l) == m.coupling.entries.at(l));
    }
  }
}

TEST(ModelIo, ThreeDimensionalEntriesAndPerAxisSites) {
  const Model m = parse(R"([lattice]
dimension = 3
n_sites = 4 6 8
g0 = 3e-10
M_over_Mp = 56
m_over_M = 1e-3
[force_constants]
offset = 1 0 0 : -1 0 0 0 -0.5 0 0 0 -0.5
offset = -1 0 0 : -1 0 0 0 -0.5 0 0 0 -0.5
offset = 0 0 0 : 2 0 0 0 1 0 0 0 1
[coupling_constants]
isotropic_scalar = false
)");
  EXPECT_EQ(m.lattice.n_sites, (Offset{4, 6, 8}));
  EXPECT_EQ(m.force.entries.at({1, 0, 0})(1, 1), -0.5);
  EXPECT_FALSE(m.coupling.isotropic_scalar);
  EXPECT_TRUE(m.coupling.entries.empty());
}

TEST(ModelIo, MalformedInputs) {
  EXPECT_EQ(parse_error("dimension = 1\n"), ErrorCode::MalformedConfig);
  EXPECT_EQ(parse_error("[lattice]\ndimension = 1\nn_sites = 8\n"), ErrorCode::MalformedConfig);
  EXPECT_EQ(parse_error("[lattice]\ndimension = 4\n"), ErrorCode::MalformedConfig);
  EXPECT_EQ(parse_error("[bogus]\n"), ErrorCode::MalformedConfig);
  EXPECT_EQ(parse_error(std::string(kChain) + "offset = 2 : 1 2\n"), ErrorCode::MalformedConfig);
  EXPECT_EQ(parse_error(std::string(kChain) + "offset = 1 : 7\n"), ErrorCode::MalformedConfig);
  EXPECT_EQ(parse_error(std::string(kChain) + "colour = red\n"), ErrorCode::MalformedConfig);
  EXPECT_EQ(parse_error("[lattice]\ndimension = 1\nn_sites = 8\ng0 = abc\n"),
            ErrorCode::MalformedConfig);
  EXPECT_EQ(parse_error("[force_constants]\noffset = 0 : 1\n"), ErrorCode::MalformedConfig);
}

TEST(ModelIo, ParsedButInvalidLatticeIsRejected) {
  std::string text = kChain;
  text.replace(text.find("g0 = 4e-10"), 10, "g0 = -4e-10");
  EXPECT_EQ(parse_error(text), ErrorCode::InvalidParameter);
}

TEST(ModelIo, MissingFile) {
  try {
    read_model_file("/nonexistent/model.cfg");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}
