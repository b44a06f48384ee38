#include <gtest/gtest.h>

#include <sstream>

#include "inerton/csv.hpp"

using namespace inerton;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

Model chain() { return build_chain_1d(8, 4e-10, 30 * 1.67e-27, 30e-3 * 1.67e-27, 10.0, 1e12); }

}  // namespace

TEST(Csv, SeventeenSignificantDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(format_double(0.0), "0");
}

TEST(Csv, DispersionHeaderAndRows) {
  const Model m = chain();
  const auto table = dispersion_sweep(m, make_k_grid(m.lattice));
  std::ostringstream out;
  write_dispersion_csv(out, table, {{"grid", "8"}, {"model", "chain"}});
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 2u + 1u + 8u);
  EXPECT_EQ(lines[0], "# grid = 8");
  EXPECT_EQ(lines[1], "# model = chain");
  EXPECT_EQ(lines[2], "k_index,k_value,branch,omega,gap_flag");
  EXPECT_EQ(lines[3].substr(0, 2), "0,");
  EXPECT_EQ(lines[3].back(), '1');  // tau opens a gap everywhere
}

TEST(Csv, TrajectoryHeaderAndDeterminism) {
  const std::vector<ModeCoefficients> c{{4.0, 0.5}, {1.0, 0.2}};
  ModeState s{0.0, {{1.0, 0.0, 0.0, 0.5}, {0.0, 1.0, 0.0, 0.0}}};
  auto run = [&] {
    const auto rec = integrate(s, c, {}, {}, {1.0, 0.01, 10});
    std::ostringstream out;
    write_trajectory_csv(out, rec, {{"dt", "0.01"}});
    return out.str();
  };
  const std::string a = run();
  EXPECT_EQ(a, run());
  const auto lines = lines_of(a);
  EXPECT_EQ(lines[1], "t,k_index,ReA,ImA,ReAdot,ImAdot,Rea,Ima,Readot,Imadot,E,P");
  EXPECT_EQ(lines.size(), 2u + 11u * 2u);
  EXPECT_EQ(lines[2].substr(0, 4), "0,0,");
  EXPECT_EQ(lines[3].substr(0, 4), "0,1,");
}

TEST(Csv, ResonanceRows) {
  const auto curve = resonance_sweep(2.0, 1.0, 1.0, {1.0, 3.0, 5}, DampingSpec{0.1});
  std::ostringstream out;
  write_resonance_csv(out, curve);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0], "omega,amplitude");
  EXPECT_EQ(lines[3].substr(0, 2), "2,");
}
