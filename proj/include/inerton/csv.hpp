#pragma once

// CSV emitters for sweeps and trajectories. Every file opens with `#` comment
// lines echoing the effective parameters; floats use 17 significant digits.

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "inerton/dispersion.hpp"
#include "inerton/dynamics.hpp"

namespace inerton {

using ParameterList = std::vector<std::pair<std::string, std::string>>;

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_comment_header(std::ostream& out, const ParameterList& params) {
  for (const auto& [key, value] : params) out << "# " << key << " = " << value << '\n';
}

/// Scalar k for 1D grids, |k| otherwise.
inline double k_value(const WaveVector& k) { return k.dimension == 1 ? k.k[0] : k.norm(); }

inline void write_dispersion_csv(std::ostream& out, const std::vector<DispersionResult>& table,
                                 const ParameterList& params = {}) {
  write_comment_header(out, params);
  out << "k_index,k_value,branch,omega,gap_flag\n";
  for (const auto& row : table) {
    for (Eigen::Index s = 0; s < row.omegas.size(); ++s) {
      out << row.at.flat << ',' << format_double(k_value(row.at.k)) << ',' << (s + 1) << ','
          << format_double(row.omegas(s)) << ',' << (row.gapped[s] ? 1 : 0) << '\n';
    }
  }
}

/// One row per (sample, mode); the k_index column carries the mode index.
inline void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record,
                                 const ParameterList& params = {}) {
  write_comment_header(out, params);
  out << "t,k_index,ReA,ImA,ReAdot,ImAdot,Rea,Ima,Readot,Imadot,E,P\n";
  for (std::size_t n = 0; n < record.times.size(); ++n) {
    const auto& snap = record.snapshots[n];
    for (std::size_t i = 0; i < snap.modes.size(); ++i) {
      const auto& m = snap.modes[i];
      out << format_double(record.times[n]) << ',' << i << ',' << format_double(m.A.real()) << ','
          << format_double(m.A.imag()) << ',' << format_double(m.A_dot.real()) << ','
          << format_double(m.A_dot.imag()) << ',' << format_double(m.a.real()) << ','
          << format_double(m.a.imag()) << ',' << format_double(m.a_dot.real()) << ','
          << format_double(m.a_dot.imag()) << ',' << format_double(record.energy[n][i]) << ','
          << format_double(std::abs(record.momentum[n][i])) << '\n';
    }
  }
}

inline void write_resonance_csv(std::ostream& out, const ResonanceCurve& curve,
                                const ParameterList& params = {}) {
  write_comment_header(out, params);
  out << "omega,amplitude\n";
  for (const auto& p : curve.points) {
    out << format_double(p.omega) << ',' << format_double(p.amplitude) << '\n';
  }
}

}  // namespace inerton
