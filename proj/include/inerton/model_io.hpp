#pragma once

// Plain-text model files:
//
//   [lattice]
//   dimension = 1
//   n_sites = 8
//   g0 = 4e-10
//   M_over_Mp = 30
//   m_over_M = 0.001
//
//   [force_constants]
//   offset = -1 : -10
//   offset = 0 : 20
//   offset = 1 : -10
//
//   [coupling_constants]
//   isotropic_scalar = true
//   offset = -1 : 0
//   offset = 1 : 0
//
// An offset line lists `dimension` integers, a colon, then the
// dimension x dimension matrix row-major. Numbers are written in shortest
// round-trip form, so write(read(text)) reproduces every parsed value.

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "inerton/errors.hpp"
#include "inerton/lattice_model.hpp"

namespace inerton {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] inline void config_error(int line, const std::string& what) {
  throw Error(ErrorCode::MalformedConfig, "line " + std::to_string(line) + ": " + what);
}

inline double parse_double(std::string_view token, int line) {
  double v = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) config_error(line, "bad number '" + std::string(token) + "'");
  return v;
}

inline int parse_int(std::string_view token, int line) {
  int v = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) config_error(line, "bad integer '" + std::string(token) + "'");
  return v;
}

inline std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline void parse_offset_line(std::string_view value, int dimension, int line,
                              OffsetTensorField& field) {
  const auto colon = value.find(':');
  if (colon == std::string_view::npos) config_error(line, "offset entry needs ':'");
  const auto idx = split_ws(value.substr(0, colon));
  const auto vals = split_ws(value.substr(colon + 1));
  if (static_cast<int>(idx.size()) != dimension) {
    config_error(line, "offset needs " + std::to_string(dimension) + " integers");
  }
  if (static_cast<int>(vals.size()) != dimension * dimension) {
    config_error(line, "matrix needs " + std::to_string(dimension * dimension) + " entries");
  }
  Offset l{0, 0, 0};
  for (int a = 0; a < dimension; ++a) l[a] = parse_int(idx[a], line);
  Eigen::MatrixXd m(dimension, dimension);
  for (int r = 0; r < dimension; ++r) {
    for (int c = 0; c < dimension; ++c) m(r, c) = parse_double(vals[r * dimension + c], line);
  }
  if (!field.entries.emplace(l, m).second) config_error(line, "duplicate offset");
}

}  // namespace detail

inline Model read_model(std::istream& in) {
  Model model;
  std::string section;
  std::set<std::string> seen;
  int dimension = 0;
  std::string line;
  int line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']') detail::config_error(line_no, "unterminated section header");
      section = std::string(detail::trim(s.substr(1, s.size() - 2)));
      if (section != "lattice" && section != "force_constants" &&
          section != "coupling_constants") {
        detail::config_error(line_no, "unknown section [" + section + "]");
      }
      if (section != "lattice" && dimension == 0) {
        detail::config_error(line_no, "[lattice] with dimension must come first");
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) detail::config_error(line_no, "expected key = value");
    const std::string key(detail::trim(s.substr(0, eq)));
    const std::string_view value = detail::trim(s.substr(eq + 1));
    if (section.empty()) detail::config_error(line_no, "key outside of a section");

    if (section == "lattice") {
      if (!seen.insert(key).second) detail::config_error(line_no, "duplicate key " + key);
      if (key == "dimension") {
        dimension = detail::parse_int(value, line_no);
        if (dimension < 1 || dimension > kMaxDimension) {
          detail::config_error(line_no, "dimension must be 1, 2 or 3");
        }
        model.lattice.dimension = dimension;
      } else if (key == "n_sites") {
        if (dimension == 0) detail::config_error(line_no, "dimension must precede n_sites");
        const auto parts = detail::split_ws(value);
        model.lattice.n_sites = {1, 1, 1};
        if (parts.size() == 1) {
          const int n = detail::parse_int(parts[0], line_no);
          for (int a = 0; a < dimension; ++a) model.lattice.n_sites[a] = n;
        } else if (static_cast<int>(parts.size()) == dimension) {
          for (int a = 0; a < dimension; ++a) {
            model.lattice.n_sites[a] = detail::parse_int(parts[a], line_no);
          }
        } else {
          detail::config_error(line_no, "n_sites needs 1 or dimension integers");
        }
      } else if (key == "g0") {
        model.lattice.g0 = detail::parse_double(value, line_no);
      } else if (key == "M_over_Mp") {
        model.lattice.mass_in_mp = detail::parse_double(value, line_no);
      } else if (key == "m_over_M") {
        model.lattice.cloud_mass_ratio = detail::parse_double(value, line_no);
      } else {
        detail::config_error(line_no, "unknown key " + key);
      }
    } else if (key == "offset") {
      auto& field = section == "force_constants"
                        ? static_cast<OffsetTensorField&>(model.force)
                        : static_cast<OffsetTensorField&>(model.coupling);
      detail::parse_offset_line(value, dimension, line_no, field);
    } else if (section == "coupling_constants" && key == "isotropic_scalar") {
      if (value == "true") {
        model.coupling.isotropic_scalar = true;
      } else if (value == "false") {
        model.coupling.isotropic_scalar = false;
      } else {
        detail::config_error(line_no, "isotropic_scalar must be true or false");
      }
    } else {
      detail::config_error(line_no, "unknown key " + key + " in [" + section + "]");
    }
  }

  for (const char* required : {"dimension", "n_sites", "g0", "M_over_Mp", "m_over_M"}) {
    if (!seen.count(required)) {
      throw Error(ErrorCode::MalformedConfig, std::string("missing key ") + required);
    }
  }
  check_lattice_spec(model.lattice);
  return model;
}

inline Model read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open model file " + path);
  return read_model(in);
}

inline void write_model(std::ostream& out, const Model& model) {
  const auto& spec = model.lattice;
  const int d = spec.dimension;
  out << "[lattice]\n";
  out << "dimension = " << d << '\n';
  out << "n_sites =";
  for (int a = 0; a < d; ++a) out << ' ' << spec.n_sites[a];
  out << '\n';
  out << "g0 = " << detail::shortest(spec.g0) << '\n';
  out << "M_over_Mp = " << detail::shortest(spec.mass_in_mp) << '\n';
  out << "m_over_M = " << detail::shortest(spec.cloud_mass_ratio) << '\n';

  auto write_field = [&](const OffsetTensorField& field) {
    for (const auto& [l, m] : field.entries) {
      out << "offset =";
      for (int a = 0; a < d; ++a) out << ' ' << l[a];
      out << " :";
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) out << ' ' << detail::shortest(m(r, c));
      }
      out << '\n';
    }
  };
  out << "\n[force_constants]\n";
  write_field(model.force);
  out << "\n[coupling_constants]\n";
  out << "isotropic_scalar = " << (model.coupling.isotropic_scalar ? "true" : "false") << '\n';
  write_field(model.coupling);
}

inline std::string model_to_string(const Model& model) {
  std::ostringstream os;
  write_model(os, model);
  return os.str();
}

}  // namespace inerton
