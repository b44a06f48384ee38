// inerton: command-line front end for the lattice/cloud toolkit.
//
// Exit codes: 0 success, 1 usage error, 2 model, validation or numerical error.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "inerton/inerton.hpp"

using namespace inerton;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitModel = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sends text to --out, or stdout when no path was given.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open output file '" + out_path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + out_path + "'");
}

std::string fmt(double v) { return format_double(v); }

Model load_valid_model(const std::string& path) {
  Model model = read_model_file(path);
  const ValidationReport report = validate_model(model);
  for (const auto& check : report.checks) {
    if (!check.passed) {
      throw Error(ErrorCode::InvalidParameter, "model check '" + check.name + "' failed: " + check.detail);
    }
  }
  return model;
}

const GridPoint& pick_point(const KGrid& grid, std::optional<std::size_t> k_index) {
  if (grid.empty()) throw Error(ErrorCode::InvalidParameter, "empty k-grid");
  if (k_index) {
    if (*k_index >= grid.size()) {
      throw UsageError("--k-index " + std::to_string(*k_index) + " outside the grid of " +
                       std::to_string(grid.size()) + " points");
    }
    return grid[*k_index];
  }
  // Default: the first point one step away from the zone centre along the first axis.
  for (const auto& p : grid) {
    if (p.index == Offset{1, 0, 0}) return p;
  }
  return grid.front();
}

void table_row(std::ostringstream& out, const std::string& name, const std::string& symbol,
               double value, const std::string& unit) {
  out << name << ',' << symbol << ',' << fmt(value) << ',' << unit << '\n';
}

// ---------------------------------------------------------------------------

struct ModelArgs {
  std::string model;
  std::string out;
  int grid = 0;
};

struct DispersionArgs : ModelArgs {
  std::vector<double> polarization;
};

void run_dispersion(const DispersionArgs& o) {
  const Model model = load_valid_model(o.model);
  const KGrid grid = make_k_grid(model.lattice, o.grid);
  DispersionOptions options;
  if (!o.polarization.empty()) {
    options.mode = CouplingMode::FixedPolarization;
    options.polarization = Eigen::Map<const Eigen::VectorXd>(o.polarization.data(),
                                                             static_cast<Eigen::Index>(o.polarization.size()));
  }
  const auto table = dispersion_sweep(model, grid, options);

  ParameterList params{{"command", "dispersion"},
                       {"model", o.model},
                       {"grid", std::to_string(o.grid)},
                       {"grid_points", std::to_string(grid.size())},
                       {"coupling_mode", o.polarization.empty() ? "isotropic" : "fixed-polarization"}};
  if (!o.polarization.empty()) {
    std::string e;
    for (double x : o.polarization) e += (e.empty() ? "" : " ") + fmt(x);
    params.emplace_back("polarization", e);
  }
  std::ostringstream out;
  write_dispersion_csv(out, table, params);
  emit(o.out, out.str());
}

struct IntegrateArgs : ModelArgs {
  double dt = 0.0;
  double t_end = 0.0;
  double eta = 0.0;
  double force = 0.0;
  double drive_omega = 0.0;
  double displacement = 1e-12;
  std::size_t stride = 0;
  std::optional<std::size_t> k_index;
};

void run_integrate(const IntegrateArgs& o) {
  const Model model = load_valid_model(o.model);
  const KGrid grid = make_k_grid(model.lattice, o.grid);
  ModeSystem system = scalar_mode_system(model, grid);

  if (o.k_index) {
    const GridPoint& p = pick_point(grid, o.k_index);
    ModeSystem picked;
    for (std::size_t i = 0; i < system.labels.size(); ++i) {
      if (system.labels[i].k_index == p.flat) {
        picked.coefficients.push_back(system.coefficients[i]);
        picked.labels.push_back(system.labels[i]);
        picked.polarizations.push_back(system.polarizations[i]);
      }
    }
    system = std::move(picked);
  }

  if (o.force != 0.0 && !(o.drive_omega > 0.0)) {
    throw UsageError("--force needs a positive --drive-omega");
  }
  const DriveSpec drive =
      o.force != 0.0 ? uniform_drive(system.coefficients.size(), o.force, o.drive_omega) : DriveSpec{};
  const double rate = fastest_rate(system.coefficients, drive);
  if (!(rate > 0.0)) throw Error(ErrorCode::InvalidParameter, "every selected mode is static");

  IntegrationOptions options;
  options.dt = o.dt > 0.0 ? o.dt : 0.01 / rate;
  options.t_end = o.t_end > 0.0 ? o.t_end : 100.0 * 2.0 * kPi / rate;
  const double steps = std::ceil(options.t_end / options.dt);
  options.sample_stride = o.stride > 0 ? o.stride : static_cast<std::size_t>(std::max(1.0, std::floor(steps / 1000.0)));

  const double amplitude = std::sqrt(model.lattice.atom_mass()) * o.displacement;
  ModeState initial;
  for (const auto& c : system.coefficients) {
    initial.modes.push_back(quiescent_cloud(Complex(amplitude), Complex(0.0), c));
  }
  const auto record = integrate(initial, system.coefficients, drive, DampingSpec{o.eta}, options);

  ParameterList params{{"command", "integrate"},
                       {"model", o.model},
                       {"grid", std::to_string(o.grid)},
                       {"k_index", o.k_index ? std::to_string(*o.k_index) : "all"},
                       {"modes", std::to_string(system.coefficients.size())},
                       {"dt", fmt(record.dt)},
                       {"t_end", fmt(options.t_end)},
                       {"steps", std::to_string(record.steps)},
                       {"stride", std::to_string(options.sample_stride)},
                       {"eta", fmt(o.eta)},
                       {"force", fmt(o.force)},
                       {"drive_omega", fmt(o.drive_omega)},
                       {"displacement", fmt(o.displacement)},
                       {"max_energy_drift", fmt(record.max_energy_drift)},
                       {"max_momentum_drift", fmt(record.max_momentum_drift)}};
  std::ostringstream out;
  write_trajectory_csv(out, record, params);
  emit(o.out, out.str());
}

struct ResonanceArgs : ModelArgs {
  double omega_min = 0.0;
  double omega_max = 0.0;
  std::size_t omega_steps = 201;
  double eta = 0.0;
  double force = 1.0;
  int branch = 1;
  std::optional<std::size_t> k_index;
};

void run_resonance(const ResonanceArgs& o) {
  const Model model = load_valid_model(o.model);
  const KGrid grid = make_k_grid(model.lattice, o.grid);
  const GridPoint& p = pick_point(grid, o.k_index);
  const auto [omega_mode, tau] = mode_frequency_and_coupling(model, p.k, o.branch - 1);
  if (!(omega_mode > 0.0)) throw Error(ErrorCode::InvalidParameter, describe(p) + ": mode frequency is zero");

  const double eta = o.eta > 0.0 ? o.eta : 0.05 * omega_mode;
  const OmegaRange range{o.omega_min > 0.0 ? o.omega_min : 0.5 * omega_mode,
                         o.omega_max > 0.0 ? o.omega_max : 1.5 * omega_mode, o.omega_steps};
  const auto curve = resonance_sweep(omega_mode, tau, o.force, range, DampingSpec{eta});

  const ParameterList params{{"command", "resonance"},
                             {"model", o.model},
                             {"grid", std::to_string(o.grid)},
                             {"k_index", std::to_string(p.flat)},
                             {"branch", std::to_string(o.branch)},
                             {"mode_omega", fmt(omega_mode)},
                             {"tau_tilde", fmt(tau)},
                             {"force", fmt(o.force)},
                             {"eta", fmt(eta)},
                             {"omega_min", fmt(range.min)},
                             {"omega_max", fmt(range.max)},
                             {"omega_steps", std::to_string(range.steps)},
                             {"peak_omega", fmt(curve.peak_omega())}};
  std::ostringstream out;
  write_resonance_csv(out, curve, params);
  emit(o.out, out.str());
}

struct KinematicsArgs {
  std::string out;
  double mass_amu = kEarthMeanAtomMass;
  double temperature = 293.0;
  double velocity = 0.0;
  double g0 = 4e-10;
  bool earth = false;
};

void run_kinematics(const KinematicsArgs& o) {
  const double mass = o.mass_amu * kConstants.M_p;
  const CloudKinematics ck = o.velocity > 0.0 ? moving_particle(mass, o.velocity, o.g0)
                                              : thermal_particle(mass, o.temperature, o.g0);
  std::ostringstream out;
  write_comment_header(out, {{"command", "kinematics"},
                             {"mass_amu", fmt(o.mass_amu)},
                             {"temperature", o.velocity > 0.0 ? "unused" : fmt(o.temperature)},
                             {"velocity", o.velocity > 0.0 ? fmt(o.velocity) : "thermal"},
                             {"g0", fmt(o.g0)},
                             {"earth", o.earth ? "true" : "false"}});
  out << "name,symbol,value,unit\n";
  table_row(out, "mass", "M", ck.mass, "kg");
  table_row(out, "velocity", "v0", ck.v0, "m/s");
  table_row(out, "de Broglie wavelength", "lambda", ck.lambda, "m");
  table_row(out, "cloud amplitude", "Lambda", ck.Lambda, "m");
  table_row(out, "enveloping amplitude", "Lambda/pi", ck.enveloping_amplitude(), "m");
  table_row(out, "transverse extent", "2Lambda/pi", ck.transverse_extent(), "m");
  table_row(out, "overlap ratio", "Lambda/g0", *ck.overlap, "1");
  if (o.earth) {
    for (const auto& flow : earth_flows(kConstants, o.mass_amu)) {
      const std::string tag = flow.kind == FlowKind::Orbital ? "1" : "2";
      const std::string name = std::string(to_string(flow.kind)) + " flow ";
      table_row(out, name + "velocity", "v0" + tag, flow.v, "m/s");
      table_row(out, name + "de Broglie wavelength", "lambda" + tag, flow.lambda, "m");
      table_row(out, name + "cloud amplitude", "Lambda" + tag, flow.Lambda, "m");
      table_row(out, name + "overlap ratio", "Lambda" + tag + "/g0", flow.Lambda / o.g0, "1");
    }
  }
  emit(o.out, out.str());
}

struct ResonatorArgs {
  std::string out;
  std::vector<double> check;
  double tolerance = kDefaultGeometryTolerance;
  double radius = kConstants.R_earth;
  double nu_debye = 1e13;
  double l_max = 0.12;
  int harmonics = 0;
};

bool run_resonator(const ResonatorArgs& o) {
  const EarthPaths paths = earth_path_lengths(o.radius);
  const TravelTimes times = travel_times(paths.L_tan, paths.L_rad);
  std::optional<GeometryCheck> check;
  if (!o.check.empty()) check = check_geometry(o.check[0], o.check[1], o.tolerance);
  const SpectralWindow window = spectral_window(o.nu_debye, o.l_max);

  std::ostringstream out;
  write_comment_header(out, {{"command", "resonator"},
                             {"radius", fmt(o.radius)},
                             {"check", check ? fmt(o.check[0]) + " " + fmt(o.check[1]) : "none"},
                             {"tolerance", fmt(o.tolerance)},
                             {"nu_debye", fmt(o.nu_debye)},
                             {"l_max", fmt(o.l_max)},
                             {"harmonics", std::to_string(o.harmonics)}});
  out << "name,symbol,value,unit\n";
  table_row(out, "tangential path", "L_tan", paths.L_tan, "m");
  table_row(out, "radial path", "L_rad", paths.L_rad, "m");
  table_row(out, "path ratio", "L_tan/L_rad", paths.ratio, "1");
  table_row(out, "tangential travel time", "t_tan", times.t_tan, "s");
  table_row(out, "radial travel time", "t_rad", times.t_rad, "s");
  table_row(out, "shortest wavelength", "lambda_min", window.lambda_min, "m");
  table_row(out, "longest wavelength", "lambda_max", window.lambda_max, "m");
  table_row(out, "lowest frequency", "nu_min", window.nu_min, "Hz");
  table_row(out, "highest frequency", "nu_max", window.nu_max, "Hz");
  if (check) {
    const auto& g = check->geometry;
    table_row(out, "resonator ratio", "l_tan/l_rad", g.ratio, "1");
    table_row(out, "ratio deviation", "dev", g.ratio_deviation, "1");
    out << "geometry check,pass," << (check->pass ? "true" : "false") << ",\n";
    if (o.harmonics > 0) {
      for (const auto& h : harmonic_lengths(g, o.harmonics)) {
        const std::string n = std::to_string(h.n);
        table_row(out, "harmonic " + n + " tangential", "l_tan/" + n, h.l_tan, "m");
        table_row(out, "harmonic " + n + " radial", "l_rad/" + n, h.l_rad, "m");
      }
    }
  }
  emit(o.out, out.str());
  return !check || check->pass;
}

bool run_validate(const ModelArgs& o) {
  const Model model = read_model_file(o.model);
  const ValidationReport report = validate_model(model);
  std::ostringstream out;
  write_comment_header(out, {{"command", "validate"}, {"model", o.model}});
  out << "check,passed,residual,offset,detail\n";
  for (const auto& c : report.checks) {
    out << c.name << ',' << (c.passed ? "true" : "false") << ',' << fmt(c.residual) << ','
        << (c.offset ? to_string(*c.offset, model.lattice.dimension) : "") << ",\"" << c.detail << "\"\n";
  }
  emit(o.out, out.str());
  return report.ok();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice and inerton-cloud toolkit"};
  app.require_subcommand(1);

  auto add_model = [](CLI::App* sub, ModelArgs& o) {
    sub->add_option("--model", o.model, "model file")->required();
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--grid", o.grid, "k points per axis (0: one per lattice site)")
        ->check(CLI::NonNegativeNumber);
  };

  DispersionArgs dispersion;
  auto* dispersion_cmd = app.add_subcommand("dispersion", "branch frequencies over the k-grid");
  add_model(dispersion_cmd, dispersion);
  dispersion_cmd->add_option("--polarization", dispersion.polarization,
                             "fixed unit polarisation for anisotropic coupling");

  IntegrateArgs integ;
  auto* integrate_cmd = app.add_subcommand("integrate", "time evolution of the collective modes");
  add_model(integrate_cmd, integ);
  integrate_cmd->add_option("--dt", integ.dt, "time step in s (default 0.01 / fastest rate)")
      ->check(CLI::NonNegativeNumber);
  integrate_cmd->add_option("--t-end", integ.t_end, "duration in s (default 100 fastest periods)")
      ->check(CLI::NonNegativeNumber);
  integrate_cmd->add_option("--eta", integ.eta, "damping rate in 1/s")->check(CLI::NonNegativeNumber);
  integrate_cmd->add_option("--force", integ.force, "cloud drive strength f");
  integrate_cmd->add_option("--drive-omega", integ.drive_omega, "drive frequency in rad/s")
      ->check(CLI::NonNegativeNumber);
  integrate_cmd->add_option("--displacement", integ.displacement, "initial displacement per mode in m");
  integrate_cmd->add_option("--stride", integ.stride, "record every n-th step (default ~1000 samples)");
  integrate_cmd->add_option("--k-index", integ.k_index, "restrict to one k-grid point");

  ResonanceArgs res;
  auto* resonance_cmd = app.add_subcommand("resonance", "steady-state amplitude versus drive frequency");
  add_model(resonance_cmd, res);
  resonance_cmd->add_option("--omega-min", res.omega_min, "lowest drive frequency (default 0.5 Omega)")
      ->check(CLI::NonNegativeNumber);
  resonance_cmd->add_option("--omega-max", res.omega_max, "highest drive frequency (default 1.5 Omega)")
      ->check(CLI::NonNegativeNumber);
  resonance_cmd->add_option("--omega-steps", res.omega_steps, "number of samples")->capture_default_str();
  resonance_cmd->add_option("--eta", res.eta, "damping rate (default 0.05 Omega)")
      ->check(CLI::NonNegativeNumber);
  resonance_cmd->add_option("--force", res.force, "cloud drive strength f")->capture_default_str();
  resonance_cmd->add_option("--branch", res.branch, "branch, 1-based")->capture_default_str()
      ->check(CLI::PositiveNumber);
  resonance_cmd->add_option("--k-index", res.k_index, "k-grid point (default first step along axis 1)");

  KinematicsArgs kin;
  auto* kinematics_cmd = app.add_subcommand("kinematics", "particle and cloud length scales");
  kinematics_cmd->add_option("--out", kin.out, "output file (default stdout)");
  kinematics_cmd->add_option("--mass-amu", kin.mass_amu, "mass in proton masses")->capture_default_str()
      ->check(CLI::PositiveNumber);
  kinematics_cmd->add_option("--temperature", kin.temperature, "temperature in K")->capture_default_str()
      ->check(CLI::PositiveNumber);
  kinematics_cmd->add_option("--velocity", kin.velocity, "explicit velocity in m/s (overrides temperature)")
      ->check(CLI::PositiveNumber);
  kinematics_cmd->add_option("--g0", kin.g0, "lattice constant in m")->capture_default_str()
      ->check(CLI::PositiveNumber);
  kinematics_cmd->add_flag("--earth", kin.earth, "add the orbital and rotational Earth flows");

  ResonatorArgs reso;
  auto* resonator_cmd = app.add_subcommand("resonator", "path ratios, travel times and spectral window");
  resonator_cmd->add_option("--out", reso.out, "output file (default stdout)");
  resonator_cmd->add_option("--check", reso.check, "tabletop dimensions l_tan l_rad in m")->expected(2);
  resonator_cmd->add_option("--tolerance", reso.tolerance, "relative ratio tolerance")->capture_default_str();
  resonator_cmd->add_option("--radius", reso.radius, "planet radius in m")->capture_default_str();
  resonator_cmd->add_option("--nu-debye", reso.nu_debye, "Debye frequency in Hz")->capture_default_str();
  resonator_cmd->add_option("--l-max", reso.l_max, "longest admissible wavelength in m")
      ->capture_default_str();
  resonator_cmd->add_option("--harmonics", reso.harmonics, "list l/n for n = 1..N");

  ModelArgs val;
  auto* validate_cmd = app.add_subcommand("validate", "structural checks on a model file");
  validate_cmd->add_option("--model", val.model, "model file")->required();
  validate_cmd->add_option("--out", val.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[usage]: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*dispersion_cmd) run_dispersion(dispersion);
    if (*integrate_cmd) run_integrate(integ);
    if (*resonance_cmd) run_resonance(res);
    if (*kinematics_cmd) run_kinematics(kin);
    if (*resonator_cmd && !run_resonator(reso)) {
      std::cerr << "error[geometry-check]: ratio deviation exceeds the tolerance\n";
      return kExitModel;
    }
    if (*validate_cmd && !run_validate(val)) {
      std::cerr << "error[validation]: model failed one or more checks\n";
      return kExitModel;
    }
  } catch (const UsageError& e) {
    std::cerr << "error[usage]: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.code()) << "]: " << e.message() << '\n';
    return kExitModel;
  }
  return 0;
}
