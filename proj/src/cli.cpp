#include "fcns/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fcns/bounds.hpp"
#include "fcns/builtins.hpp"
#include "fcns/field_io.hpp"
#include "fcns/fixed_point.hpp"
#include "fcns/ns_evolution.hpp"
#include "fcns/oracles.hpp"

namespace fcns {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::string command;
  double nu = 1.0;
  int dim = 3;
  double trunc = 8.0;  // <= 0 means no truncation
  double T = 1.0;
  double dt = 1e-3;
  double eps = 0.1;
  int partition = 0;  // > 0 selects the splitting scheme for simulate-linear
  std::string init = "taylor-green";
  std::string advection = "zero";
  std::string out = ".";
  int snapshot_every = 0;
  std::uint64_t seed = 20240601;
  double amplitude = 1.0;
  std::string trajectory;

  double radius() const { return trunc > 0.0 ? trunc : kInfinity; }
  BuiltinParams params() const {
    BuiltinParams p;
    p.dimension = dim;
    p.truncation_radius = radius();
    p.amplitude = amplitude;
    p.seed = seed;
    return p;
  }
  StepperOptions options() const {
    StepperOptions o;
    o.snapshot_every = snapshot_every;
    return o;
  }
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) throw ConfigError(std::string("--") + name + " must be > 0");
}

FourierField load_initial(const RunConfig& cfg) {
  if (fs::exists(cfg.init)) return read_field_file(cfg.init).with_truncation(cfg.radius());
  return builtin_initial_data(cfg.init, cfg.params());
}

std::ofstream open_report(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out);
  std::ofstream os(fs::path(cfg.out) / name, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + (fs::path(cfg.out) / name).string());
  return os;
}

void print_summary(std::ostream& out, const Trajectory& traj) {
  const auto& last = traj.points.back();
  char line[256];
  std::snprintf(line, sizeof line, "%s: status=%s t=%.6g A0=%.12g trunc_loss=%.3g points=%zu\n",
                traj.scheme.c_str(), to_string(traj.status), last.t, last.norms.values.at(0.0),
                traj.truncation_loss, traj.points.size());
  out << line;
}

int simulate_linear(const RunConfig& cfg, std::ostream& out) {
  const FourierField u0 = load_initial(cfg);
  const AdvectionSource v = builtin_advection(cfg.advection, cfg.params());
  Trajectory traj;
  if (cfg.partition > 0) {
    traj = solve_splitting(u0, v, cfg.nu, TimePartition::uniform(cfg.T, cfg.partition), cfg.options());
  } else {
    require_positive(cfg.dt, "dt");
    traj = solve_duhamel(u0, v, cfg.nu, cfg.T, cfg.dt, cfg.options());
  }
  out << "trajectory " << write_trajectory(cfg.out, "trajectory", traj).string() << '\n';
  print_summary(out, traj);
  return kExitOk;
}

int simulate_ns(const RunConfig& cfg, std::ostream& out) {
  require_positive(cfg.dt, "dt");
  const FourierField u0 = load_initial(cfg);
  const NsRun run = solve_ns(u0, cfg.nu, cfg.T, cfg.dt, cfg.options());
  out << "trajectory " << write_trajectory(cfg.out, "trajectory", run.trajectory).string() << '\n';
  if (run.envelope) {
    auto os = open_report(cfg, "blowup.csv");
    run.report.write_csv(os, *run.envelope);
  }
  print_summary(out, run.trajectory);
  out << "monitor: " << to_string(run.report.status) << '\n';
  return run.report.status == BlowupStatus::kEnvelopeExceeded ? kExitVerificationFailed : kExitOk;
}

int simulate_delayed(const RunConfig& cfg, std::ostream& out) {
  require_positive(cfg.dt, "dt");
  require_positive(cfg.eps, "eps");
  const FourierField u0 = load_initial(cfg);
  const Trajectory traj = solve_time_delayed(u0, cfg.nu, cfg.eps, cfg.T, cfg.dt, cfg.options());
  out << "trajectory " << write_trajectory(cfg.out, "trajectory", traj).string() << '\n';
  print_summary(out, traj);
  return kExitOk;
}

int verify_bounds_command(const RunConfig& cfg, std::ostream& out) {
  const std::vector<int> degrees{0, 1, 2};
  Trajectory traj;
  std::map<int, TimeSeries> v_norms;
  if (!cfg.trajectory.empty()) {
    if (!fs::exists(cfg.trajectory)) throw ConfigError("no trajectory file " + cfg.trajectory);
    traj = read_trajectory(cfg.trajectory);
    if (cfg.advection == "self") {
      // v = -u: the advection seminorms are the recorded ones.
      for (int j = 0; j <= 2; ++j) {
        v_norms[j] = TimeSeries{traj.times(), traj.seminorm_series(j)};
      }
    } else {
      v_norms = advection_histories(builtin_advection(cfg.advection, cfg.params()), traj.times(), 2);
    }
  } else {
    const FourierField u0 = load_initial(cfg);
    const AdvectionSource v = builtin_advection(cfg.advection, cfg.params());
    require_positive(cfg.dt, "dt");
    traj = solve_duhamel(u0, v, cfg.nu, cfg.T, cfg.dt, cfg.options());
    v_norms = advection_histories(v, traj.times(), 2);
  }
  const BoundReport report = verify_bounds(traj, v_norms, cfg.nu, degrees);
  auto os = open_report(cfg, "bounds.csv");
  report.write_csv(os);
  out << "bounds: rows=" << report.rows.size() << " violations=" << report.violations() << '\n';
  return report.all_satisfied() ? kExitOk : kExitVerificationFailed;
}

struct OracleRow {
  std::string name;
  double t;
  int index;
  double expected;
  double computed;
  double threshold;
  double error() const { return std::abs(expected - computed); }
};

Complex i_power(int p) {
  static const Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[((p % 4) + 4) % 4];
}

std::vector<OracleRow> oracle_suite() {
  std::vector<OracleRow> rows;
  {
    const CascadeState s = cascade_inviscid(0.5, 60);
    rows.push_back({"cascade_inviscid_norm", 0.5, 60, 2.0, s.norm_A(), 1e-12});
    const FourierField u0 = cascade_to_field(cascade_inviscid(0.0, 12).a);
    StepperOptions opt;
    opt.record_every = 1000000;
    const Trajectory traj = solve_duhamel(u0, cascade_advection(), 0.0, 0.5, 1e-4, opt);
    const auto a = field_to_cascade(traj.final_field, 12);
    for (int k = 1; k <= 10; ++k) {
      rows.push_back({"cascade_inviscid_solver", 0.5, k, std::pow(0.5, k - 1),
                      (std::conj(i_power(k - 1)) * a[k - 1]).real(), 1e-7});
    }
  }
  {
    const auto states = cascade_viscous_solve(1.0, 5.0, 1e-3, 12);
    for (int step : {0, 1000, 2000, 5000}) {
      const auto& s = states[step];
      rows.push_back({"cascade_viscous_a1", s.t, 1, std::exp(-s.t), s.a[0].real(), 1e-10});
      // Reported as the excess over the bound: zero when the bound holds.
      const double bound = cascade_viscous_norm_bound(1.0, s.t);
      rows.push_back({"cascade_viscous_norm_excess", s.t, 12, 0.0,
                      std::max(0.0, s.norm_A() - bound), 1e-8});
    }
  }
  rows.push_back({"bessel_first_zero", 0.0, 0, 0.0, bessel_j(0, 2.404826), 2e-6});
  {
    const WaveVector k{1, 0, 0};
    const WaveVector l{0, 0, 1};
    const CVector a{0.0, 1.0, 0.0};
    const CVector b{1.0, 0.0, 0.0};
    const BesselConfig cfg = BesselConfig::constant(k, l, a, b);
    const FourierField u0 = FourierField::from_modes(3, std::sqrt(1.0 + 30.0 * 30.0), {{k, a}});
    StepperOptions opt;
    opt.record_every = 1000000;
    const Trajectory traj = solve_duhamel(u0, bessel_advection(l, b), 0.0, 1.0, 1e-3, opt);
    const FourierField exact = bessel_solution(cfg, 1.0);
    double l2 = 0.0;
    for (const auto& m : traj.final_field.modes()) l2 += m.a.norm2();
    rows.push_back({"bessel_l2_conservation", 1.0, 0, 1.0, l2, 1e-8});
    for (int j = -6; j <= 6; ++j) {
      const WaveVector kj{1, 0, j};
      rows.push_back({"bessel_solver_re", 1.0, j, exact.coefficient(kj)[1].real(),
                      traj.final_field.coefficient(kj)[1].real(), 1e-5});
      rows.push_back({"bessel_solver_im", 1.0, j, exact.coefficient(kj)[1].imag(),
                      traj.final_field.coefficient(kj)[1].imag(), 1e-5});
    }
    const Complex bp{0.7, 0.9};
    const auto series = shift_series_coefficients(bp, 7);
    const double z = 2.0 * std::abs(bp);
    for (int j = -7; j <= 7; ++j) {
      const Complex closed = std::pow(bp / std::abs(bp), j) * bessel_j_signed(j, z);
      rows.push_back({"shift_series_re", 0.0, j, closed.real(), series[j + 7].real(), 1e-12});
      rows.push_back({"shift_series_im", 0.0, j, closed.imag(), series[j + 7].imag(), 1e-12});
    }
  }
  return rows;
}

int verify_oracles(const RunConfig& cfg, std::ostream& out) {
  const auto rows = oracle_suite();
  auto os = open_report(cfg, "oracles.csv");
  os << "case,t,k_or_j,expected,computed,abs_err\n";
  std::size_t failures = 0;
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%s,%.17g,%d,%.17g,%.17g,%.3e\n", r.name.c_str(), r.t, r.index,
                  r.expected, r.computed, r.error());
    os << line;
    if (!(r.error() <= r.threshold)) {
      ++failures;
      out << "FAIL " << line;
    }
  }
  out << "oracles: rows=" << rows.size() << " failures=" << failures << '\n';
  return failures == 0 ? kExitOk : kExitVerificationFailed;
}

int breakdown_report(const RunConfig& cfg, std::ostream& out) {
  require_positive(cfg.nu, "nu");
  require_positive(cfg.dt, "dt");
  const FourierField u0 = load_initial(cfg);
  const BreakdownEnvelope env = breakdown_envelope(seminorm_A(u0, 0.0), seminorm_A(u0, 1.0), cfg.nu);
  // Stay clear of the envelope singularity.
  const double horizon = std::isinf(env.T0) ? cfg.T : std::min(cfg.T, 0.9 * env.T0);
  const NsRun run = solve_ns(u0, cfg.nu, horizon, cfg.dt, cfg.options());
  auto os = open_report(cfg, "breakdown.csv");
  run.report.write_csv(os, env);
  char line[256];
  std::snprintf(line, sizeof line, "envelope: case=%s T0=%.12g t_star_lower=%.12g degenerate=%d\n",
                to_string(env.kind), env.T0, t_star_lower_bound(env.u0_A0, cfg.nu), env.degenerate ? 1 : 0);
  out << line << "monitor: " << to_string(run.report.status) << '\n';
  return run.report.status == BlowupStatus::kEnvelopeExceeded ? kExitVerificationFailed : kExitOk;
}

int fixed_point_check(const RunConfig& cfg, std::ostream& out) {
  require_positive(cfg.nu, "nu");
  require_positive(cfg.dt, "dt");
  const FourierField u0 = load_initial(cfg);
  if (std::isinf(u0.truncation_radius())) throw ConfigError("fixed-point-check needs --trunc > 0");
  const FixedPointSpace space = make_fixed_point_space(u0, cfg.nu, cfg.dt, cfg.T);
  auto os = open_report(cfg, "fixed_point.csv");
  os << "# T=" << space.T << " L=" << space.L << " radius=" << space.radius << " seed=" << cfg.seed << '\n';
  os << "kind,index,value,limit,ok\n";
  bool ok = true;
  char line[256];
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double frac_f = 0.2 + 0.8 * ((i * 7919) % 97) / 97.0;
    const double frac_g = 0.2 + 0.8 * ((i * 104729) % 89) / 89.0;
    const auto f = random_path_in_ball(space, u0.dimension(), cfg.seed + 2 * i, frac_f);
    const auto g = random_path_in_ball(space, u0.dimension(), cfg.seed + 2 * i + 1, frac_g);
    const double ratio = contraction_estimate(f, g, u0, space);
    worst = std::max(worst, ratio);
    const bool good = ratio <= 0.8 + 1e-9;
    ok = ok && good;
    std::snprintf(line, sizeof line, "contraction,%d,%.17g,%.17g,%d\n", i, ratio, 0.8 + 1e-9, good ? 1 : 0);
    os << line;
  }
  const PicardResult picard = picard_iterate(u0, space);
  StepperOptions opt;
  opt.snapshot_every = 1;
  const NsRun run = solve_ns(u0, cfg.nu, space.T, cfg.dt, opt);
  CoefficientPath ns;
  for (const auto& p : run.trajectory.points) {
    ns.times.push_back(p.t);
    ns.states.push_back(*p.field);
  }
  ns.times = picard.path.times;  // same uniform grid up to rounding
  const double gap = path_norm_M(path_difference(picard.path, ns));
  const bool agree = gap <= 1e-6;
  ok = ok && agree;
  std::snprintf(line, sizeof line, "picard_vs_ns,%d,%.17g,%.17g,%d\n", picard.iterations, gap, 1e-6,
                agree ? 1 : 0);
  os << line;
  out << "fixed-point: T=" << space.T << " worst_ratio=" << worst << " picard_gap=" << gap << '\n';
  return ok ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Spectral Navier-Stokes solver and verification toolkit", "fcns"};
  app.set_config("--config", "", "Flat key = value file with the option names as keys; flags win");
  const std::vector<std::string> commands{"simulate-linear", "simulate-ns",   "simulate-delayed",
                                          "verify-bounds",   "verify-oracles", "breakdown-report",
                                          "fixed-point-check"};
  app.add_option("command", cfg.command, "Command to run")->required()->check(CLI::IsMember(commands));
  app.add_option("--nu", cfg.nu, "Viscosity");
  app.add_option("--dim", cfg.dim, "Spatial dimension n");
  app.add_option("--trunc", cfg.trunc, "Truncation radius K_trunc (<= 0: none)");
  app.add_option("--T", cfg.T, "Final time");
  app.add_option("--dt", cfg.dt, "Time step");
  app.add_option("--eps", cfg.eps, "Delay for simulate-delayed");
  app.add_option("--partition", cfg.partition, "Number of splitting intervals (simulate-linear)");
  app.add_option("--init", cfg.init, "Initial field: builtin name or snapshot file");
  app.add_option("--advection", cfg.advection, "Advection builtin (or 'self' for verify-bounds)");
  app.add_option("--out", cfg.out, "Output directory");
  app.add_option("--snapshot-every", cfg.snapshot_every, "Field snapshot every M recorded points (0: first/last)");
  app.add_option("--seed", cfg.seed, "Seed for randomized data");
  app.add_option("--amplitude", cfg.amplitude, "Builtin amplitude (target ||.||_{A,0} for random-small)");
  app.add_option("--trajectory", cfg.trajectory, "Trajectory file for verify-bounds");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "fcns: " << e.what() << '\n';
    return kExitConfigError;
  }
  out << "seed=" << cfg.seed << '\n';
  try {
    if (cfg.command == "simulate-linear") return simulate_linear(cfg, out);
    if (cfg.command == "simulate-ns") return simulate_ns(cfg, out);
    if (cfg.command == "simulate-delayed") return simulate_delayed(cfg, out);
    if (cfg.command == "verify-bounds") return verify_bounds_command(cfg, out);
    if (cfg.command == "verify-oracles") return verify_oracles(cfg, out);
    if (cfg.command == "breakdown-report") return breakdown_report(cfg, out);
    return fixed_point_check(cfg, out);
  } catch (const ConfigError& e) {
    err << "fcns: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    err << "fcns: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace fcns
