#include "fcns/ns_evolution.hpp"

#include <cmath>
#include <string>

namespace fcns {

namespace {

void require_positive_nu(double nu) {
  if (!(nu > 0.0)) throw Error(ErrorCode::kBoundUndefined, "envelopes require nu > 0");
}

}  // namespace

const char* to_string(EnvelopeCase c) {
  switch (c) {
    case EnvelopeCase::kInfinite: return "infinite";
    case EnvelopeCase::kT0: return "T0_case";
    case EnvelopeCase::kT1: return "T1_case";
  }
  return "unknown";
}

const char* to_string(BlowupStatus s) {
  switch (s) {
    case BlowupStatus::kCompleted: return "completed";
    case BlowupStatus::kEnvelopeExceeded: return "envelope_exceeded";
    case BlowupStatus::kNormOverflow: return "norm_overflow";
  }
  return "unknown";
}

double BreakdownEnvelope::f0(double t) const {
  if (u0_A0 == 0.0) return 0.0;
  if (t >= T0) return kInfinity;
  return std::sqrt(2.0 * nu / (2.0 * nu / (u0_A0 * u0_A0) - t));
}

double BreakdownEnvelope::f1(double t) const {
  if (u0_A1 == 0.0) return 0.0;
  const double end = f1_singularity ? std::min(*f1_singularity, T0) : T0;
  if (t >= end) return kInfinity;
  const double r = std::sqrt(c - 2.0 * t);
  return 1.0 / (r * (gamma + r));
}

BreakdownEnvelope breakdown_envelope(double u0_A0, double u0_A1, double nu) {
  require_positive_nu(nu);
  if (u0_A0 < 0.0 || u0_A1 < 0.0) {
    throw Error(ErrorCode::kPreconditionViolated, "seminorms must be >= 0");
  }
  BreakdownEnvelope e;
  e.nu = nu;
  e.u0_A0 = u0_A0;
  e.u0_A1 = u0_A1;
  if (u0_A1 == 0.0) {
    // Constant initial data; ||u||_{A,0} <= ||u||_{A,1} vanishes as well.
    e.kind = EnvelopeCase::kInfinite;
    return e;
  }
  const double a2 = u0_A0 * u0_A0;
  e.c = 4.0 * nu / a2;
  e.T0 = 2.0 * nu / a2;
  e.gamma = u0_A0 / (2.0 * std::sqrt(nu) * u0_A1) - 2.0 * std::sqrt(nu) / u0_A0;
  if (a2 >= 4.0 * nu * u0_A1) {
    e.kind = EnvelopeCase::kT0;
    return e;
  }
  e.kind = EnvelopeCase::kT1;
  e.T1 = 1.0 / u0_A1 - a2 / (8.0 * nu * u0_A1 * u0_A1) - 3.0 * nu / (2.0 * a2);
  e.f1_singularity = 0.5 * (e.c - e.gamma * e.gamma);
  e.degenerate = !(*e.T1 > 0.0 && *e.T1 < e.T0);
  return e;
}

double t_star_lower_bound(double u0_A0, double nu) {
  require_positive_nu(nu);
  if (u0_A0 <= nu) return kInfinity;
  return 2.0 * nu / (u0_A0 * u0_A0);
}

void BlowupReport::write_csv(std::ostream& os, const BreakdownEnvelope& envelope) const {
  char line[512];
  std::snprintf(line, sizeof line,
                "# nu=%.17g u0_A0=%.17g u0_A1=%.17g c=%.17g gamma=%.17g T0=%.17g T1=%s "
                "case=%s degenerate=%d t_star_lower=%.17g status=%s\n",
                envelope.nu, envelope.u0_A0, envelope.u0_A1, envelope.c, envelope.gamma,
                envelope.T0, envelope.T1 ? std::to_string(*envelope.T1).c_str() : "none",
                to_string(envelope.kind), envelope.degenerate ? 1 : 0, t_star_lower,
                to_string(status));
  os << line << "t,A0_measured,f0_envelope,exceeded\n";
  for (std::size_t i = 0; i < A0_history.t.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%d\n", A0_history.t[i],
                  A0_history.value[i], envelope_history[i], exceeded[i] ? 1 : 0);
    os << line;
  }
}

BlowupReport breakdown_monitor(const Trajectory& trajectory, const BreakdownEnvelope& envelope,
                               double overflow_cap, double tol) {
  BlowupReport report;
  report.t_star_lower = t_star_lower_bound(envelope.u0_A0, envelope.nu);
  for (const auto& p : trajectory.points) {
    auto it = p.norms.values.find(0.0);
    if (it == p.norms.values.end()) {
      throw Error(ErrorCode::kMissingHistory, "trajectory has no ||u||_{A,0} records");
    }
    const double a0 = it->second;
    const double f0 = envelope.f0(p.t);
    const bool over = a0 > f0 * (1.0 + tol) + p.truncation_loss;
    report.A0_history.t.push_back(p.t);
    report.A0_history.value.push_back(a0);
    report.envelope_history.push_back(f0);
    report.exceeded.push_back(over);
    if (report.status != BlowupStatus::kCompleted) continue;
    if (!std::isfinite(a0) || a0 > overflow_cap) {
      report.status = BlowupStatus::kNormOverflow;
      continue;
    }
    report.last_valid_time = p.t;
    if (over) {
      report.status = BlowupStatus::kEnvelopeExceeded;
      report.first_exceedance = p.t;
    }
  }
  if (report.status == BlowupStatus::kCompleted &&
      trajectory.status == RunStatus::kBlowUpDetected) {
    report.status = BlowupStatus::kNormOverflow;
  }
  return report;
}

NsRun solve_ns(const FourierField& u0, double nu, double T, double dt, StepperOptions options) {
  if (!is_divergence_free(u0, 1e-10)) {
    throw Error(ErrorCode::kNotDivergenceFree, "initial data must be divergence-free");
  }
  const double a0 = seminorm_A(u0, 0.0);
  if (std::isinf(options.overflow_cap) && a0 > 0.0) options.overflow_cap = 1e6 * a0;

  NsRun run;
  run.trajectory = integrate_duhamel(
      u0, [](double, const FourierField& state) { return scale(state, -1.0); }, nu, T, dt, options,
      "navier-stokes");
  if (nu > 0.0) {
    run.envelope = breakdown_envelope(a0, seminorm_A(u0, 1.0), nu);
    run.report = breakdown_monitor(run.trajectory, *run.envelope, options.overflow_cap);
  } else {
    run.report.status = run.trajectory.status == RunStatus::kBlowUpDetected
                            ? BlowupStatus::kNormOverflow
                            : BlowupStatus::kCompleted;
    run.report.last_valid_time = run.trajectory.last_valid_time;
  }
  return run;
}

Trajectory solve_time_delayed(const FourierField& u0, double nu, double eps, double T, double dt,
                              const StepperOptions& options) {
  if (!(eps > 0.0)) throw Error(ErrorCode::kPreconditionViolated, "eps must be > 0");
  if (!(dt > 0.0) || T < 0.0) throw Error(ErrorCode::kInvalidInterval, "need dt > 0 and T >= 0");
  const double ratio = eps / dt;
  const long per_block = std::lround(ratio);
  if (per_block < 1 || std::abs(ratio - static_cast<double>(per_block)) > 1e-9 * ratio) {
    throw Error(ErrorCode::kGridIncompatible, "dt must divide eps");
  }
  if (!is_divergence_free(u0, 1e-10)) {
    throw Error(ErrorCode::kNotDivergenceFree, "initial data must be divergence-free");
  }
  const double h = eps / static_cast<double>(per_block);

  Trajectory out;
  out.scheme = "time-delayed";
  out.nu = nu;
  out.dimension = u0.dimension();

  // Block states at every knot, reused as the delayed advection of the next block.
  std::vector<FourierField> previous{u0};
  FourierField state = u0;
  StepperOptions inner = options;
  inner.record_every = 1;
  inner.snapshot_every = 1;
  const int record_every = std::max(1, options.record_every);
  long global_step = 0;
  const long total_steps = std::lround(T / h);
  double loss = 0.0;

  for (long block = 0; global_step < total_steps; ++block) {
    const double t0 = static_cast<double>(block) * eps;
    const long steps = std::min(per_block, total_steps - global_step);
    const auto& delayed = previous;
    AdvectionRule rule = [&delayed, h](double tau, const FourierField&) {
      if (delayed.size() == 1) return scale(delayed.front(), -1.0);
      const double pos = tau / h;
      const auto j = std::min(static_cast<std::size_t>(pos), delayed.size() - 2);
      const double w = pos - static_cast<double>(j);
      return add(scale(delayed[j], -(1.0 - w)), scale(delayed[j + 1], -w));
    };
    Trajectory piece = integrate_duhamel(state, rule, nu, static_cast<double>(steps) * h, h, inner,
                                         "time-delayed-block");
    const bool failed = piece.status == RunStatus::kBlowUpDetected;
    std::vector<FourierField> knots;
    knots.reserve(piece.points.size());
    if (global_step == 0) {
      TrajectoryPoint p0 = piece.points.front();
      out.points.push_back(std::move(p0));
    }
    for (std::size_t i = 1; i < piece.points.size(); ++i) {
      TrajectoryPoint p = piece.points[i];
      ++global_step;
      const bool last = global_step == total_steps || (failed && i + 1 == piece.points.size());
      p.t = t0 + p.t;
      p.truncation_loss += loss;
      if (!last && global_step % record_every != 0) {
        knots.push_back(std::move(*p.field));
        continue;
      }
      const auto index = static_cast<int>(out.points.size());
      const bool keep = last || (options.snapshot_every > 0 && index % options.snapshot_every == 0);
      if (keep) knots.push_back(*p.field);
      else knots.push_back(std::move(*p.field));
      if (!keep) p.field.reset();
      out.points.push_back(std::move(p));
    }
    knots.insert(knots.begin(), state);
    loss += piece.truncation_loss;
    state = piece.final_field;
    out.last_valid_time = t0 + piece.last_valid_time;
    if (failed) {
      out.status = RunStatus::kBlowUpDetected;
      break;
    }
    previous = std::move(knots);
  }
  out.final_field = std::move(state);
  out.truncation_loss = loss;
  return out;
}

double coefficient_a1_bound(const TimeSeries& u_A0, double u0_A0, double u0_A1, double nu,
                            double t) {
  if (!(nu > 0.0)) throw Error(ErrorCode::kBoundUndefined, "bound requires nu > 0");
  return u0_A0 * u0_A0 / nu * std::exp(u_A0.integral(t, 2.0) / (2.0 * nu)) +
         u0_A1 * std::exp(-nu * t);
}

}  // namespace fcns
