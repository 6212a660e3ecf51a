#pragma once

// The periodic Navier-Stokes system as the linear system with v = -u, its
// time-delayed regularization, the break-down envelopes for ||u||_{A,0} and
// ||u||_{A,1}, and the blow-up monitor.

#include <optional>
#include <ostream>
#include <vector>

#include "fcns/bounds.hpp"
#include "fcns/linear_evolution.hpp"

namespace fcns {

enum class EnvelopeCase { kInfinite, kT0, kT1 };

const char* to_string(EnvelopeCase c);

/// Worst-case envelopes f0 >= ||u||_{A,0} and f1 >= ||u||_{A,1}:
///   f0(t) = sqrt(2 nu / (2 nu / A0^2 - t)),
///   f1(t) = 1 / (sqrt(c - 2t) (gamma + sqrt(c - 2t))),
/// c = 4 nu / A0^2, gamma = A0 / (2 sqrt(nu) A1) - 2 sqrt(nu) / A0.
struct BreakdownEnvelope {
  double nu = 0.0;
  double u0_A0 = 0.0;
  double u0_A1 = 0.0;
  double c = kInfinity;
  double gamma = 0.0;
  double T0 = kInfinity;
  /// The three-case existence time formula's third branch,
  /// 1/A1 - A0^2/(8 nu A1^2) - 3 nu/(2 A0^2); present in the kT1 case.
  std::optional<double> T1;
  /// Where gamma + sqrt(c - 2t) vanishes, (c - gamma^2)/2; present in the kT1
  /// case.
  std::optional<double> f1_singularity;
  EnvelopeCase kind = EnvelopeCase::kInfinite;
  /// Set when T1 is present but outside (0, T0).
  bool degenerate = false;

  /// Infinite from T0 on.
  double f0(double t) const;
  /// Infinite from the first singularity (T0, or f1_singularity) on.
  double f1(double t) const;
};

BreakdownEnvelope breakdown_envelope(double u0_A0, double u0_A1, double nu);

/// Infinite for u0_A0 <= nu, else 2 nu / u0_A0^2.
double t_star_lower_bound(double u0_A0, double nu);

enum class BlowupStatus { kCompleted, kEnvelopeExceeded, kNormOverflow };

const char* to_string(BlowupStatus s);

struct BlowupReport {
  BlowupStatus status = BlowupStatus::kCompleted;
  double last_valid_time = 0.0;
  TimeSeries A0_history;
  std::vector<double> envelope_history;  // f0 at the A0_history times
  std::vector<bool> exceeded;
  std::optional<double> first_exceedance;
  double t_star_lower = kInfinity;

  /// CSV `t,A0_measured,f0_envelope,exceeded` preceded by a comment line with
  /// the envelope parameters.
  void write_csv(std::ostream& os, const BreakdownEnvelope& envelope) const;
};

/// Flags the first time ||u||_{A,0} exceeds f0(t)(1 + tol) plus the recorded
/// truncation loss, and the first time it exceeds `overflow_cap` (or the run
/// itself stopped on overflow).
BlowupReport breakdown_monitor(const Trajectory& trajectory, const BreakdownEnvelope& envelope,
                               double overflow_cap = kInfinity, double tol = kBoundTolerance);

struct NsRun {
  Trajectory trajectory;
  std::optional<BreakdownEnvelope> envelope;  // absent for nu = 0
  BlowupReport report;
};

/// Integrating-factor midpoint solve of the truncated system with b = -a. The
/// default overflow cap is 1e6 ||u_0||_{A,0} unless `options` sets one.
NsRun solve_ns(const FourierField& u0, double nu, double T, double dt, StepperOptions options = {});

/// du/dt = nu Lap u - P[u(t - eps) . grad u(t)], u = u_0 on [-eps, 0]. Each
/// eps-block is a linear solve whose advection interpolates the previous
/// block's states; dt must divide eps.
Trajectory solve_time_delayed(const FourierField& u0, double nu, double eps, double T, double dt,
                              const StepperOptions& options = {});

/// nu^{-1} A0^2 exp((1/2nu) int ||u||_{A,0}^2) + A1 e^{-nu t}.
double coefficient_a1_bound(const TimeSeries& u_A0, double u0_A0, double u0_A1, double nu,
                            double t);

}  // namespace fcns
