#pragma once

// A priori bounds for solutions of the linear advection-diffusion system in
// terms of the seminorm histories of the advecting field, and a checker that
// compares them with a computed trajectory.

#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "fcns/linear_evolution.hpp"

namespace fcns {

/// Samples (t_i, value_i) with strictly increasing t_i starting at 0.
struct TimeSeries {
  std::vector<double> t;
  std::vector<double> value;

  static TimeSeries constant(double value, double T, int intervals = 1);

  /// Trapezoidal int_0^t_end value(s)^power ds. A partial last interval is
  /// handled by linear interpolation of the integrand. Throws
  /// kMissingHistory when the series does not reach t_end.
  double integral(double t_end, double power = 1.0) const;
  /// max value(s) over samples with s <= t_end.
  double sup(double t_end) const;
};

/// ||u_0||_{A,0} exp((1/4nu) int ||v||_{A,0}^2).
double bound_A0(double u0_A0, const TimeSeries& v_A0, double nu, double t);

/// ||u_0||_{A,1} exp(int ||v||_{A,1} + (1/4nu) int ||v||_{A,0}^2).
double bound_A1(double u0_A1, const TimeSeries& v_A1, const TimeSeries& v_A0, double nu, double t);

/// exp((1/4nu) int ||v||_{A,0}^2 + d int ||v||_{A,1})
///   * (||u_0||_{A,d} + sum_{j=2}^d C(d,j) int ||v||_{A,j} sup_s ||u||_{A,d+1-j}).
/// `v_norms` must hold degrees 0..d, `u_sup` degrees 1..d-1.
double bound_Ad(int d, double u0_Ad, const std::map<int, TimeSeries>& v_norms,
                const std::map<int, double>& u_sup, double nu, double t);

enum class DecayKind { kA0, kA1 };

/// ||u_0||_{A,0} e^{-delta t}, or ||u_0||_{A,1} exp(int ||v||_{A,1} - delta t).
/// The premise ||v||_{A,0} + delta <= nu is checked on the samples of `v_A0`
/// up to t; `v_A1` is required for kA1.
double bound_decay(double u0_norm, double delta, double nu, double t, DecayKind which,
                   const TimeSeries& v_A0, const std::optional<TimeSeries>& v_A1 = std::nullopt);

struct BoundRow {
  double t = 0.0;
  int d = 0;
  double measured = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool satisfied = true;
};

struct BoundReport {
  std::vector<BoundRow> rows;

  std::size_t violations() const;
  bool all_satisfied() const { return violations() == 0; }
  /// CSV with header `t,d,measured,bound,slack,satisfied`.
  void write_csv(std::ostream& os) const;
};

inline constexpr double kBoundTolerance = 1e-6;

/// Seminorm histories ||v||_{A,j}, j = 0..max_degree, of v sampled at `times`.
std::map<int, TimeSeries> advection_histories(const AdvectionSource& v,
                                              std::span<const double> times, int max_degree);

/// Compares the recorded ||u||_{A,d} with the bounds for every recorded time.
/// slack = kBoundTolerance * bound + (truncation loss up to t) * K_trunc^d.
BoundReport verify_bounds(const Trajectory& trajectory, const std::map<int, TimeSeries>& v_norms,
                          double nu, std::span<const int> degrees);
BoundReport verify_bounds(const Trajectory& trajectory, const AdvectionSource& v, double nu,
                          std::span<const int> degrees);

}  // namespace fcns
