#pragma once

// Time stepping for the coefficient system
//
//   d/dt a_k = -nu k^2 a_k + i sum_l <b_{k-l}, l> P_k a_l
//
// with a known advecting field v (coefficients b). Two schemes: the
// first-order splitting scheme (heat factor, b_0 phase and one advection
// transfer per subinterval) and an integrating-factor midpoint scheme that
// treats the heat term exactly.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fcns/spectral.hpp"

namespace fcns {

/// The known advecting field v(., t), given by its coefficient sampler.
struct AdvectionSource {
  std::function<FourierField(double)> sampler;
  /// When set, every sample is checked for <k, b_k> = 0.
  bool divergence_free = true;
  /// When set, every sample is checked for b_{-k} = conj(b_k).
  bool real = true;
  std::string name;

  /// Samples v at time t and enforces the declared properties.
  FourierField sample(double t) const;

  static AdvectionSource zero(int dimension);
  static AdvectionSource constant(FourierField v, std::string name = "constant");
};

/// Knots 0 = t_0 < t_1 < ... < t_N = T.
class TimePartition {
 public:
  explicit TimePartition(std::vector<double> knots);
  static TimePartition uniform(double T, int intervals);

  std::span<const double> knots() const { return knots_; }
  int intervals() const { return static_cast<int>(knots_.size()) - 1; }
  double final_time() const { return knots_.back(); }
  /// max_j (t_{j+1} - t_j); zero for a single-knot partition.
  double mesh() const;

 private:
  std::vector<double> knots_;
};

enum class RunStatus { kCompleted, kBlowUpDetected };

const char* to_string(RunStatus s);

struct TrajectoryPoint {
  double t = 0.0;
  SeminormRecord norms;
  std::optional<FourierField> field;  // present at snapshot knots
  double truncation_loss = 0.0;       // cumulative up to t
};

struct Trajectory {
  std::string scheme;
  double nu = 0.0;
  int dimension = 0;
  std::vector<TrajectoryPoint> points;
  FourierField final_field;
  RunStatus status = RunStatus::kCompleted;
  double last_valid_time = 0.0;
  double truncation_loss = 0.0;

  /// Time series of ||u||_{A,d} over the recorded points.
  std::vector<double> seminorm_series(double d) const;
  std::vector<double> times() const;
};

struct StepperOptions {
  /// Record seminorms every this many steps (the final step is always
  /// recorded).
  int record_every = 1;
  /// Keep a field snapshot every this many recorded points; 0 keeps only the
  /// first and the last.
  int snapshot_every = 1;
  std::vector<double> degrees{0.0, 1.0, 2.0, 3.0};
  /// ||u||_{A,0} above this (or non-finite) stops the run as a blow-up.
  double overflow_cap = kInfinity;
};

struct RhsResult {
  FourierField field;
  double truncation_loss = 0.0;  // sum of |P_k acc_k| over dropped k
};

/// i sum_l <b_{k-l}, l> P_k a_l over the stored modes of u and v; modes beyond
/// the truncation radius of u are dropped and their mass reported.
RhsResult bilinear_rhs_with_loss(const FourierField& u, const FourierField& v);
FourierField bilinear_rhs(const FourierField& u, const FourierField& v);

/// One splitting step over [t_j, t_{j+1}]: every mode is damped by
/// exp(-nu l^2 h) and turned by the b_0 phase exp(i <int b_0, l>), and the
/// transfer i <int b_{k-l}, l> P_k (damped a_l) is added for k != l. Time
/// integrals of b use two-point Gauss-Legendre quadrature.
RhsResult splitting_step_with_loss(const FourierField& u, const AdvectionSource& v, double t_j,
                                   double t_j1, double nu);
FourierField splitting_step(const FourierField& u, const AdvectionSource& v, double t_j,
                            double t_j1, double nu);

Trajectory solve_splitting(const FourierField& u0, const AdvectionSource& v, double nu,
                           const TimePartition& partition, const StepperOptions& options = {});

/// Advection that may depend on the current state: v(t) = rule(t, u(t)).
using AdvectionRule = std::function<FourierField(double t, const FourierField& state)>;

/// Integrating-factor midpoint scheme with round(T/dt) uniform steps:
///   u_mid = e^{-nu k^2 h/2} a + phi(h/2) G(a, v(t))
///   a'    = e^{-nu k^2 h} a   + phi(h)   G(u_mid, v(t + h/2))
/// where phi(h) = (1 - e^{-nu k^2 h}) / (nu k^2), or h when nu k^2 = 0.
Trajectory integrate_duhamel(const FourierField& u0, const AdvectionRule& rule, double nu, double T,
                             double dt, const StepperOptions& options, std::string scheme);

Trajectory solve_duhamel(const FourierField& u0, const AdvectionSource& v, double nu, double T,
                         double dt, const StepperOptions& options = {});

/// Sum over the union of modes: e^{-nu k^2 h} a_k + phi_k(h) g_k.
FourierField heat_combine(const FourierField& a, const FourierField& g, double nu, double h);

}  // namespace fcns
