#include "fcns/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fcns {

namespace {

void require_positive_nu(double nu) {
  if (!(nu > 0.0)) throw Error(ErrorCode::kBoundUndefined, "bounds require nu > 0");
}

double binomial(int d, int j) {
  double c = 1.0;
  for (int i = 1; i <= j; ++i) c = c * (d - j + i) / i;
  return c;
}

// Tolerance for deciding that a requested time coincides with the last sample.
constexpr double kTimeSlack = 1e-12;

}  // namespace

TimeSeries TimeSeries::constant(double value, double T, int intervals) {
  TimeSeries s;
  for (int i = 0; i <= intervals; ++i) {
    s.t.push_back(T * i / intervals);
    s.value.push_back(value);
  }
  return s;
}

double TimeSeries::integral(double t_end, double power) const {
  if (t_end <= 0.0) return 0.0;
  if (t.empty() || t.back() < t_end - kTimeSlack * std::max(1.0, t_end)) {
    throw Error(ErrorCode::kMissingHistory,
                "history does not reach t = " + std::to_string(t_end));
  }
  auto f = [power](double x) { return power == 1.0 ? x : std::pow(x, power); };
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double a = t[i - 1];
    if (a >= t_end) break;
    const double b = std::min(t[i], t_end);
    double fb = f(value[i]);
    if (b < t[i]) {
      const double w = (b - a) / (t[i] - a);
      fb = (1.0 - w) * f(value[i - 1]) + w * f(value[i]);
    }
    acc += 0.5 * (b - a) * (f(value[i - 1]) + fb);
  }
  return acc;
}

double TimeSeries::sup(double t_end) const {
  double m = 0.0;
  for (std::size_t i = 0; i < t.size() && t[i] <= t_end + kTimeSlack * std::max(1.0, t_end); ++i) {
    m = std::max(m, value[i]);
  }
  return m;
}

double bound_A0(double u0_A0, const TimeSeries& v_A0, double nu, double t) {
  require_positive_nu(nu);
  return u0_A0 * std::exp(v_A0.integral(t, 2.0) / (4.0 * nu));
}

double bound_A1(double u0_A1, const TimeSeries& v_A1, const TimeSeries& v_A0, double nu, double t) {
  require_positive_nu(nu);
  return u0_A1 * std::exp(v_A1.integral(t) + v_A0.integral(t, 2.0) / (4.0 * nu));
}

double bound_Ad(int d, double u0_Ad, const std::map<int, TimeSeries>& v_norms,
                const std::map<int, double>& u_sup, double nu, double t) {
  require_positive_nu(nu);
  if (d < 2) throw Error(ErrorCode::kPreconditionViolated, "bound_Ad needs d >= 2");
  auto v_hist = [&](int j) -> const TimeSeries& {
    auto it = v_norms.find(j);
    if (it == v_norms.end()) {
      throw Error(ErrorCode::kMissingHistory, "missing ||v||_{A," + std::to_string(j) + "} history");
    }
    return it->second;
  };
  double correction = 0.0;
  for (int j = 2; j <= d; ++j) {
    auto it = u_sup.find(d + 1 - j);
    if (it == u_sup.end()) {
      throw Error(ErrorCode::kMissingHistory,
                  "missing sup ||u||_{A," + std::to_string(d + 1 - j) + "}");
    }
    correction += binomial(d, j) * v_hist(j).integral(t) * it->second;
  }
  const double exponent = v_hist(0).integral(t, 2.0) / (4.0 * nu) + d * v_hist(1).integral(t);
  return std::exp(exponent) * (u0_Ad + correction);
}

double bound_decay(double u0_norm, double delta, double nu, double t, DecayKind which,
                   const TimeSeries& v_A0, const std::optional<TimeSeries>& v_A1) {
  require_positive_nu(nu);
  if (delta < 0.0) throw Error(ErrorCode::kPreconditionViolated, "delta must be >= 0");
  if (v_A0.t.empty() && t > 0.0) {
    throw Error(ErrorCode::kMissingHistory, "decay bound needs the ||v||_{A,0} history");
  }
  if (v_A0.sup(t) + delta > nu * (1.0 + 1e-12)) {
    throw Error(ErrorCode::kPreconditionViolated,
                "||v||_{A,0} + delta exceeds nu on [0, " + std::to_string(t) + "]");
  }
  if (which == DecayKind::kA0) return u0_norm * std::exp(-delta * t);
  if (!v_A1) throw Error(ErrorCode::kMissingHistory, "decay bound for A,1 needs ||v||_{A,1}");
  return u0_norm * std::exp(v_A1->integral(t) - delta * t);
}

std::size_t BoundReport::violations() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const BoundRow& r) { return !r.satisfied; }));
}

void BoundReport::write_csv(std::ostream& os) const {
  os << "t,d,measured,bound,slack,satisfied\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%.17g,%d,%.17g,%.17g,%.17g,%d\n", r.t, r.d, r.measured,
                  r.bound, r.slack, r.satisfied ? 1 : 0);
    os << line;
  }
}

std::map<int, TimeSeries> advection_histories(const AdvectionSource& v,
                                              std::span<const double> times, int max_degree) {
  std::map<int, TimeSeries> out;
  for (int j = 0; j <= max_degree; ++j) out[j].t.assign(times.begin(), times.end());
  for (double t : times) {
    const FourierField sample = v.sample(t);
    for (int j = 0; j <= max_degree; ++j) out[j].value.push_back(seminorm_A(sample, j));
  }
  return out;
}

BoundReport verify_bounds(const Trajectory& trajectory, const std::map<int, TimeSeries>& v_norms,
                          double nu, std::span<const int> degrees) {
  require_positive_nu(nu);
  BoundReport report;
  if (trajectory.points.empty() || degrees.empty()) return report;

  const int max_d = *std::max_element(degrees.begin(), degrees.end());
  // The d >= 2 bounds need sup ||u||_{A,m} for m < d, so the measured series
  // of every degree up to max_d must be present.
  std::map<int, std::vector<double>> measured;
  for (int d = 0; d <= max_d; ++d) {
    const bool requested = std::find(degrees.begin(), degrees.end(), d) != degrees.end();
    if (requested || (d >= 1 && d < max_d && max_d >= 2)) {
      measured[d] = trajectory.seminorm_series(d);
    }
  }
  const double radius = trajectory.final_field.truncation_radius();
  const auto& pts = trajectory.points;

  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double t = pts[i].t;
    for (int d : degrees) {
      if (d < 0) throw Error(ErrorCode::kPreconditionViolated, "degrees must be >= 0");
      double bound = 0.0;
      const double u0 = measured.at(d).front();
      if (d == 0) {
        bound = bound_A0(u0, v_norms.at(0), nu, t);
      } else if (d == 1) {
        bound = bound_A1(u0, v_norms.at(1), v_norms.at(0), nu, t);
      } else {
        std::map<int, double> u_sup;
        for (int m = 1; m < d; ++m) {
          const auto& series = measured.at(m);
          u_sup[m] = *std::max_element(series.begin(), series.begin() + static_cast<long>(i) + 1);
        }
        bound = bound_Ad(d, u0, v_norms, u_sup, nu, t);
      }
      const double loss = pts[i].truncation_loss;
      const double slack = kBoundTolerance * bound + (loss > 0.0 ? loss * std::pow(radius, d) : 0.0);
      const double value = measured.at(d)[i];
      report.rows.push_back({t, d, value, bound, slack, value <= bound + slack});
    }
  }
  return report;
}

BoundReport verify_bounds(const Trajectory& trajectory, const AdvectionSource& v, double nu,
                          std::span<const int> degrees) {
  if (degrees.empty()) return {};
  const int max_d = std::max(1, *std::max_element(degrees.begin(), degrees.end()));
  const auto times = trajectory.times();
  return verify_bounds(trajectory, advection_histories(v, times, max_d), nu, degrees);
}

}  // namespace fcns
