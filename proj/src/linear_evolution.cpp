#include "fcns/linear_evolution.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>

#include "fcns/leray.hpp"
#include "mode_accumulator.hpp"

namespace fcns {

namespace {

constexpr Complex kI{0.0, 1.0};

double max_coefficient(const FourierField& f) {
  double m = 0.0;
  for (const auto& mode : f.modes()) m = std::max(m, mode.a.norm());
  return m;
}

void require_same_dimension(const FourierField& u, const FourierField& v) {
  if (u.dimension() != v.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "fields of dimension " + std::to_string(u.dimension()) +
                                                   " and " + std::to_string(v.dimension()));
  }
}

bool should_snapshot(int index, bool last, int snapshot_every) {
  if (index == 0 || last) return true;
  return snapshot_every > 0 && index % snapshot_every == 0;
}

void record_point(Trajectory& traj, const FourierField& u, double t, double loss, bool last,
                  const StepperOptions& options) {
  TrajectoryPoint p;
  p.t = t;
  p.norms = seminorm_record(u, t, options.degrees);
  p.truncation_loss = loss;
  if (should_snapshot(static_cast<int>(traj.points.size()), last, options.snapshot_every)) {
    p.field = u;
  }
  traj.points.push_back(std::move(p));
}

bool overflowed(const FourierField& u, double cap) {
  const double a0 = seminorm_A(u, 0.0);
  return !std::isfinite(a0) || a0 > cap || !u.is_finite();
}

}  // namespace

FourierField AdvectionSource::sample(double t) const {
  FourierField v = sampler(t);
  if (divergence_free && !is_divergence_free(v, 1e-10)) {
    throw Error(ErrorCode::kNotDivergenceFree,
                "advection '" + name + "' is not divergence-free at t = " + std::to_string(t));
  }
  if (real && reality_defect(v) > 1e-12 * (1.0 + max_coefficient(v))) {
    throw Error(ErrorCode::kPreconditionViolated,
                "advection '" + name + "' is not real at t = " + std::to_string(t));
  }
  return v;
}

AdvectionSource AdvectionSource::zero(int dimension) {
  return {[dimension](double) { return FourierField(dimension); }, true, true, "zero"};
}

AdvectionSource AdvectionSource::constant(FourierField v, std::string name) {
  const bool div_free = is_divergence_free(v, 1e-10);
  const bool is_real = reality_defect(v) <= 1e-12 * (1.0 + max_coefficient(v));
  return {[v = std::move(v)](double) { return v; }, div_free, is_real, std::move(name)};
}

TimePartition::TimePartition(std::vector<double> knots) : knots_(std::move(knots)) {
  if (knots_.empty() || knots_.front() != 0.0) {
    throw Error(ErrorCode::kInvalidInterval, "partition must start at t = 0");
  }
  for (std::size_t j = 1; j < knots_.size(); ++j) {
    if (!(knots_[j] > knots_[j - 1])) {
      throw Error(ErrorCode::kInvalidInterval, "partition knots must be strictly increasing");
    }
  }
}

TimePartition TimePartition::uniform(double T, int intervals) {
  if (intervals < 0 || T < 0.0 || (intervals > 0 && !(T > 0.0))) {
    throw Error(ErrorCode::kInvalidInterval, "uniform partition needs T > 0 and N >= 1");
  }
  std::vector<double> knots(static_cast<std::size_t>(intervals) + 1);
  for (int j = 0; j <= intervals; ++j) knots[j] = T * j / intervals;
  if (intervals == 0) knots = {0.0};
  return TimePartition(std::move(knots));
}

double TimePartition::mesh() const {
  double m = 0.0;
  for (std::size_t j = 1; j < knots_.size(); ++j) m = std::max(m, knots_[j] - knots_[j - 1]);
  return m;
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kCompleted: return "completed";
    case RunStatus::kBlowUpDetected: return "blow_up_detected";
  }
  return "unknown";
}

std::vector<double> Trajectory::seminorm_series(double d) const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    auto it = p.norms.values.find(d);
    if (it == p.norms.values.end()) {
      throw Error(ErrorCode::kMissingHistory,
                  "trajectory has no record of degree " + std::to_string(d));
    }
    out.push_back(it->second);
  }
  return out;
}

std::vector<double> Trajectory::times() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.t);
  return out;
}

RhsResult bilinear_rhs_with_loss(const FourierField& u, const FourierField& v) {
  require_same_dimension(u, v);
  const int n = u.dimension();
  if (u.empty() || v.empty()) return {FourierField(n, u.truncation_radius()), 0.0};

  detail::ModeAccumulator acc(n, detail::sum_box(detail::bounding_box(v), detail::bounding_box(u), n));
#ifndef NDEBUG
  const bool check_pairing = is_divergence_free(v, 1e-12);
#endif
  if (acc.dense()) {
    std::vector<std::ptrdiff_t> cell_u;
    cell_u.reserve(u.size());
    for (const auto& al : u.modes()) cell_u.push_back(acc.offset(al.k));
    const auto um = u.modes();
    for (const auto& bm : v.modes()) {
      const std::ptrdiff_t base = acc.offset(bm.k) - acc.origin();
      for (std::size_t j = 0; j < um.size(); ++j) {
        const Complex dot = pair(bm.a, um[j].k);
        if (dot == 0.0) continue;
#ifndef NDEBUG
        if (check_pairing) {
          // For div v = 0 the <b_{k-l}, l> and <b_{k-l}, k> forms coincide.
          const WaveVector k = bm.k + um[j].k;
          assert(std::abs(dot - pair(bm.a, k)) <= 1e-9 * (1.0 + bm.a.norm() * k.norm()));
        }
#endif
        acc.add_scaled_at(base + cell_u[j], kI * dot, um[j].a);
      }
    }
  } else {
    for (const auto& bm : v.modes()) {
      for (const auto& al : u.modes()) {
        const Complex dot = pair(bm.a, al.k);
        if (dot == 0.0) continue;
        const WaveVector k = bm.k + al.k;
#ifndef NDEBUG
        if (check_pairing) {
          assert(std::abs(dot - pair(bm.a, k)) <= 1e-9 * (1.0 + bm.a.norm() * k.norm()));
        }
#endif
        acc.add_scaled(k, kI * dot, al.a);
      }
    }
  }
  auto collected = acc.collect(u.truncation_radius(), true);
  return {FourierField::from_modes(n, u.truncation_radius(), std::move(collected.kept)),
          collected.dropped};
}

FourierField bilinear_rhs(const FourierField& u, const FourierField& v) {
  return bilinear_rhs_with_loss(u, v).field;
}

RhsResult splitting_step_with_loss(const FourierField& u, const AdvectionSource& v, double t_j,
                                   double t_j1, double nu) {
  if (!(t_j1 > t_j)) {
    throw Error(ErrorCode::kInvalidInterval, "splitting step needs t_{j+1} > t_j");
  }
  const int n = u.dimension();
  const double h = t_j1 - t_j;
  const double mid = 0.5 * (t_j + t_j1);
  const double offset = h / (2.0 * std::numbers::sqrt3);
  const FourierField v_minus = v.sample(mid - offset);
  const FourierField v_plus = v.sample(mid + offset);
  require_same_dimension(u, v_minus);
  // int_{t_j}^{t_j1} b(s) ds by two-point Gauss-Legendre.
  const FourierField b_int = scale(add(v_minus, v_plus), 0.5 * h);
  const CVector b0_int = b_int.coefficient(WaveVector(n));

  std::vector<Mode> damped(u.modes().begin(), u.modes().end());
  for (auto& m : damped) {
    const double decay = -nu * static_cast<double>(m.k.norm2()) * h;
    m.a *= std::exp(Complex(decay, 0.0) + kI * pair(b0_int, m.k));
  }
  if (u.empty() || b_int.empty()) {
    return {FourierField::from_modes(n, u.truncation_radius(), std::move(damped)), 0.0};
  }

  detail::ModeAccumulator acc(n, detail::sum_box(detail::bounding_box(b_int),
                                                 detail::bounding_box(u), n));
  for (const auto& bm : b_int.modes()) {
    if (bm.k.is_zero()) continue;  // the l = k term is the phase above
    for (const auto& al : damped) {
      const Complex dot = pair(bm.a, al.k);
      if (dot == 0.0) continue;
      acc.add_scaled(bm.k + al.k, kI * dot, al.a);
    }
  }
  auto transfer = acc.collect(u.truncation_radius(), true);
  const FourierField diagonal = FourierField::from_modes(n, u.truncation_radius(), std::move(damped));
  const FourierField moved =
      FourierField::from_modes(n, u.truncation_radius(), std::move(transfer.kept));
  return {add(diagonal, moved), transfer.dropped};
}

FourierField splitting_step(const FourierField& u, const AdvectionSource& v, double t_j,
                            double t_j1, double nu) {
  return splitting_step_with_loss(u, v, t_j, t_j1, nu).field;
}

Trajectory solve_splitting(const FourierField& u0, const AdvectionSource& v, double nu,
                           const TimePartition& partition, const StepperOptions& options) {
  if (nu < 0.0) throw Error(ErrorCode::kPreconditionViolated, "nu must be >= 0");
  Trajectory traj;
  traj.scheme = "splitting";
  traj.nu = nu;
  traj.dimension = u0.dimension();

  const auto knots = partition.knots();
  const int steps = partition.intervals();
  FourierField u = u0;
  double loss = 0.0;
  record_point(traj, u, 0.0, loss, steps == 0, options);
  for (int j = 0; j < steps; ++j) {
    auto step = splitting_step_with_loss(u, v, knots[j], knots[j + 1], nu);
    if (overflowed(step.field, options.overflow_cap)) {
      traj.status = RunStatus::kBlowUpDetected;
      break;
    }
    u = std::move(step.field);
    loss += step.truncation_loss;
    traj.last_valid_time = knots[j + 1];
    const bool last = j + 1 == steps;
    if (last || (j + 1) % std::max(1, options.record_every) == 0) {
      record_point(traj, u, knots[j + 1], loss, last, options);
    }
  }
  if (traj.status == RunStatus::kBlowUpDetected && traj.points.back().t != traj.last_valid_time) {
    record_point(traj, u, traj.last_valid_time, loss, true, options);
  }
  traj.final_field = std::move(u);
  traj.truncation_loss = loss;
  return traj;
}

FourierField heat_combine(const FourierField& a, const FourierField& g, double nu, double h) {
  const int n = a.dimension();
  std::vector<Mode> out;
  out.reserve(a.size() + g.size());
  auto ia = a.modes().begin();
  auto ig = g.modes().begin();
  const auto ea = a.modes().end();
  const auto eg = g.modes().end();
  auto emit = [&](const WaveVector& k, const CVector* ak, const CVector* gk) {
    const double rate = nu * static_cast<double>(k.norm2());
    CVector r(n);
    if (ak) r = std::exp(-rate * h) * *ak;
    if (gk) {
      const double phi = rate == 0.0 ? h : -std::expm1(-rate * h) / rate;
      r += phi * *gk;
    }
    out.push_back({k, r});
  };
  while (ia != ea || ig != eg) {
    if (ig == eg || (ia != ea && ia->k < ig->k)) {
      emit(ia->k, &ia->a, nullptr);
      ++ia;
    } else if (ia == ea || ig->k < ia->k) {
      emit(ig->k, nullptr, &ig->a);
      ++ig;
    } else {
      emit(ia->k, &ia->a, &ig->a);
      ++ia;
      ++ig;
    }
  }
  return FourierField::from_modes(n, a.truncation_radius(), std::move(out));
}

Trajectory integrate_duhamel(const FourierField& u0, const AdvectionRule& rule, double nu, double T,
                             double dt, const StepperOptions& options, std::string scheme) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidInterval, "dt must be > 0");
  if (T < 0.0) throw Error(ErrorCode::kInvalidInterval, "T must be >= 0");
  if (nu < 0.0) throw Error(ErrorCode::kPreconditionViolated, "nu must be >= 0");

  Trajectory traj;
  traj.scheme = std::move(scheme);
  traj.nu = nu;
  traj.dimension = u0.dimension();

  const long steps = std::lround(T / dt);
  const double h = steps > 0 ? T / static_cast<double>(steps) : 0.0;
  const int record_every = std::max(1, options.record_every);
  FourierField u = u0;
  double loss = 0.0;
  record_point(traj, u, 0.0, loss, steps == 0, options);
  for (long s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * h;
    const RhsResult g0 = bilinear_rhs_with_loss(u, rule(t, u));
    const FourierField u_mid = heat_combine(u, g0.field, nu, 0.5 * h);
    const RhsResult g1 = bilinear_rhs_with_loss(u_mid, rule(t + 0.5 * h, u_mid));
    FourierField next = heat_combine(u, g1.field, nu, h);
    if (overflowed(next, options.overflow_cap)) {
      traj.status = RunStatus::kBlowUpDetected;
      break;
    }
    u = std::move(next);
    loss += h * g1.truncation_loss;
    const bool last = s + 1 == steps;
    const double t_next = last ? T : static_cast<double>(s + 1) * h;
    traj.last_valid_time = t_next;
    if (last || (s + 1) % record_every == 0) record_point(traj, u, t_next, loss, last, options);
  }
  if (traj.status == RunStatus::kBlowUpDetected && traj.points.back().t != traj.last_valid_time) {
    record_point(traj, u, traj.last_valid_time, loss, true, options);
  }
  traj.final_field = std::move(u);
  traj.truncation_loss = loss;
  return traj;
}

Trajectory solve_duhamel(const FourierField& u0, const AdvectionSource& v, double nu, double T,
                         double dt, const StepperOptions& options) {
  return integrate_duhamel(
      u0, [&v](double t, const FourierField&) { return v.sample(t); }, nu, T, dt, options,
      "duhamel");
}

}  // namespace fcns
