#include "fcns/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fcns/builtins.hpp"
#include "fcns/linear_evolution.hpp"
#include "mode_accumulator.hpp"

namespace fcns {

namespace {

constexpr Complex kMinusI{0.0, -1.0};

// -i sum_l <f_{k-l}, k> P_k f_l, i.e. the coefficient right-hand side with
// b = -f in the <., k> form used by the contraction estimate.
FourierField self_advection(const FourierField& f, double truncation_radius) {
  const int n = f.dimension();
  if (f.empty()) return FourierField(n, truncation_radius);
  const auto box = detail::bounding_box(f);
  detail::ModeAccumulator acc(n, detail::sum_box(box, box, n));
  for (const auto& bm : f.modes()) {
    for (const auto& al : f.modes()) {
      const WaveVector k = bm.k + al.k;
      const Complex dot = pair(bm.a, k);
      if (dot == 0.0) continue;
      acc.add_scaled(k, kMinusI * dot, al.a);
    }
  }
  auto collected = acc.collect(truncation_radius, true);
  return FourierField::from_modes(n, truncation_radius, std::move(collected.kept));
}

// Distinct values k^2 <= r2 over k in Z^n \ {0}.
std::vector<std::int64_t> attainable_squared_norms(int n, std::int64_t r2) {
  std::vector<char> reach(static_cast<std::size_t>(r2) + 1, 0);
  reach[0] = 1;
  for (int dim = 0; dim < n; ++dim) {
    std::vector<char> next(reach.size(), 0);
    for (std::int64_t a = 0; a <= r2; ++a) {
      if (!reach[a]) continue;
      for (std::int64_t j = 0; a + j * j <= r2; ++j) next[a + j * j] = 1;
    }
    reach = std::move(next);
  }
  std::vector<std::int64_t> out;
  for (std::int64_t m = 1; m <= r2; ++m) {
    if (reach[m]) out.push_back(m);
  }
  return out;
}

}  // namespace

double path_norm_M(const CoefficientPath& f) {
  std::map<WaveVector, double> peak;
  for (const auto& state : f.states) {
    for (const auto& m : state.modes()) {
      double& p = peak[m.k];
      p = std::max(p, m.a.norm());
    }
  }
  double sum = 0.0;
  for (const auto& [k, p] : peak) sum += p;
  return sum;
}

CoefficientPath path_difference(const CoefficientPath& f, const CoefficientPath& g) {
  if (f.times != g.times) {
    throw Error(ErrorCode::kGridIncompatible, "paths are sampled on different grids");
  }
  CoefficientPath d;
  d.times = f.times;
  d.states.reserve(f.states.size());
  for (std::size_t i = 0; i < f.states.size(); ++i) d.states.push_back(subtract(f.states[i], g.states[i]));
  return d;
}

std::vector<double> FixedPointSpace::knots() const {
  std::vector<double> t(static_cast<std::size_t>(intervals) + 1);
  for (int j = 0; j <= intervals; ++j) t[j] = T * j / intervals;
  return t;
}

double horizon_function(int n, double truncation_radius, double nu, double t) {
  if (std::isinf(truncation_radius)) {
    throw Error(ErrorCode::kPreconditionViolated, "horizon needs a finite truncation radius");
  }
  const auto r2 = static_cast<std::int64_t>(std::floor(truncation_radius * truncation_radius + 1e-9));
  double best = 0.0;
  for (std::int64_t m : attainable_squared_norms(n, r2)) {
    const double k2 = static_cast<double>(m);
    best = std::max(best, -std::expm1(-nu * k2 * t) / (nu * std::sqrt(k2)));
  }
  return best;
}

FixedPointSpace make_fixed_point_space(const FourierField& u0, double nu, double dt, double T_max) {
  if (!(nu > 0.0)) throw Error(ErrorCode::kBoundUndefined, "fixed-point space needs nu > 0");
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidInterval, "dt must be > 0");
  FixedPointSpace space;
  space.nu = nu;
  space.u0_norm = seminorm_A(u0, 0.0) + mean_magnitude(u0);
  if (!(space.u0_norm > 0.0)) {
    throw Error(ErrorCode::kPreconditionViolated, "zero initial data: the solution is constant");
  }
  space.L = 1.0 / (5.0 * space.u0_norm);
  space.radius = 2.0 * space.u0_norm;
  space.truncation_radius = u0.truncation_radius();
  const int n = u0.dimension();
  auto g = [&](double t) { return horizon_function(n, space.truncation_radius, nu, t); };

  double hi = std::isinf(T_max) ? 1.0 : T_max;
  if (std::isinf(T_max)) {
    while (g(hi) <= space.L && hi < 1e6) hi *= 2.0;
  }
  double t_star = hi;
  if (g(hi) > space.L) {
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) <= space.L ? lo : hi) = mid;
    }
    t_star = lo;
  }
  space.intervals = static_cast<int>(std::floor(t_star / dt * (1.0 + 1e-12)));
  if (space.intervals < 1) {
    throw Error(ErrorCode::kGridIncompatible, "dt exceeds the contraction horizon");
  }
  space.T = space.intervals * dt;
  return space;
}

CoefficientPath heat_flow_path(const FourierField& u0, const FixedPointSpace& space) {
  CoefficientPath p;
  p.times = space.knots();
  const FourierField base = u0.with_truncation(space.truncation_radius);
  for (double t : p.times) {
    std::vector<Mode> modes(base.modes().begin(), base.modes().end());
    for (auto& m : modes) m.a *= std::exp(-space.nu * static_cast<double>(m.k.norm2()) * t);
    p.states.push_back(FourierField::from_modes(base.dimension(), space.truncation_radius, std::move(modes)));
  }
  return p;
}

CoefficientPath duhamel_map_S(const CoefficientPath& f, const FourierField& u0,
                              const FixedPointSpace& space) {
  if (f.states.empty() || f.states.size() != f.times.size()) {
    throw Error(ErrorCode::kGridIncompatible, "path needs one state per time");
  }
  const double norm = path_norm_M(f);
  if (norm > space.radius * (1.0 + 1e-12)) {
    throw Error(ErrorCode::kOutsideBall, "||f||_M = " + std::to_string(norm) +
                                             " exceeds the ball radius " + std::to_string(space.radius));
  }
  CoefficientPath out;
  out.times = f.times;
  out.states.reserve(f.states.size());
  out.states.push_back(u0.with_truncation(space.truncation_radius));
  for (std::size_t j = 0; j + 1 < f.states.size(); ++j) {
    const double h = f.times[j + 1] - f.times[j];
    const FourierField avg = scale(add(f.states[j], f.states[j + 1]), 0.5);
    const FourierField g = self_advection(avg, space.truncation_radius);
    out.states.push_back(heat_combine(out.states.back(), g, space.nu, h));
  }
  return out;
}

double contraction_estimate(const CoefficientPath& f, const CoefficientPath& g,
                            const FourierField& u0, const FixedPointSpace& space) {
  const double denom = path_norm_M(path_difference(f, g));
  if (denom == 0.0) throw Error(ErrorCode::kIdenticalPaths, "f and g coincide");
  const CoefficientPath sf = duhamel_map_S(f, u0, space);
  const CoefficientPath sg = duhamel_map_S(g, u0, space);
  return path_norm_M(path_difference(sf, sg)) / denom;
}

CoefficientPath random_path_in_ball(const FixedPointSpace& space, int dimension, std::uint64_t seed,
                                    double fraction, int box) {
  const FourierField x = random_divergence_free_field(dimension, box, space.truncation_radius, seed);
  const FourierField y =
      random_divergence_free_field(dimension, box, space.truncation_radius, seed ^ 0x5851f42d4c957f2dULL);
  CoefficientPath p;
  p.times = space.knots();
  for (double t : p.times) p.states.push_back(add(scale(x, std::cos(t)), scale(y, std::sin(t))));
  const double norm = path_norm_M(p);
  if (norm > 0.0) {
    for (auto& s : p.states) s = scale(s, fraction * space.radius / norm);
  }
  return p;
}

PicardResult picard_iterate(const FourierField& u0, const FixedPointSpace& space, double tol,
                            int max_iterations) {
  PicardResult r;
  r.path = heat_flow_path(u0, space);
  for (r.iterations = 1; r.iterations <= max_iterations; ++r.iterations) {
    CoefficientPath next = duhamel_map_S(r.path, u0, space);
    r.last_increment = path_norm_M(path_difference(next, r.path));
    r.path = std::move(next);
    if (r.last_increment <= tol) break;
  }
  r.iterations = std::min(r.iterations, max_iterations);
  return r;
}

}  // namespace fcns
