#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "fcns/bounds.hpp"
#include "fcns/builtins.hpp"
#include "fcns/linear_evolution.hpp"
#include "fcns/oracles.hpp"
#include "test_util.hpp"

using namespace fcns;
using fcns::testing::max_difference;

namespace {

FourierField single_mode(const WaveVector& k, const CVector& a, double trunc = kInfinity) {
  return FourierField::from_modes(k.n, trunc, {{k, a}});
}

// The single-mode advection configuration: a_k(0) = (0,1,0) at k = e_1,
// advected by b_l = (beta,0,0) at l = e_3 and its conjugate at -l.
struct BesselSetup {
  WaveVector k{1, 0, 0};
  WaveVector l{0, 0, 1};
  CVector a{0.0, 1.0, 0.0};
  CVector b{1.0, 0.0, 0.0};
  FourierField u0(double trunc = std::sqrt(1.0 + 30.0 * 30.0)) const { return single_mode(k, a, trunc); }
  AdvectionSource v() const { return bessel_advection(l, b); }
};

BuiltinParams small_params(int n, std::uint64_t seed, double amplitude, double trunc = 6.0) {
  BuiltinParams p;
  p.dimension = n;
  p.truncation_radius = trunc;
  p.seed = seed;
  p.amplitude = amplitude;
  return p;
}

StepperOptions final_only() {
  StepperOptions o;
  o.record_every = 1 << 30;
  o.snapshot_every = 0;
  o.degrees = {0.0};
  return o;
}

}  // namespace

TEST_CASE("advection sources enforce their declared properties") {
  const FourierField gradient = FourierField::from_modes(2, kInfinity, {{{1, 0}, {1.0, 0.0}}, {{-1, 0}, {1.0, 0.0}}});
  const AdvectionSource bad{[gradient](double) { return gradient; }, true, true, "gradient"};
  CHECK_THROWS_AS(bad.sample(0.0), Error);
  const AdvectionSource detected = AdvectionSource::constant(gradient);
  CHECK_FALSE(detected.divergence_free);
  const FourierField complex_mode = FourierField::from_modes(2, kInfinity, {{{1, 0}, {0.0, 1.0}}});
  CHECK_FALSE(AdvectionSource::constant(complex_mode).real);
  CHECK(AdvectionSource::zero(3).sample(1.0).empty());
}

TEST_CASE("time partitions") {
  const TimePartition p = TimePartition::uniform(1.0, 4);
  CHECK(p.intervals() == 4);
  CHECK(p.final_time() == 1.0);
  CHECK(p.mesh() == doctest::Approx(0.25));
  CHECK_THROWS_AS(TimePartition({0.0, 0.5, 0.5}), Error);
  CHECK_THROWS_AS(TimePartition({0.1, 0.5}), Error);
  CHECK(TimePartition::uniform(0.0, 0).intervals() == 0);
}

TEST_CASE("bilinear right-hand side examples") {
  const FourierField u = single_mode({1, 0, 0}, {0.0, 1.0, 0.0});
  CHECK(bilinear_rhs(u, FourierField(3)).empty());

  // <b_m, k> = 0: the transfer vanishes.
  const FourierField orthogonal = FourierField::from_modes(3, kInfinity, {{{0, 1, 0}, {0.0, 0.0, 1.0}}});
  const FourierField r0 = bilinear_rhs(u, orthogonal);
  for (const auto& m : r0.modes()) CHECK(m.a.norm() == 0.0);

  const BesselSetup s;
  const double beta = 0.7;
  const FourierField v = bessel_advection(s.l, {beta, 0.0, 0.0}).sample(0.0);
  const FourierField r = bilinear_rhs(s.u0(kInfinity), v);
  REQUIRE(r.size() == 2);
  const CVector expected{0.0, Complex(0.0, beta), 0.0};
  CHECK((r.coefficient({1, 0, 1}) - expected).norm() <= 1e-15);
  CHECK((r.coefficient({1, 0, -1}) - expected).norm() <= 1e-15);
}

TEST_CASE("bilinear right-hand side truncates and reports the dropped mass") {
  const BesselSetup s;
  const FourierField u = s.u0(1.0);
  const RhsResult r = bilinear_rhs_with_loss(u, s.v().sample(0.0));
  CHECK(r.field.empty());
  CHECK(r.truncation_loss == doctest::Approx(2.0));
}

TEST_CASE("splitting step examples") {
  const FourierField u = single_mode({1, 0}, {0.0, 1.0});
  const FourierField heat = splitting_step(u, AdvectionSource::zero(2), 0.0, 0.1, 1.0);
  CHECK(std::abs(heat.coefficient({1, 0})[1] - std::exp(-0.1)) <= 1e-15);
  CHECK(splitting_step(u, AdvectionSource::zero(2), 0.0, 0.1, 0.0) == u);
  CHECK_THROWS_AS(splitting_step(u, AdvectionSource::zero(2), 0.1, 0.1, 1.0), Error);
}

TEST_CASE("one splitting step agrees with one midpoint step to second order") {
  const BesselSetup s;
  std::vector<double> scaled;
  for (double h : {1e-3, 5e-4, 2.5e-4}) {
    const FourierField a = splitting_step(s.u0(), s.v(), 0.0, h, 0.0);
    const FourierField b = solve_duhamel(s.u0(), s.v(), 0.0, h, h, final_only()).final_field;
    scaled.push_back(max_difference(a, b) / (h * h));
  }
  // The difference is C h^2 with a stable C.
  CHECK(scaled[0] <= 1.0 + 1e-6);
  CHECK(std::abs(scaled[1] / scaled[0] - 1.0) <= 0.05);
  CHECK(std::abs(scaled[2] / scaled[0] - 1.0) <= 0.05);
}

TEST_CASE("the mean mode is carried by the b_0 phase in the splitting scheme") {
  // A constant advecting field only turns each mode by exp(i <b_0, k> h).
  const FourierField b0 = FourierField::from_modes(2, kInfinity, {{{0, 0}, {0.3, -0.2}}});
  const FourierField u = single_mode({2, 1}, {1.0, -2.0});
  const FourierField out = splitting_step(u, AdvectionSource::constant(b0), 0.0, 0.5, 0.0);
  const Complex phase = std::exp(Complex(0.0, (0.3 * 2 - 0.2 * 1) * 0.5));
  CHECK((out.coefficient({2, 1}) - phase * u.coefficient({2, 1})).norm() <= 1e-15);
}

TEST_CASE("without advection both schemes reproduce heat decay") {
  const FourierField u0 = builtin_initial_data("random-small", small_params(3, 3, 1.0, 4.0));
  const double nu = 0.5, T = 0.8;
  const FourierField split =
      solve_splitting(u0, AdvectionSource::zero(3), nu, TimePartition::uniform(T, 8), final_only()).final_field;
  const FourierField duh = solve_duhamel(u0, AdvectionSource::zero(3), nu, T, 0.1, final_only()).final_field;
  for (const auto& m : u0.modes()) {
    const CVector exact = std::exp(-nu * static_cast<double>(m.k.norm2()) * T) * m.a;
    CHECK((split.coefficient(m.k) - exact).norm() <= 1e-14);
    CHECK((duh.coefficient(m.k) - exact).norm() <= 1e-14);
  }
}

TEST_CASE("trajectories conserve the mean, the divergence and dissipate energy") {
  BuiltinParams p = small_params(2, 11, 1.0, 6.0);
  FourierField u0 = builtin_initial_data("random-small", p);
  u0 = add(u0, FourierField::from_modes(2, 6.0, {{{0, 0}, {0.25, -0.5}}}));
  p.seed = 12;
  const AdvectionSource v = builtin_advection("random-small", p);
  StepperOptions opt;
  opt.snapshot_every = 1;
  opt.degrees = {0.0, 1.0};
  const Trajectory duh = solve_duhamel(u0, v, 0.2, 0.5, 1e-3, opt);
  const Trajectory split = solve_splitting(u0, v, 0.2, TimePartition::uniform(0.5, 100), opt);
  for (const Trajectory* traj : {&duh, &split}) {
    double previous = coefficient_energy(u0);
    for (const auto& pt : traj->points) {
      REQUIRE(pt.field);
      CHECK((pt.field->coefficient({0, 0}) - u0.coefficient({0, 0})).norm() <= 1e-14);
      CHECK(divergence_defect(*pt.field) <= 1e-10 * seminorm_A(*pt.field, 1.0));
      if (traj == &duh) {
        const double e = coefficient_energy(*pt.field);
        CHECK(e <= previous * (1.0 + 1e-8));
        previous = e;
      }
    }
  }
}

TEST_CASE("the midpoint scheme converges at second order without viscosity") {
  const BesselSetup s;
  const BesselConfig cfg = BesselConfig::constant(s.k, s.l, s.a, s.b);
  const FourierField exact = bessel_solution(cfg, 1.0);
  std::vector<double> err;
  for (double dt : {0.02, 0.01, 0.005}) {
    err.push_back(max_difference(solve_duhamel(s.u0(), s.v(), 0.0, 1.0, dt, final_only()).final_field, exact));
  }
  CHECK(std::log2(err[0] / err[1]) >= 1.9);
  CHECK(std::log2(err[1] / err[2]) >= 1.9);
}

TEST_CASE("splitting and midpoint terminal states converge to each other") {
  BuiltinParams p = small_params(2, 21, 1.0, 6.0);
  const FourierField u0 = builtin_initial_data("random-small", p);
  p.seed = 22;
  const AdvectionSource v = builtin_advection("random-small", p);
  const FourierField ref = solve_duhamel(u0, v, 1.0, 0.5, 1e-4, final_only()).final_field;
  std::vector<double> err;
  for (int N : {10, 20, 40}) {
    err.push_back(max_difference(solve_splitting(u0, v, 1.0, TimePartition::uniform(0.5, N), final_only()).final_field, ref));
  }
  CHECK(std::log2(err[0] / err[1]) >= 0.9);
  CHECK(std::log2(err[1] / err[2]) >= 0.9);
}

TEST_CASE("blow-up detection stops the run at the last valid time") {
  const FourierField u0 = cascade_to_field(cascade_inviscid(0.0, 40).a);
  StepperOptions opt;
  opt.degrees = {0.0};
  opt.overflow_cap = 5.0;
  const Trajectory traj = solve_duhamel(u0, cascade_advection(), 0.0, 0.95, 1e-3, opt);
  CHECK(traj.status == RunStatus::kBlowUpDetected);
  // sum_{k<=40} t^{k-1} first exceeds 5 at t = 0.8.
  CHECK(traj.last_valid_time == doctest::Approx(0.8).epsilon(0.01));
  CHECK(traj.points.back().t == traj.last_valid_time);
}

TEST_CASE("time series quadrature") {
  const TimeSeries s{{0.0, 1.0, 2.0}, {0.0, 2.0, 2.0}};
  CHECK(s.integral(2.0) == doctest::Approx(3.0));
  CHECK(s.integral(0.5) == doctest::Approx(0.25));
  CHECK(s.integral(2.0, 2.0) == doctest::Approx(6.0));
  CHECK(s.sup(0.5) == 0.0);
  CHECK(s.sup(2.0) == 2.0);
  CHECK_THROWS_AS(s.integral(3.0), Error);
  CHECK(TimeSeries::constant(2.0, 1.0).integral(1.0) == doctest::Approx(2.0));
}

TEST_CASE("a priori bound examples") {
  const double e = std::numbers::e;
  const TimeSeries zero = TimeSeries::constant(0.0, 1.0);
  CHECK(bound_A0(1.5, zero, 1.0, 1.0) == 1.5);
  CHECK(bound_A0(1.5, TimeSeries::constant(2.0, 1.0), 1.0, 1.0) == doctest::Approx(1.5 * e).epsilon(1e-15));
  CHECK(bound_A1(0.7, zero, zero, 1.0, 1.0) == 0.7);
  CHECK(bound_A1(0.7, TimeSeries::constant(1.0, 1.0), zero, 1.0, 1.0) == doctest::Approx(0.7 * e).epsilon(1e-15));
  CHECK_THROWS_AS(bound_A0(1.0, zero, 0.0, 1.0), Error);
  CHECK_THROWS_AS(bound_A1(1.0, zero, zero, -1.0, 1.0), Error);

  std::map<int, TimeSeries> vz{{0, zero}, {1, zero}, {2, zero}};
  CHECK(bound_Ad(2, 3.0, vz, {{1, 10.0}}, 1.0, 1.0) == 3.0);

  // Constant histories ||v||_{A,0..3} = 0.5, 0.3, 0.7, 0.2 with nu = t = 1.
  std::map<int, TimeSeries> v{{0, TimeSeries::constant(0.5, 1.0)},
                              {1, TimeSeries::constant(0.3, 1.0)},
                              {2, TimeSeries::constant(0.7, 1.0)},
                              {3, TimeSeries::constant(0.2, 1.0)}};
  CHECK(bound_Ad(2, 1.5, v, {{1, 2.0}}, 1.0, 1.0) == doctest::Approx(5.6249425628666864906).epsilon(1e-14));
  CHECK(bound_Ad(3, 1.5, v, {{1, 2.0}, {2, 4.0}}, 1.0, 1.0) ==
        doctest::Approx(26.967808994526118177).epsilon(1e-14));
  CHECK_THROWS_AS(bound_Ad(3, 1.5, v, {{1, 2.0}}, 1.0, 1.0), Error);
  CHECK_THROWS_AS(bound_Ad(2, 1.5, {{0, zero}}, {{1, 2.0}}, 1.0, 1.0), Error);

  // Enlarging any history enlarges the bound.
  std::map<int, TimeSeries> bigger = v;
  bigger[2] = TimeSeries::constant(0.8, 1.0);
  CHECK(bound_Ad(2, 1.5, bigger, {{1, 2.0}}, 1.0, 1.0) > bound_Ad(2, 1.5, v, {{1, 2.0}}, 1.0, 1.0));
  bigger[0] = TimeSeries::constant(0.6, 1.0);
  CHECK(bound_Ad(3, 1.5, bigger, {{1, 2.0}, {2, 4.0}}, 1.0, 1.0) >
        bound_Ad(3, 1.5, v, {{1, 2.0}, {2, 4.0}}, 1.0, 1.0));
}

TEST_CASE("decay bounds") {
  const TimeSeries zero = TimeSeries::constant(0.0, 2.0);
  CHECK(bound_decay(1.2, 0.0, 1.0, 2.0, DecayKind::kA0, zero) == 1.2);
  // delta = nu without advection is exactly the heat decay of a |k| = 1 mode.
  const FourierField u = single_mode({0, 1}, {1.0, 0.0});
  const FourierField heat = solve_duhamel(u, AdvectionSource::zero(2), 0.8, 2.0, 0.1, final_only()).final_field;
  CHECK(bound_decay(1.0, 0.8, 0.8, 2.0, DecayKind::kA0, zero) ==
        doctest::Approx(seminorm_A(heat, 0.0)).epsilon(1e-14));
  CHECK_THROWS_AS(bound_decay(1.0, 0.6, 1.0, 1.0, DecayKind::kA0, TimeSeries::constant(0.5, 1.0)), Error);
  CHECK_THROWS_AS(bound_decay(1.0, 0.1, 1.0, 1.0, DecayKind::kA1, zero), Error);
  CHECK(bound_decay(2.0, 0.5, 1.0, 1.0, DecayKind::kA1, TimeSeries::constant(0.5, 1.0),
                    TimeSeries::constant(0.25, 1.0)) == doctest::Approx(2.0 * std::exp(-0.25)));

  // ||v||_{A,0} = nu/2 and delta = nu/2: the measured norm stays under the bound.
  BuiltinParams p = small_params(2, 31, 0.5, 6.0);
  const FourierField u0 = builtin_initial_data("random-small", p);
  p.seed = 32;
  p.amplitude = 0.45;
  const AdvectionSource v = builtin_advection("random-small", p);
  StepperOptions opt;
  opt.snapshot_every = 0;
  opt.record_every = 10;
  const Trajectory traj = solve_duhamel(u0, v, 1.0, 1.0, 1e-3, opt);
  const auto hist = advection_histories(v, traj.times(), 1);
  CHECK(hist.at(0).sup(1.0) <= 0.5);
  for (const auto& pt : traj.points) {
    const double b0 = bound_decay(0.5, 0.5, 1.0, pt.t, DecayKind::kA0, hist.at(0));
    const double b1 =
        bound_decay(seminorm_A(u0, 1.0), 0.5, 1.0, pt.t, DecayKind::kA1, hist.at(0), hist.at(1));
    CHECK(pt.norms.values.at(0.0) <= b0 * (1.0 + kBoundTolerance));
    CHECK(pt.norms.values.at(1.0) <= b1 * (1.0 + kBoundTolerance));
  }
}

TEST_CASE("bound verification") {
  const std::vector<int> degrees{0, 1, 2, 3};
  const FourierField u0 = builtin_initial_data("random-small", small_params(2, 41, 1.0, 6.0));
  StepperOptions opt;
  opt.snapshot_every = 0;
  opt.record_every = 10;
  Trajectory heat = solve_duhamel(u0, AdvectionSource::zero(2), 1.0, 1.0, 1e-3, opt);
  const BoundReport clean = verify_bounds(heat, AdvectionSource::zero(2), 1.0, degrees);
  CHECK(clean.all_satisfied());
  CHECK(clean.rows.size() == heat.points.size() * degrees.size());

  BuiltinParams p = small_params(2, 42, 1.0, 6.0);
  p.seed = 43;
  const AdvectionSource v = builtin_advection("random-small", p);
  const Trajectory moving = solve_duhamel(u0, v, 1.0, 1.0, 1e-3, opt);
  CHECK(verify_bounds(moving, v, 1.0, degrees).all_satisfied());

  // Doubling the recorded norms after t = 0 must be caught while the heat
  // flow has not yet halved them.
  Trajectory corrupted = heat;
  for (auto& pt : corrupted.points) {
    if (pt.t == 0.0) continue;
    for (auto& [d, value] : pt.norms.values) value *= 2.0;
  }
  const BoundReport bad = verify_bounds(corrupted, AdvectionSource::zero(2), 1.0, degrees);
  CHECK(bad.violations() > 0);
  const double first = heat.points[1].t;
  for (const auto& row : bad.rows) {
    if (row.t == first) CHECK_FALSE(row.satisfied);
  }

  std::ostringstream csv;
  bad.write_csv(csv);
  CHECK(csv.str().rfind("t,d,measured,bound,slack,satisfied\n", 0) == 0);
  CHECK_THROWS_AS(verify_bounds(heat, AdvectionSource::zero(2), 0.0, degrees), Error);
}
