#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fcns/builtins.hpp"
#include "fcns/ns_evolution.hpp"
#include "test_util.hpp"

using namespace fcns;
using fcns::testing::max_difference;

namespace {

BuiltinParams params(int n, std::uint64_t seed, double amplitude, double trunc = 4.0) {
  BuiltinParams p;
  p.dimension = n;
  p.truncation_radius = trunc;
  p.seed = seed;
  p.amplitude = amplitude;
  return p;
}

StepperOptions every_step() {
  StepperOptions o;
  o.record_every = 1;
  o.snapshot_every = 1;
  o.degrees = {0.0, 1.0};
  return o;
}

}  // namespace

TEST_CASE("break-down envelope cases") {
  const BreakdownEnvelope flat = breakdown_envelope(0.0, 0.0, 1.0);
  CHECK(flat.kind == EnvelopeCase::kInfinite);
  CHECK(std::isinf(flat.T0));
  CHECK(flat.f0(100.0) == 0.0);

  const BreakdownEnvelope t0 = breakdown_envelope(2.0, 1.0, 1.0);
  CHECK(t0.T0 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(t0.c == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::isinf(t0.f0(0.5)));
  CHECK(std::isinf(t0.f0(0.6)));
  CHECK(t0.f0(0.0) == doctest::Approx(2.0).epsilon(1e-15));

  // gamma < 0 and the T1 branch falls outside (0, T0).
  const BreakdownEnvelope deg = breakdown_envelope(1.0, 1.0, 1.0);
  CHECK(deg.kind == EnvelopeCase::kT1);
  CHECK(deg.gamma == doctest::Approx(-1.5).epsilon(1e-15));
  CHECK(deg.c == doctest::Approx(4.0).epsilon(1e-15));
  REQUIRE(deg.T1);
  CHECK(*deg.T1 == doctest::Approx(-0.625).epsilon(1e-15));
  CHECK(deg.degenerate);

  const BreakdownEnvelope t1 = breakdown_envelope(1.0, 0.3, 1.0);
  CHECK(t1.kind == EnvelopeCase::kT1);
  CHECK(t1.gamma == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  REQUIRE(t1.T1);
  CHECK(*t1.T1 == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
  REQUIRE(t1.f1_singularity);
  CHECK(*t1.f1_singularity == doctest::Approx(35.0 / 18.0).epsilon(1e-14));
  CHECK_FALSE(t1.degenerate);
  CHECK(t1.f1(0.0) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(std::isinf(t1.f1(*t1.f1_singularity)));

  CHECK_THROWS_AS(breakdown_envelope(1.0, 1.0, 0.0), Error);
  CHECK(std::string(to_string(EnvelopeCase::kT0)).size() > 0);
}

TEST_CASE("envelope values") {
  const BreakdownEnvelope e = breakdown_envelope(2.0, 1.0, 1.0);
  CHECK(e.f0(0.25) == doctest::Approx(2.8284271247461900976).epsilon(1e-15));
  // f0 solves f' = f^3 / (4 nu) on [0, T0).
  const double h = 1e-6, t = 0.2;
  const double slope = (e.f0(t + h) - e.f0(t - h)) / (2 * h);
  CHECK(slope == doctest::Approx(std::pow(e.f0(t), 3) / 4.0).epsilon(1e-8));
}

TEST_CASE("lower bound on the existence time") {
  CHECK(t_star_lower_bound(1.0, 0.1) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(std::isinf(t_star_lower_bound(0.3, 0.3)));
  CHECK(std::isinf(t_star_lower_bound(0.0, 1.0)));
}

TEST_CASE("Navier-Stokes solves: trivial data") {
  const FourierField mean = FourierField::from_modes(3, 4.0, {{{0, 0, 0}, {0.5, -1.0, 2.0}}});
  const NsRun still = solve_ns(mean, 1.0, 0.5, 1e-2, every_step());
  CHECK(still.trajectory.final_field == mean);

  // A single mode has no self-interaction (<a, k> = 0): pure heat decay.
  const FourierField sine = builtin_initial_data("single-mode", params(3, 1, 1.0));
  const NsRun heat = solve_ns(sine, 0.7, 0.5, 1e-2, every_step());
  for (const auto& m : sine.modes()) {
    const CVector exact = std::exp(-0.7 * static_cast<double>(m.k.norm2()) * 0.5) * m.a;
    CHECK((heat.trajectory.final_field.coefficient(m.k) - exact).norm() <= 1e-14);
  }
  CHECK(heat.report.status == BlowupStatus::kCompleted);
}

TEST_CASE("Navier-Stokes solves: small data decays monotonically") {
  const FourierField u0 = builtin_initial_data("random-small", params(3, 8, 0.5));
  REQUIRE(seminorm_A(u0, 0.0) < 1.0);
  StepperOptions opt = every_step();
  opt.snapshot_every = 0;
  const NsRun run = solve_ns(u0, 1.0, 1.0, 1e-3, opt);
  CHECK(run.envelope);
  double previous = seminorm_A(u0, 0.0);
  for (const auto& pt : run.trajectory.points) {
    const double a0 = pt.norms.values.at(0.0);
    CHECK(a0 <= previous * (1.0 + 1e-12));
    previous = a0;
  }
  CHECK(run.report.status == BlowupStatus::kCompleted);
  CHECK(std::isinf(run.report.t_star_lower));
}

TEST_CASE("time-delayed system") {
  const FourierField mean = FourierField::from_modes(2, 8.0, {{{0, 0}, {0.5, -1.0}}});
  CHECK(solve_time_delayed(mean, 1.0, 0.1, 0.3, 1e-2).final_field == mean);

  // On the first block the advecting field is the frozen initial state.
  const FourierField u0 = builtin_initial_data("random-small", params(2, 10, 1.0, 8.0));
  StepperOptions opt;
  opt.snapshot_every = 0;
  opt.degrees = {0.0};
  const FourierField delayed = solve_time_delayed(u0, 1.0, 0.1, 0.1, 1e-3, opt).final_field;
  const FourierField frozen =
      solve_duhamel(u0, AdvectionSource::constant(scale(u0, -1.0)), 1.0, 0.1, 1e-3, opt).final_field;
  CHECK(max_difference(delayed, frozen) <= 1e-14);

  CHECK_THROWS_AS(solve_time_delayed(u0, 1.0, 0.1, 0.3, 0.03), Error);
  CHECK_THROWS_AS(solve_time_delayed(u0, 1.0, 0.0, 0.3, 1e-3), Error);

  // As eps shrinks the delayed solution approaches the undelayed one.
  const FourierField ns = solve_ns(u0, 1.0, 0.3, 1e-3, opt).trajectory.final_field;
  const double coarse = max_difference(solve_time_delayed(u0, 1.0, 0.1, 0.3, 1e-3, opt).final_field, ns);
  const double fine = max_difference(solve_time_delayed(u0, 1.0, 0.05, 0.3, 1e-3, opt).final_field, ns);
  CHECK(fine < coarse);
}

TEST_CASE("break-down monitor") {
  const FourierField u0 = builtin_initial_data("random-small", params(3, 9, 2.0));
  StepperOptions opt;
  opt.snapshot_every = 0;
  opt.record_every = 10;
  opt.degrees = {0.0, 1.0};
  const NsRun run = solve_ns(u0, 1.0, 0.2, 1e-3, opt);
  REQUIRE(run.envelope);
  CHECK(run.report.status == BlowupStatus::kCompleted);
  CHECK_FALSE(run.report.first_exceedance);
  CHECK(run.report.t_star_lower == doctest::Approx(0.5).epsilon(1e-12));

  Trajectory corrupted = run.trajectory;
  for (auto& pt : corrupted.points) {
    if (pt.t > 0.0) pt.norms.values[0.0] *= 10.0;
  }
  const BlowupReport bad = breakdown_monitor(corrupted, *run.envelope);
  CHECK(bad.status == BlowupStatus::kEnvelopeExceeded);
  REQUIRE(bad.first_exceedance);
  CHECK(*bad.first_exceedance == corrupted.points[1].t);

  const BlowupReport capped = breakdown_monitor(corrupted, *run.envelope, 3.0);
  CHECK(capped.status != BlowupStatus::kCompleted);

  std::ostringstream csv;
  run.report.write_csv(csv, *run.envelope);
  CHECK(csv.str().find("t,A0_measured,f0_envelope,exceeded\n") != std::string::npos);
}

TEST_CASE("coefficient bound for the first derivative") {
  const TimeSeries zero = TimeSeries::constant(0.0, 1.0);
  CHECK(coefficient_a1_bound(zero, 0.5, 2.0, 0.5, 0.0) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(coefficient_a1_bound(zero, 0.0, 0.0, 0.5, 1.0) == 0.0);

  // The bound dominates max_k |k| |a_k(t)| along a computed solution.
  const FourierField u0 = builtin_initial_data("random-small", params(3, 12, 0.8));
  StepperOptions opt;
  opt.snapshot_every = 1;
  opt.record_every = 10;
  opt.degrees = {0.0, 1.0};
  const NsRun run = solve_ns(u0, 1.0, 1.0, 1e-3, opt);
  const TimeSeries a0{run.trajectory.times(), run.trajectory.seminorm_series(0.0)};
  for (const auto& pt : run.trajectory.points) {
    REQUIRE(pt.field);
    double weighted = 0.0;
    for (const auto& m : pt.field->modes()) weighted = std::max(weighted, m.k.norm() * m.a.norm());
    CHECK(weighted <= coefficient_a1_bound(a0, seminorm_A(u0, 0.0), seminorm_A(u0, 1.0), 1.0, pt.t));
  }
}
