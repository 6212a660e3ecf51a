#pragma once

// Named initial data and advecting fields for the command-line harness and
// the randomized test suites.

#include <cstdint>
#include <string>
#include <vector>

#include "fcns/linear_evolution.hpp"

namespace fcns {

struct BuiltinParams {
  int dimension = 3;
  double truncation_radius = kInfinity;
  /// Overall amplitude; for random-small the exact target ||.||_{A,0}.
  double amplitude = 1.0;
  std::uint64_t seed = 20240601;
  /// Largest |k_i| of the random modes.
  int box = 2;
};

/// "taylor-green": the cellular flow (sin x cos y [cos z], -cos x sin y [cos z], 0, ...)
///   scaled by the amplitude; exactly divergence-free and real.
/// "single-mode": a single complex mode (0, amplitude, 0, ...) at k = e_1
///   (not real: the single-mode Bessel configuration).
/// "random-small": seeded random real divergence-free field on the box,
///   zero mean, rescaled to ||.||_{A,0} = amplitude.
FourierField builtin_initial_data(const std::string& name, const BuiltinParams& params);

/// "zero", "shear" (amplitude sin(x_2) e_1), "random-small" (seeded,
/// cos(t) V_1 + sin(t) V_2 with ||V_i||_{A,0} = amplitude) and "bessel"
/// (b_l = (amplitude, 0, 0, ...) at l = e_n and its conjugate at -l).
AdvectionSource builtin_advection(const std::string& name, const BuiltinParams& params);

/// Seeded random real divergence-free zero-mean field on |k_i| <= box,
/// unnormalized.
FourierField random_divergence_free_field(int dimension, int box, double truncation_radius,
                                          std::uint64_t seed);

std::vector<std::string> builtin_initial_names();
std::vector<std::string> builtin_advection_names();

}  // namespace fcns
