#pragma once

// The Duhamel solution map S on coefficient paths,
//
//   (S f)_k(t) = a_k(0) e^{-nu k^2 t}
//                - i int_0^t e^{nu k^2 (s - t)} sum_l <f_{k-l}(s), k> P_k f_l(s) ds,
//
// on the ball of radius 2 ||u_0||_A in the norm ||f||_M = sum_k max_t |f_k(t)|,
// where it is a contraction with constant 4/5 on a short horizon.

#include <cstdint>
#include <vector>

#include "fcns/spectral.hpp"

namespace fcns {

/// Coefficient path sampled on a uniform grid.
struct CoefficientPath {
  std::vector<double> times;
  std::vector<FourierField> states;
};

/// sum_k max_t |f_k(t)| over the samples.
double path_norm_M(const CoefficientPath& f);
/// Pointwise f - g; both paths must share the grid.
CoefficientPath path_difference(const CoefficientPath& f, const CoefficientPath& g);

struct FixedPointSpace {
  double nu = 0.0;
  double u0_norm = 0.0;  // ||u_0||_A = ||u_0||_{A,0} + |a_0|
  double L = 0.0;        // 1 / (5 ||u_0||_A)
  double radius = 0.0;   // 2 ||u_0||_A
  double truncation_radius = kInfinity;
  double T = 0.0;
  int intervals = 0;

  std::vector<double> knots() const;
};

/// max over wave vectors 0 < |k| <= radius present in Z^n of
/// (1 - e^{-nu k^2 t}) / (nu |k|).
double horizon_function(int n, double truncation_radius, double nu, double t);

/// Horizon T = largest multiple of dt at which the horizon function stays
/// <= L (found by bisection, capped at T_max). Requires a finite truncation
/// radius, nu > 0 and ||u_0||_A > 0.
FixedPointSpace make_fixed_point_space(const FourierField& u0, double nu, double dt,
                                       double T_max = kInfinity);

/// a_k(0) e^{-nu k^2 t} on the knots of the space.
CoefficientPath heat_flow_path(const FourierField& u0, const FixedPointSpace& space);

/// S f on the grid of f. On each grid interval f is replaced by the average of
/// its endpoint values and the heat-kernel weight is integrated exactly.
CoefficientPath duhamel_map_S(const CoefficientPath& f, const FourierField& u0,
                              const FixedPointSpace& space);

/// ||S f - S g||_M / ||f - g||_M.
double contraction_estimate(const CoefficientPath& f, const CoefficientPath& g,
                            const FourierField& u0, const FixedPointSpace& space);

/// Seeded path cos(t) X + sin(t) Y with random real divergence-free X, Y on
/// |k_i| <= box, rescaled to ||f||_M = fraction * radius.
CoefficientPath random_path_in_ball(const FixedPointSpace& space, int dimension, std::uint64_t seed,
                                    double fraction, int box = 2);

struct PicardResult {
  CoefficientPath path;
  int iterations = 0;
  double last_increment = 0.0;  // ||f_{m+1} - f_m||_M
};

/// Iterates S from the heat flow until successive iterates differ by <= tol.
PicardResult picard_iterate(const FourierField& u0, const FixedPointSpace& space, double tol = 1e-13,
                            int max_iterations = 200);

}  // namespace fcns
