#pragma once

// Closed-form reference solutions: the inviscid and viscous triangular
// cascades, the Bessel-function solution of a single mode advected by one
// real mode pair, and the Bessel J evaluator they rely on.

#include <functional>
#include <vector>

#include "fcns/linear_evolution.hpp"
#include "fcns/spectral.hpp"

namespace fcns {

/// J_j(x) = sum_a (-1)^a (x/2)^{2a+j} / (a! (a+j)!), summed in quad precision.
/// Domain 0 <= x <= 30, 0 <= j <= 60.
double bessel_j(int j, double x);

/// Integer order of either sign, J_{-m} = (-1)^m J_m.
double bessel_j_signed(int j, double x);

/// Scalar cascade d/dt a_k = -nu k^2 a_k + i (k-1) a_{k-1}, a_1(0) = 1,
/// a_k(0) = 0 for k >= 2. `a[k-1]` holds a_k.
struct CascadeState {
  double nu = 0.0;
  double t = 0.0;
  std::vector<Complex> a;

  /// sum_k |a_k|.
  double norm_A() const;
};

/// nu = 0 closed form a_k(t) = i^{k-1} t^{k-1}.
CascadeState cascade_inviscid(double t, int kmax);

/// Exact propagation of the lower-triangular system over a uniform grid with
/// round(T/dt) steps; one state per knot.
std::vector<CascadeState> cascade_viscous_solve(double nu, double T, double dt, int kmax);

/// 2 e^{-nu t} (nu^2 e^{1/nu} - nu^2 - nu).
double cascade_viscous_norm_bound(double nu, double t);

/// 2 e^{-nu t} / (nu^{k-1} (k+1)!).
double cascade_coefficient_bound(double nu, double t, int k);

/// The cascade as a two-dimensional field: a_m sits at wave vector (m, 0) with
/// coefficient (0, a_m). The truncation radius is kmax.
FourierField cascade_to_field(const std::vector<Complex>& a);
std::vector<Complex> field_to_cascade(const FourierField& field, int kmax);
/// Advection b_{(1,0)} = (1, 0): <b_{(1,0)}, (m-1, 0)> = m - 1 reproduces the
/// cascade coupling. Neither real nor divergence-free.
AdvectionSource cascade_advection();

/// Single initial mode a_k(0) e^{ikx} advected by v = b_l e^{ilx} + conj(b_l) e^{-ilx}.
struct BesselConfig {
  int n = 3;
  WaveVector k;
  WaveVector l;
  CVector a_k0;
  /// B_+(t) = i int_0^t <b_l(s), k> ds.
  std::function<Complex(double)> b_plus;

  /// Constant b_l; B_+(t) = i <b_l, k> t.
  static BesselConfig constant(const WaveVector& k, const WaveVector& l, const CVector& a_k0,
                               const CVector& b_l);
  void validate() const;
};

/// The advecting field of a constant-b_l configuration.
AdvectionSource bessel_advection(const WaveVector& l, const CVector& b_l);

/// Smallest j with |B|^j / j! < 1e-18.
int bessel_jmax(double abs_b);

/// a_{k+jl}(t) = a_k(0) (B_+/|B_+|)^j J_j(2|B_+|) for |j| <= jmax, with the
/// signed-order J (so that the negative-j coefficients carry (-1)^j).
FourierField bessel_solution(const BesselConfig& cfg, double t);

struct DerivativeBounds {
  double lower = 0.0;   // sqrt(2) (2 pi)^n |a_k(0)| |l_1| |B_+|
  double upper = 0.0;   // ||d_1 u_0|| + sqrt(3) (2 pi)^n |a_k(0)| |l_1| |B_+|
  double direct = 0.0;  // (2 pi)^n sqrt(sum_j (k_1 + j l_1)^2 |a_{k+jl}|^2)
};

/// Norms follow the convention ||f|| = (2 pi)^n sqrt(sum_k |f_k|^2).
DerivativeBounds bessel_derivative_bounds(const BesselConfig& cfg, double t);

/// For k_1 = 0, the exact value (2 pi)^n |a_k(0)| |l_1| z / sqrt(2), z = 2|B_+|,
/// from sum_{j in Z} j^2 J_j(z)^2 = z^2 / 2.
double bessel_derivative_k1_zero(const BesselConfig& cfg, double t);

/// <e_j, exp(B_+ S_+ + B_- S_-) e_0> for j = -window..window by the truncated
/// Taylor series (S_+ maps e_j to e_{j+1}), with B_- = -conj(B_+).
std::vector<Complex> shift_series_coefficients(Complex b_plus, int window, int terms = 60);

}  // namespace fcns
