#pragma once

// Fields on the n-torus stored as sparse maps from integer wave vectors to
// complex n-vector Fourier coefficients, together with the weighted l1
// seminorm family ||f||_{A,d} = sum_{k != 0} |k|^d |f_k| and the
// coefficient-space calculus used by the solvers.

#include <array>
#include <compare>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "fcns/error.hpp"

namespace fcns {

using Complex = std::complex<double>;

/// Largest supported spatial dimension. Only storage is bounded by this; all
/// algorithms run over the field's own dimension.
inline constexpr int kMaxDim = 6;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Integer mode index k in Z^n.
struct WaveVector {
  std::array<int, kMaxDim> c{};
  int n = 0;

  WaveVector() = default;
  explicit WaveVector(int dim) : n(dim) {}
  WaveVector(std::initializer_list<int> components);

  int operator[](int i) const { return c[i]; }
  int& operator[](int i) { return c[i]; }

  /// k^2 = sum k_i^2, exact in integer arithmetic.
  std::int64_t norm2() const;
  double norm() const;
  bool is_zero() const;

  WaveVector operator-() const;
  friend WaveVector operator+(const WaveVector& a, const WaveVector& b);
  friend WaveVector operator-(const WaveVector& a, const WaveVector& b);

  // Lexicographic on the components; unused slots are zero.
  friend auto operator<=>(const WaveVector& a, const WaveVector& b) {
    return a.c <=> b.c;
  }
  friend bool operator==(const WaveVector& a, const WaveVector& b) { return a.c == b.c; }
};

/// Complex n-vector (one Fourier coefficient of a vector field).
struct CVector {
  std::array<Complex, kMaxDim> v{};
  int n = 0;

  CVector() = default;
  explicit CVector(int dim) : n(dim) {}
  CVector(std::initializer_list<Complex> components);

  Complex operator[](int i) const { return v[i]; }
  Complex& operator[](int i) { return v[i]; }

  /// l2 norm on C^n.
  double norm() const;
  double norm2() const;
  bool is_finite() const;
  CVector conj() const;

  CVector& operator+=(const CVector& o);
  CVector& operator-=(const CVector& o);
  CVector& operator*=(Complex s);
  friend CVector operator+(CVector a, const CVector& b) { return a += b; }
  friend CVector operator-(CVector a, const CVector& b) { return a -= b; }
  friend CVector operator*(Complex s, CVector a) { return a *= s; }
  friend CVector operator*(CVector a, Complex s) { return a *= s; }
  friend bool operator==(const CVector& a, const CVector& b) = default;
};

/// Bilinear pairing <a, k> = sum a_i k_i (no conjugation), as in the
/// coefficient equations.
Complex pair(const CVector& a, const WaveVector& k);

/// Bilinear pairing <a, x> with a real vector.
Complex pair(const CVector& a, std::span<const double> x);

struct Mode {
  WaveVector k;
  CVector a;
};

/// Immutable sparse Fourier field. Modes are kept sorted lexicographically
/// in k, which fixes the summation order of every reduction over the field.
/// Absent modes are zero; modes with |k| > truncation radius are never stored.
class FourierField {
 public:
  FourierField() = default;
  explicit FourierField(int dimension, double truncation_radius = kInfinity);

  /// Sorts, merges duplicate wave vectors by summation and drops modes beyond
  /// the truncation radius.
  static FourierField from_modes(int dimension, double truncation_radius, std::vector<Mode> modes);
  static FourierField from_map(int dimension, double truncation_radius,
                               const std::map<WaveVector, CVector>& modes);

  int dimension() const { return n_; }
  double truncation_radius() const { return trunc_; }
  std::span<const Mode> modes() const { return modes_; }
  std::size_t size() const { return modes_.size(); }
  bool empty() const { return modes_.empty(); }

  /// True when |k| <= truncation radius.
  bool admits(const WaveVector& k) const;

  const CVector* find(const WaveVector& k) const;
  /// Coefficient of mode k, zero when absent.
  CVector coefficient(const WaveVector& k) const;

  /// Same modes, different truncation radius (modes beyond it are dropped).
  FourierField with_truncation(double truncation_radius) const;

  bool is_finite() const;

  friend bool operator==(const FourierField& a, const FourierField& b) {
    return a.n_ == b.n_ && a.modes_.size() == b.modes_.size() && equal_modes(a, b);
  }

 private:
  static bool equal_modes(const FourierField& a, const FourierField& b);

  int n_ = 0;
  double trunc_ = kInfinity;
  std::vector<Mode> modes_;
};

// Linear combinations. Operands must share a dimension; the result keeps the
// truncation radius of the first operand.
FourierField add(const FourierField& f, const FourierField& g);
FourierField subtract(const FourierField& f, const FourierField& g);
FourierField scale(const FourierField& f, Complex s);

/// Sum over k != 0 of |k|^d |a_k|.
double seminorm_A(const FourierField& field, double d);

/// sum_k |a_k|^2 (coefficient l2 norm squared, including k = 0).
double coefficient_energy(const FourierField& field);

/// |a_0|.
double mean_magnitude(const FourierField& field);

/// ||.||_{A,d} for a set of degrees at one instant.
struct SeminormRecord {
  double time = 0.0;
  std::map<double, double> values;
  double a0_abs = 0.0;
};

SeminormRecord seminorm_record(const FourierField& field, double time,
                               std::span<const double> degrees);

/// a_k -> -k^2 a_k.
FourierField laplacian(const FourierField& field);

/// a_k -> (i k)^alpha a_k, the coefficient action of the partial derivative
/// d^alpha.
FourierField partial_derivative(const FourierField& field, std::span<const int> alpha);

/// Sum over modes of |<k, a_k>|; zero iff the truncated field is
/// divergence-free.
double divergence_defect(const FourierField& field);

/// Per-mode test |<k, a_k>| <= tol |k| |a_k|.
bool is_divergence_free(const FourierField& field, double tol = 1e-12);

/// a_k -> i k x a_k. Requires n = 3.
FourierField curl3(const FourierField& field);

/// Fourier synthesis sum_k a_k exp(i <k, x>).
CVector evaluate(const FourierField& field, std::span<const double> x);

/// a_k <- (a_k + conj(a_{-k})) / 2 for every k, absent modes read as zero.
FourierField enforce_reality(const FourierField& field);

/// max_k |a_k - conj(a_{-k})|.
double reality_defect(const FourierField& field);

/// Upper bound for K_s = sqrt(sum_{k != 0} |k|^{-2s}): exact partial sum over
/// 0 < |k| <= radius plus an integral bound for the tail. radius <= 0 picks
/// the default for the dimension. Requires s > n/2.
double lattice_constant(int n, double s, double radius = 0.0);

/// K_s * sqrt(sum_{k != 0} |k|^{2s+2d} |f_k|^2), which dominates
/// ||f||_{A,d}. Requires s > n/2.
double sobolev_embedding_bound(const FourierField& field, double s, double d);

}  // namespace fcns
