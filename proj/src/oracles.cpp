#include "fcns/oracles.hpp"

#include <cmath>
#include <numbers>

namespace fcns {

namespace {

using Quad = __float128;

constexpr double kBesselMaxX = 30.0;
constexpr int kBesselMaxOrder = 60;

Quad quad_abs(Quad x) { return x < 0 ? -x : x; }

Complex i_power(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

using Matrix = std::vector<std::vector<double>>;

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t m = a.size();
  Matrix c(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      if (a[i][k] == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

// exp(A) by scaling and squaring with a Taylor series on the scaled matrix.
Matrix expm(Matrix a) {
  const std::size_t m = a.size();
  double norm = 0.0;
  for (const auto& row : a) {
    double s = 0.0;
    for (double x : row) s += std::abs(x);
    norm = std::max(norm, s);
  }
  int squarings = 0;
  while (norm > 0.25) {
    norm *= 0.5;
    ++squarings;
  }
  const double factor = std::ldexp(1.0, -squarings);
  for (auto& row : a) {
    for (double& x : row) x *= factor;
  }
  Matrix result(m, std::vector<double>(m, 0.0));
  Matrix term(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) result[i][i] = term[i][i] = 1.0;
  for (int p = 1; p <= 30; ++p) {
    term = multiply(term, a);
    double biggest = 0.0;
    for (auto& row : term) {
      for (double& x : row) {
        x /= p;
        biggest = std::max(biggest, std::abs(x));
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) result[i][j] += term[i][j];
    }
    if (biggest < 1e-20) break;
  }
  for (int s = 0; s < squarings; ++s) result = multiply(result, result);
  return result;
}

}  // namespace

double bessel_j(int j, double x) {
  if (j < 0 || j > kBesselMaxOrder || !(x >= 0.0) || x > kBesselMaxX) {
    throw Error(ErrorCode::kDomainExceeded,
                "J_" + std::to_string(j) + "(" + std::to_string(x) + ") outside 0 <= x <= 30, 0 <= j <= 60");
  }
  if (x == 0.0) return j == 0 ? 1.0 : 0.0;
  const Quad half = static_cast<Quad>(x) / 2;
  const Quad half2 = half * half;
  Quad term = 1;
  for (int i = 1; i <= j; ++i) term = term * half / i;  // (x/2)^j / j!
  Quad sum = term;
  for (int a = 1; a < 1000; ++a) {
    term = -term * half2 / (static_cast<Quad>(a) * static_cast<Quad>(a + j));
    sum += term;
    // Terms shrink monotonically once a exceeds x/2.
    if (a > half && (quad_abs(term) < static_cast<Quad>(1e-18) * quad_abs(sum) ||
                     quad_abs(term) < static_cast<Quad>(1e-40))) {
      break;
    }
  }
  return static_cast<double>(sum);
}

double bessel_j_signed(int j, double x) {
  if (j >= 0) return bessel_j(j, x);
  const double v = bessel_j(-j, x);
  return (-j) % 2 == 0 ? v : -v;
}

double CascadeState::norm_A() const {
  double s = 0.0;
  for (const auto& c : a) s += std::abs(c);
  return s;
}

CascadeState cascade_inviscid(double t, int kmax) {
  CascadeState s;
  s.t = t;
  s.a.resize(static_cast<std::size_t>(std::max(kmax, 0)));
  double power = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    s.a[k - 1] = i_power(k - 1) * power;
    power *= t;
  }
  return s;
}

std::vector<CascadeState> cascade_viscous_solve(double nu, double T, double dt, int kmax) {
  if (nu < 0.0) throw Error(ErrorCode::kPreconditionViolated, "nu must be >= 0");
  if (!(dt > 0.0) || T < 0.0) throw Error(ErrorCode::kInvalidInterval, "need dt > 0 and T >= 0");
  if (kmax < 1) throw Error(ErrorCode::kPreconditionViolated, "kmax must be >= 1");
  const long steps = std::lround(T / dt);
  const double h = steps > 0 ? T / static_cast<double>(steps) : 0.0;
  // With a_k = i^{k-1} c_k the system becomes real: c_k' = -nu k^2 c_k + (k-1) c_{k-1}.
  const auto m = static_cast<std::size_t>(kmax);
  Matrix gen(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    const double k = static_cast<double>(i + 1);
    gen[i][i] = -nu * k * k * h;
    if (i > 0) gen[i][i - 1] = (k - 1.0) * h;
  }
  const Matrix step = expm(gen);

  std::vector<double> c(m, 0.0);
  c[0] = 1.0;
  std::vector<CascadeState> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  auto emit = [&](double t) {
    CascadeState s;
    s.nu = nu;
    s.t = t;
    s.a.resize(m);
    for (std::size_t i = 0; i < m; ++i) s.a[i] = i_power(static_cast<int>(i)) * c[i];
    out.push_back(std::move(s));
  };
  emit(0.0);
  std::vector<double> next(m);
  for (long s = 1; s <= steps; ++s) {
    for (std::size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j <= i; ++j) acc += step[i][j] * c[j];
      next[i] = acc;
    }
    c.swap(next);
    emit(s == steps ? T : static_cast<double>(s) * h);
  }
  return out;
}

double cascade_viscous_norm_bound(double nu, double t) {
  if (!(nu > 0.0)) throw Error(ErrorCode::kBoundUndefined, "bound requires nu > 0");
  return 2.0 * std::exp(-nu * t) * (nu * nu * std::expm1(1.0 / nu) - nu);
}

double cascade_coefficient_bound(double nu, double t, int k) {
  if (!(nu > 0.0)) throw Error(ErrorCode::kBoundUndefined, "bound requires nu > 0");
  double denom = std::pow(nu, k - 1);
  for (int i = 2; i <= k + 1; ++i) denom *= i;
  return 2.0 * std::exp(-nu * t) / denom;
}

FourierField cascade_to_field(const std::vector<Complex>& a) {
  std::vector<Mode> modes;
  modes.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    modes.push_back({WaveVector{static_cast<int>(i + 1), 0}, CVector{0.0, a[i]}});
  }
  return FourierField::from_modes(2, static_cast<double>(a.size()), std::move(modes));
}

std::vector<Complex> field_to_cascade(const FourierField& field, int kmax) {
  if (field.dimension() != 2) throw Error(ErrorCode::kDimensionMismatch, "cascade fields are 2-D");
  std::vector<Complex> a(static_cast<std::size_t>(kmax));
  for (int k = 1; k <= kmax; ++k) a[k - 1] = field.coefficient(WaveVector{k, 0})[1];
  return a;
}

AdvectionSource cascade_advection() {
  FourierField v = FourierField::from_modes(2, kInfinity, {{WaveVector{1, 0}, CVector{1.0, 0.0}}});
  return {[v](double) { return v; }, false, false, "cascade"};
}

BesselConfig BesselConfig::constant(const WaveVector& k, const WaveVector& l, const CVector& a_k0,
                                    const CVector& b_l) {
  BesselConfig cfg;
  cfg.n = k.n;
  cfg.k = k;
  cfg.l = l;
  cfg.a_k0 = a_k0;
  const Complex rate = Complex(0.0, 1.0) * pair(b_l, k);
  cfg.b_plus = [rate](double t) { return rate * t; };
  cfg.validate();
  return cfg;
}

void BesselConfig::validate() const {
  if (n < 3 || k.n != n || l.n != n || a_k0.n != n) {
    throw Error(ErrorCode::kDimensionMismatch, "Bessel configuration needs n >= 3 throughout");
  }
  if (l.is_zero()) throw Error(ErrorCode::kPreconditionViolated, "l must be nonzero");
  if (std::abs(pair(a_k0, l)) > 1e-14 * a_k0.norm() * l.norm()) {
    throw Error(ErrorCode::kPreconditionViolated, "a_k(0) must be orthogonal to l");
  }
}

AdvectionSource bessel_advection(const WaveVector& l, const CVector& b_l) {
  FourierField v = FourierField::from_modes(l.n, kInfinity, {{l, b_l}, {-l, b_l.conj()}});
  return AdvectionSource::constant(std::move(v), "bessel");
}

int bessel_jmax(double abs_b) {
  double term = 1.0;  // |B|^j / j!
  int j = 0;
  while (term >= 1e-18) {
    ++j;
    term *= abs_b / j;
    if (j > kBesselMaxOrder) {
      throw Error(ErrorCode::kDomainExceeded, "|B_+| too large for the Bessel truncation");
    }
  }
  return j;
}

FourierField bessel_solution(const BesselConfig& cfg, double t) {
  cfg.validate();
  const Complex b = cfg.b_plus(t);
  const double abs_b = std::abs(b);
  if (abs_b == 0.0) return FourierField::from_modes(cfg.n, kInfinity, {{cfg.k, cfg.a_k0}});
  const double z = 2.0 * abs_b;
  if (z > kBesselMaxX) throw Error(ErrorCode::kDomainExceeded, "2|B_+| exceeds 30");
  const int jmax = bessel_jmax(abs_b);
  const Complex phase = b / abs_b;
  std::vector<Mode> modes;
  for (int j = -jmax; j <= jmax; ++j) {
    WaveVector kj = cfg.k;
    for (int i = 0; i < cfg.n; ++i) kj[i] += j * cfg.l[i];
    modes.push_back({kj, (std::pow(phase, j) * bessel_j_signed(j, z)) * cfg.a_k0});
  }
  return FourierField::from_modes(cfg.n, kInfinity, std::move(modes));
}

DerivativeBounds bessel_derivative_bounds(const BesselConfig& cfg, double t) {
  const FourierField u = bessel_solution(cfg, t);
  const double vol = std::pow(2.0 * std::numbers::pi, cfg.n);
  const double abs_b = std::abs(cfg.b_plus(t));
  const double a_l1 = cfg.a_k0.norm() * std::abs(cfg.l[0]);
  DerivativeBounds r;
  r.lower = std::numbers::sqrt2 * vol * a_l1 * abs_b;
  r.upper = vol * std::abs(cfg.k[0]) * cfg.a_k0.norm() + std::sqrt(3.0) * vol * a_l1 * abs_b;
  double sum = 0.0;
  for (const auto& m : u.modes()) {
    const double k1 = m.k[0];
    sum += k1 * k1 * m.a.norm2();
  }
  r.direct = vol * std::sqrt(sum);
  return r;
}

double bessel_derivative_k1_zero(const BesselConfig& cfg, double t) {
  if (cfg.k[0] != 0) throw Error(ErrorCode::kPreconditionViolated, "needs k_1 = 0");
  const double z = 2.0 * std::abs(cfg.b_plus(t));
  return std::pow(2.0 * std::numbers::pi, cfg.n) * cfg.a_k0.norm() * std::abs(cfg.l[0]) * z /
         std::numbers::sqrt2;
}

std::vector<Complex> shift_series_coefficients(Complex b_plus, int window, int terms) {
  const Complex b_minus = -std::conj(b_plus);
  // Index offset large enough that no Taylor term reaches the buffer edge.
  const int half = window + terms + 1;
  const auto size = static_cast<std::size_t>(2 * half + 1);
  std::vector<Complex> term(size, 0.0);
  std::vector<Complex> sum(size, 0.0);
  term[half] = 1.0;
  sum[half] = 1.0;
  std::vector<Complex> next(size);
  for (int a = 1; a <= terms; ++a) {
    std::fill(next.begin(), next.end(), Complex(0.0));
    for (std::size_t j = 0; j < size; ++j) {
      if (term[j] == 0.0) continue;
      if (j + 1 < size) next[j + 1] += b_plus * term[j];
      if (j > 0) next[j - 1] += b_minus * term[j];
    }
    for (std::size_t j = 0; j < size; ++j) {
      term[j] = next[j] / static_cast<double>(a);
      sum[j] += term[j];
    }
  }
  return {sum.begin() + (half - window), sum.begin() + (half + window + 1)};
}

}  // namespace fcns
