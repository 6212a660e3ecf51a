#include "fcns/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace fcns {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kDivergentConstant: return "divergent constant";
    case ErrorCode::kInvalidInterval: return "invalid interval";
    case ErrorCode::kBoundUndefined: return "bound undefined";
    case ErrorCode::kPreconditionViolated: return "precondition violated";
    case ErrorCode::kMissingHistory: return "missing history";
    case ErrorCode::kDomainExceeded: return "domain exceeded";
    case ErrorCode::kGridIncompatible: return "grid incompatible";
    case ErrorCode::kOutsideBall: return "outside ball";
    case ErrorCode::kIdenticalPaths: return "identical paths";
    case ErrorCode::kNotDivergenceFree: return "not divergence-free";
    case ErrorCode::kUnknownName: return "unknown name";
    case ErrorCode::kParse: return "parse error";
  }
  return "error";
}

// ---------------------------------------------------------------------------
// WaveVector / CVector

WaveVector::WaveVector(std::initializer_list<int> components) : n(static_cast<int>(components.size())) {
  if (n > kMaxDim) throw Error(ErrorCode::kDimensionMismatch, "dimension exceeds kMaxDim");
  std::copy(components.begin(), components.end(), c.begin());
}

std::int64_t WaveVector::norm2() const {
  std::int64_t s = 0;
  for (int i = 0; i < n; ++i) s += static_cast<std::int64_t>(c[i]) * c[i];
  return s;
}

double WaveVector::norm() const { return std::sqrt(static_cast<double>(norm2())); }

bool WaveVector::is_zero() const {
  for (int i = 0; i < n; ++i)
    if (c[i] != 0) return false;
  return true;
}

WaveVector WaveVector::operator-() const {
  WaveVector r(n);
  for (int i = 0; i < n; ++i) r.c[i] = -c[i];
  return r;
}

WaveVector operator+(const WaveVector& a, const WaveVector& b) {
  WaveVector r(a.n);
  for (int i = 0; i < a.n; ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}

WaveVector operator-(const WaveVector& a, const WaveVector& b) {
  WaveVector r(a.n);
  for (int i = 0; i < a.n; ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}

CVector::CVector(std::initializer_list<Complex> components) : n(static_cast<int>(components.size())) {
  if (n > kMaxDim) throw Error(ErrorCode::kDimensionMismatch, "dimension exceeds kMaxDim");
  std::copy(components.begin(), components.end(), v.begin());
}

double CVector::norm2() const {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::norm(v[i]);
  return s;
}

double CVector::norm() const { return std::sqrt(norm2()); }

bool CVector::is_finite() const {
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  return true;
}

CVector CVector::conj() const {
  CVector r(n);
  for (int i = 0; i < n; ++i) r.v[i] = std::conj(v[i]);
  return r;
}

CVector& CVector::operator+=(const CVector& o) {
  for (int i = 0; i < n; ++i) v[i] += o.v[i];
  return *this;
}

CVector& CVector::operator-=(const CVector& o) {
  for (int i = 0; i < n; ++i) v[i] -= o.v[i];
  return *this;
}

CVector& CVector::operator*=(Complex s) {
  for (int i = 0; i < n; ++i) v[i] *= s;
  return *this;
}

Complex pair(const CVector& a, const WaveVector& k) {
  Complex s = 0.0;
  for (int i = 0; i < a.n; ++i) s += a.v[i] * static_cast<double>(k.c[i]);
  return s;
}

Complex pair(const CVector& a, std::span<const double> x) {
  Complex s = 0.0;
  for (int i = 0; i < a.n; ++i) s += a.v[i] * x[i];
  return s;
}

// ---------------------------------------------------------------------------
// FourierField

FourierField::FourierField(int dimension, double truncation_radius)
    : n_(dimension), trunc_(truncation_radius) {
  if (dimension < 1 || dimension > kMaxDim)
    throw Error(ErrorCode::kDimensionMismatch, "unsupported dimension " + std::to_string(dimension));
}

bool FourierField::admits(const WaveVector& k) const {
  if (std::isinf(trunc_)) return true;
  return static_cast<double>(k.norm2()) <= trunc_ * trunc_ * (1.0 + 1e-14);
}

FourierField FourierField::from_modes(int dimension, double truncation_radius, std::vector<Mode> modes) {
  FourierField f(dimension, truncation_radius);
  for (auto& m : modes) {
    if (m.k.n != dimension || m.a.n != dimension)
      throw Error(ErrorCode::kDimensionMismatch, "mode dimension differs from field dimension");
  }
  // Fast path: the solvers hand over strictly sorted, admissible modes.
  bool canonical = true;
  for (std::size_t i = 0; i < modes.size() && canonical; ++i) {
    canonical = f.admits(modes[i].k) && (i == 0 || modes[i - 1].k < modes[i].k);
  }
  if (canonical) {
    f.modes_ = std::move(modes);
    return f;
  }
  std::stable_sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) { return a.k < b.k; });
  f.modes_.reserve(modes.size());
  for (auto& m : modes) {
    if (!f.admits(m.k)) continue;
    if (!f.modes_.empty() && f.modes_.back().k == m.k) {
      f.modes_.back().a += m.a;
    } else {
      f.modes_.push_back(m);
    }
  }
  return f;
}

FourierField FourierField::from_map(int dimension, double truncation_radius,
                                    const std::map<WaveVector, CVector>& modes) {
  FourierField f(dimension, truncation_radius);
  f.modes_.reserve(modes.size());
  for (const auto& [k, a] : modes) {
    if (k.n != dimension || a.n != dimension)
      throw Error(ErrorCode::kDimensionMismatch, "mode dimension differs from field dimension");
    if (f.admits(k)) f.modes_.push_back({k, a});
  }
  return f;
}

const CVector* FourierField::find(const WaveVector& k) const {
  auto it = std::lower_bound(modes_.begin(), modes_.end(), k,
                             [](const Mode& m, const WaveVector& key) { return m.k < key; });
  if (it == modes_.end() || !(it->k == k)) return nullptr;
  return &it->a;
}

CVector FourierField::coefficient(const WaveVector& k) const {
  const CVector* a = find(k);
  return a ? *a : CVector(n_);
}

FourierField FourierField::with_truncation(double truncation_radius) const {
  FourierField f(n_, truncation_radius);
  f.modes_.reserve(modes_.size());
  for (const auto& m : modes_)
    if (f.admits(m.k)) f.modes_.push_back(m);
  return f;
}

bool FourierField::is_finite() const {
  return std::all_of(modes_.begin(), modes_.end(), [](const Mode& m) { return m.a.is_finite(); });
}

bool FourierField::equal_modes(const FourierField& a, const FourierField& b) {
  for (std::size_t i = 0; i < a.modes_.size(); ++i) {
    if (!(a.modes_[i].k == b.modes_[i].k) || !(a.modes_[i].a == b.modes_[i].a)) return false;
  }
  return true;
}

namespace {

void require_same_dimension(const FourierField& f, const FourierField& g) {
  if (f.dimension() != g.dimension())
    throw Error(ErrorCode::kDimensionMismatch, "fields have dimensions " + std::to_string(f.dimension()) +
                                                   " and " + std::to_string(g.dimension()));
}

// Merge of two sorted mode lists with coefficient combination alpha*f + beta*g.
FourierField combine(const FourierField& f, Complex alpha, const FourierField& g, Complex beta) {
  require_same_dimension(f, g);
  std::vector<Mode> out;
  out.reserve(f.size() + g.size());
  auto fm = f.modes();
  auto gm = g.modes();
  std::size_t i = 0, j = 0;
  while (i < fm.size() || j < gm.size()) {
    if (j == gm.size() || (i < fm.size() && fm[i].k < gm[j].k)) {
      out.push_back({fm[i].k, alpha * fm[i].a});
      ++i;
    } else if (i == fm.size() || gm[j].k < fm[i].k) {
      out.push_back({gm[j].k, beta * gm[j].a});
      ++j;
    } else {
      out.push_back({fm[i].k, alpha * fm[i].a + beta * gm[j].a});
      ++i;
      ++j;
    }
  }
  return FourierField::from_modes(f.dimension(), f.truncation_radius(), std::move(out));
}

double radial_weight(const WaveVector& k, double d) {
  const auto k2 = k.norm2();
  if (d == 0.0) return 1.0;
  if (d == 1.0) return std::sqrt(static_cast<double>(k2));
  if (d == 2.0) return static_cast<double>(k2);
  return std::pow(static_cast<double>(k2), 0.5 * d);
}

}  // namespace

FourierField add(const FourierField& f, const FourierField& g) { return combine(f, 1.0, g, 1.0); }

FourierField subtract(const FourierField& f, const FourierField& g) { return combine(f, 1.0, g, -1.0); }

FourierField scale(const FourierField& f, Complex s) {
  std::vector<Mode> out(f.modes().begin(), f.modes().end());
  for (auto& m : out) m.a *= s;
  return FourierField::from_modes(f.dimension(), f.truncation_radius(), std::move(out));
}

// ---------------------------------------------------------------------------
// Seminorms

double seminorm_A(const FourierField& field, double d) {
  double s = 0.0;
  for (const auto& m : field.modes()) {
    if (m.k.is_zero()) continue;
    s += radial_weight(m.k, d) * m.a.norm();
  }
  return s;
}

double coefficient_energy(const FourierField& field) {
  double s = 0.0;
  for (const auto& m : field.modes()) s += m.a.norm2();
  return s;
}

double mean_magnitude(const FourierField& field) {
  if (field.dimension() == 0) return 0.0;
  return field.coefficient(WaveVector(field.dimension())).norm();
}

SeminormRecord seminorm_record(const FourierField& field, double time, std::span<const double> degrees) {
  SeminormRecord r;
  r.time = time;
  for (double d : degrees) r.values[d] = seminorm_A(field, d);
  r.a0_abs = mean_magnitude(field);
  return r;
}

// ---------------------------------------------------------------------------
// Calculus

FourierField laplacian(const FourierField& field) {
  std::vector<Mode> out(field.modes().begin(), field.modes().end());
  for (auto& m : out) m.a *= -static_cast<double>(m.k.norm2());
  return FourierField::from_modes(field.dimension(), field.truncation_radius(), std::move(out));
}

FourierField partial_derivative(const FourierField& field, std::span<const int> alpha) {
  if (static_cast<int>(alpha.size()) != field.dimension())
    throw Error(ErrorCode::kDimensionMismatch, "multi-index length differs from field dimension");
  std::vector<Mode> out(field.modes().begin(), field.modes().end());
  for (auto& m : out) {
    Complex factor = 1.0;
    for (int i = 0; i < field.dimension(); ++i)
      for (int p = 0; p < alpha[i]; ++p) factor *= Complex(0.0, m.k[i]);
    m.a *= factor;
  }
  return FourierField::from_modes(field.dimension(), field.truncation_radius(), std::move(out));
}

double divergence_defect(const FourierField& field) {
  double s = 0.0;
  for (const auto& m : field.modes()) s += std::abs(pair(m.a, m.k));
  return s;
}

bool is_divergence_free(const FourierField& field, double tol) {
  for (const auto& m : field.modes()) {
    if (std::abs(pair(m.a, m.k)) > tol * m.k.norm() * m.a.norm()) return false;
  }
  return true;
}

FourierField curl3(const FourierField& field) {
  if (field.dimension() != 3) throw Error(ErrorCode::kDimensionMismatch, "curl3 requires n = 3");
  std::vector<Mode> out;
  out.reserve(field.size());
  const Complex I(0.0, 1.0);
  for (const auto& m : field.modes()) {
    const auto& k = m.k;
    const auto& a = m.a;
    CVector r(3);
    r[0] = I * (static_cast<double>(k[1]) * a[2] - static_cast<double>(k[2]) * a[1]);
    r[1] = I * (static_cast<double>(k[2]) * a[0] - static_cast<double>(k[0]) * a[2]);
    r[2] = I * (static_cast<double>(k[0]) * a[1] - static_cast<double>(k[1]) * a[0]);
    out.push_back({k, r});
  }
  return FourierField::from_modes(3, field.truncation_radius(), std::move(out));
}

CVector evaluate(const FourierField& field, std::span<const double> x) {
  if (static_cast<int>(x.size()) != field.dimension())
    throw Error(ErrorCode::kDimensionMismatch, "point dimension differs from field dimension");
  CVector s(field.dimension());
  for (const auto& m : field.modes()) {
    double phase = 0.0;
    for (int i = 0; i < field.dimension(); ++i) phase += m.k[i] * x[i];
    s += std::polar(1.0, phase) * m.a;
  }
  return s;
}

FourierField enforce_reality(const FourierField& field) {
  std::map<WaveVector, CVector> out;
  const int n = field.dimension();
  for (const auto& m : field.modes()) {
    out.try_emplace(m.k, n);
    out.try_emplace(-m.k, n);
  }
  for (auto& [k, a] : out) {
    CVector sum = field.coefficient(k) + field.coefficient(-k).conj();
    a = 0.5 * sum;
  }
  return FourierField::from_map(n, field.truncation_radius(), out);
}

double reality_defect(const FourierField& field) {
  double worst = 0.0;
  for (const auto& m : field.modes()) {
    worst = std::max(worst, (m.a - field.coefficient(-m.k).conj()).norm());
  }
  return worst;
}

namespace {

double default_lattice_radius(int n) {
  switch (n) {
    case 1: return 100000.0;
    case 2: return 200.0;
    case 3: return 50.0;
    case 4: return 20.0;
    case 5: return 10.0;
    default: return 7.0;
  }
}

// Sum of |k|^{-2s} over 0 < |k| <= radius, enumerated dimension by dimension.
void lattice_partial_sum(int dim, int n, std::int64_t used, std::int64_t r2, double s, double& acc) {
  if (dim == n) {
    if (used > 0) acc += std::pow(static_cast<double>(used), -s);
    return;
  }
  const std::int64_t remaining = r2 - used;
  const auto m = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(remaining))));
  for (std::int64_t c = -m; c <= m; ++c) {
    const std::int64_t next = used + c * c;
    if (next > r2) continue;
    lattice_partial_sum(dim + 1, n, next, r2, s, acc);
  }
}

}  // namespace

double lattice_constant(int n, double s, double radius) {
  if (!(s > 0.5 * n))
    throw Error(ErrorCode::kDivergentConstant, "lattice sum diverges for s <= n/2");
  if (radius <= 0.0) radius = default_lattice_radius(n);
  const auto r2 = static_cast<std::int64_t>(std::floor(radius * radius));
  double partial = 0.0;
  lattice_partial_sum(0, n, 0, r2, s, partial);

  // Every lattice point with |k| > R owns the unit cube around it; that cube
  // lies in |x| > R - sqrt(n)/2 and there |k| >= |x| / (1 + sqrt(n)/(2R)).
  const double shift = 0.5 * std::sqrt(static_cast<double>(n));
  const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
  const double inner = radius - shift;
  const double tail = std::pow(1.0 + shift / radius, 2.0 * s) * sphere * std::pow(inner, n - 2.0 * s) /
                      (2.0 * s - n);
  return std::sqrt(partial + tail);
}

namespace {

double cached_lattice_constant(int n, double s) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, double> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find({n, s});
  if (it != cache.end()) return it->second;
  const double value = lattice_constant(n, s);
  cache.emplace(std::pair{n, s}, value);
  return value;
}

}  // namespace

double sobolev_embedding_bound(const FourierField& field, double s, double d) {
  const double ks = cached_lattice_constant(field.dimension(), s);
  double acc = 0.0;
  for (const auto& m : field.modes()) {
    if (m.k.is_zero()) continue;
    acc += std::pow(static_cast<double>(m.k.norm2()), s + d) * m.a.norm2();
  }
  return ks * std::sqrt(acc);
}

}  // namespace fcns
