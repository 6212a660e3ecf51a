#include "fcns/builtins.hpp"

#include <cmath>
#include <random>

#include "fcns/leray.hpp"
#include "fcns/oracles.hpp"

namespace fcns {

namespace {

void require_dimension(int n, int min_dim) {
  if (n < min_dim || n > kMaxDim) {
    throw Error(ErrorCode::kDimensionMismatch, "builtin needs " + std::to_string(min_dim) +
                                                   " <= n <= " + std::to_string(kMaxDim));
  }
}

FourierField taylor_green(const BuiltinParams& p) {
  const int n = p.dimension;
  require_dimension(n, 2);
  // sin(x) = (e^{ix} - e^{-ix}) / 2i and cos(y) = (e^{iy} + e^{-iy}) / 2.
  const int depth = n >= 3 ? 3 : 2;
  const double weight = depth == 3 ? 0.125 : 0.25;
  std::vector<Mode> modes;
  for (int s1 : {-1, 1}) {
    for (int s2 : {-1, 1}) {
      for (int s3 : {-1, 1}) {
        if (depth == 2 && s3 == 1) continue;
        WaveVector k(n);
        k[0] = s1;
        k[1] = s2;
        if (depth == 3) k[2] = s3;
        CVector a(n);
        a[0] = Complex(0.0, -weight * s1 * p.amplitude);
        a[1] = Complex(0.0, weight * s2 * p.amplitude);
        modes.push_back({k, a});
      }
    }
  }
  return FourierField::from_modes(n, p.truncation_radius, std::move(modes));
}

FourierField single_mode(const BuiltinParams& p) {
  const int n = p.dimension;
  require_dimension(n, 2);
  WaveVector k(n);
  k[0] = 1;
  CVector a(n);
  a[1] = p.amplitude;
  return FourierField::from_modes(n, p.truncation_radius, {{k, a}});
}

// Random divergence-free real field with zero mean on the box |k_i| <= box.
FourierField random_field(int n, int box, double truncation_radius, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Mode> modes;
  WaveVector k(n);
  for (int i = 0; i < n; ++i) k[i] = -box;
  while (true) {
    const double k2 = static_cast<double>(k.norm2());
    if (k2 > 0.0 && k2 <= truncation_radius * truncation_radius) {
      CVector a(n);
      // Decay with |k| keeps the higher seminorms moderate.
      const double w = 1.0 / (1.0 + k2);
      for (int i = 0; i < n; ++i) a[i] = Complex(normal(rng), normal(rng)) * w;
      modes.push_back({k, project_mode(k, a)});
    }
    int i = n - 1;
    while (i >= 0 && k[i] == box) k[i--] = -box;
    if (i < 0) break;
    ++k[i];
  }
  return enforce_reality(FourierField::from_modes(n, truncation_radius, std::move(modes)));
}

FourierField rescale_to(const FourierField& f, double target) {
  const double a0 = seminorm_A(f, 0.0);
  if (a0 == 0.0) return f;
  return scale(f, target / a0);
}

FourierField random_small(const BuiltinParams& p) {
  require_dimension(p.dimension, 2);
  std::mt19937_64 rng(p.seed);
  return rescale_to(random_field(p.dimension, p.box, p.truncation_radius, rng), p.amplitude);
}

}  // namespace

FourierField builtin_initial_data(const std::string& name, const BuiltinParams& params) {
  if (name == "taylor-green") return taylor_green(params);
  if (name == "single-mode") return single_mode(params);
  if (name == "random-small") return random_small(params);
  throw Error(ErrorCode::kUnknownName, "unknown initial data '" + name + "'");
}

AdvectionSource builtin_advection(const std::string& name, const BuiltinParams& params) {
  const int n = params.dimension;
  if (name == "zero") return AdvectionSource::zero(n);
  if (name == "shear") {
    require_dimension(n, 2);
    WaveVector k(n);
    k[1] = 1;
    CVector a(n);
    a[0] = Complex(0.0, -0.5 * params.amplitude);  // amplitude sin(x_2) in the first component
    FourierField v = FourierField::from_modes(n, kInfinity, {{k, a}, {-k, a.conj()}});
    return AdvectionSource::constant(std::move(v), "shear");
  }
  if (name == "random-small") {
    require_dimension(n, 2);
    // A different stream from the initial data drawn with the same seed.
    std::mt19937_64 rng(params.seed ^ 0x9e3779b97f4a7c15ULL);
    const FourierField v1 = rescale_to(random_field(n, params.box, kInfinity, rng), params.amplitude);
    const FourierField v2 = rescale_to(random_field(n, params.box, kInfinity, rng), params.amplitude);
    return {[v1, v2](double t) { return add(scale(v1, std::cos(t)), scale(v2, std::sin(t))); },
            true, true, "random-small"};
  }
  if (name == "bessel") {
    require_dimension(n, 3);
    WaveVector l(n);
    l[n - 1] = 1;
    CVector b(n);
    b[0] = params.amplitude;
    return bessel_advection(l, b);
  }
  throw Error(ErrorCode::kUnknownName, "unknown advection '" + name + "'");
}

FourierField random_divergence_free_field(int dimension, int box, double truncation_radius,
                                          std::uint64_t seed) {
  require_dimension(dimension, 2);
  std::mt19937_64 rng(seed);
  return random_field(dimension, box, truncation_radius, rng);
}

std::vector<std::string> builtin_initial_names() { return {"taylor-green", "single-mode", "random-small"}; }

std::vector<std::string> builtin_advection_names() { return {"zero", "shear", "random-small", "bessel"}; }

}  // namespace fcns
