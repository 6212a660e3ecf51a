#include "fcns/leray.hpp"

namespace fcns {

ProjectorMatrix projector_matrix(const WaveVector& k) {
  ProjectorMatrix p;
  p.n = k.n;
  const std::int64_t k2 = k.norm2();
  for (int i = 0; i < k.n; ++i) {
    for (int j = 0; j < k.n; ++j) {
      if (k2 == 0) {
        p.entries[i][j] = i == j ? 1.0 : 0.0;
        continue;
      }
      // Integer numerator, one rounding at the division.
      const std::int64_t num = (i == j ? k2 : 0) - static_cast<std::int64_t>(k[i]) * k[j];
      p.entries[i][j] = static_cast<double>(num) / static_cast<double>(k2);
    }
  }
  return p;
}

CVector apply(const ProjectorMatrix& p, const CVector& a) {
  CVector r(p.n);
  for (int i = 0; i < p.n; ++i) {
    Complex s = 0.0;
    for (int j = 0; j < p.n; ++j) s += p.entries[i][j] * a[j];
    r[i] = s;
  }
  return r;
}

CVector project_mode(const WaveVector& k, const CVector& a) {
  const std::int64_t k2 = k.norm2();
  if (k2 == 0) return a;
  const Complex c = pair(a, k) / static_cast<double>(k2);
  CVector r = a;
  for (int i = 0; i < a.n; ++i) r[i] -= c * static_cast<double>(k[i]);
  return r;
}

FourierField project_field(const FourierField& field) {
  std::vector<Mode> out(field.modes().begin(), field.modes().end());
  for (auto& m : out) m.a = apply(projector_matrix(m.k), m.a);
  return FourierField::from_modes(field.dimension(), field.truncation_radius(), std::move(out));
}

}  // namespace fcns
