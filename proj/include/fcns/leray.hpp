#pragma once

// Mode-wise Leray projection: P_0 = id and, for k != 0, the orthogonal
// projection of C^n onto the complement of k.

#include <array>

#include "fcns/spectral.hpp"

namespace fcns {

struct ProjectorMatrix {
  int n = 0;
  std::array<std::array<double, kMaxDim>, kMaxDim> entries{};

  double operator()(int i, int j) const { return entries[i][j]; }
};

/// Entries (delta_ij k^2 - k_i k_j) / k^2; identity for k = 0.
ProjectorMatrix projector_matrix(const WaveVector& k);

CVector apply(const ProjectorMatrix& p, const CVector& a);

/// P_k a without forming the matrix: a - k <a, k> / k^2.
CVector project_mode(const WaveVector& k, const CVector& a);

/// a_k -> P_k a_k for every stored mode.
FourierField project_field(const FourierField& field);

}  // namespace fcns
