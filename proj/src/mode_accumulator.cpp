#include "mode_accumulator.hpp"

#include <algorithm>
#include <cmath>

namespace fcns::detail {

namespace {
constexpr std::size_t kMaxDenseCells = std::size_t{1} << 20;
}

Box bounding_box(const FourierField& f) {
  Box b;
  const int n = f.dimension();
  if (f.empty()) return b;
  for (int i = 0; i < n; ++i) {
    b.lo[i] = f.modes().front().k[i];
    b.hi[i] = b.lo[i];
  }
  for (const auto& m : f.modes()) {
    for (int i = 0; i < n; ++i) {
      b.lo[i] = std::min(b.lo[i], m.k[i]);
      b.hi[i] = std::max(b.hi[i], m.k[i]);
    }
  }
  return b;
}

Box sum_box(const Box& a, const Box& b, int n) {
  Box r;
  for (int i = 0; i < n; ++i) {
    r.lo[i] = a.lo[i] + b.lo[i];
    r.hi[i] = a.hi[i] + b.hi[i];
  }
  return r;
}

ModeAccumulator::ModeAccumulator(int n, const Box& box) : n_(n), box_(box) {
  std::size_t cells = 1;
  for (int i = n - 1; i >= 0; --i) {
    stride_[i] = cells;
    const auto extent = static_cast<std::size_t>(box.hi[i] - box.lo[i] + 1);
    if (cells > kMaxDenseCells / extent) {
      dense_ = false;
      break;
    }
    cells *= extent;
  }
  if (dense_) {
    cells_.assign(cells, CVector(n));
    touched_.assign(cells, 0);
  }
}

std::size_t ModeAccumulator::index(const WaveVector& k) const {
  std::size_t idx = 0;
  for (int i = 0; i < n_; ++i) idx += static_cast<std::size_t>(k[i] - box_.lo[i]) * stride_[i];
  return idx;
}

std::ptrdiff_t ModeAccumulator::offset(const WaveVector& k) const {
  std::ptrdiff_t off = 0;
  for (int i = 0; i < n_; ++i) off += static_cast<std::ptrdiff_t>(k[i]) * static_cast<std::ptrdiff_t>(stride_[i]);
  return off;
}

std::ptrdiff_t ModeAccumulator::origin() const {
  std::ptrdiff_t off = 0;
  for (int i = 0; i < n_; ++i) off += static_cast<std::ptrdiff_t>(box_.lo[i]) * static_cast<std::ptrdiff_t>(stride_[i]);
  return off;
}

void ModeAccumulator::add(const WaveVector& k, const CVector& a) {
  if (dense_) {
    const std::size_t idx = index(k);
    cells_[idx] += a;
    touched_[idx] = 1;
  } else {
    auto [it, inserted] = sparse_.try_emplace(k, a);
    if (!inserted) it->second += a;
  }
}

void ModeAccumulator::add_scaled(const WaveVector& k, Complex s, const CVector& a) {
  if (dense_) {
    const std::size_t idx = index(k);
    CVector& cell = cells_[idx];
    for (int i = 0; i < n_; ++i) cell.v[i] += s * a.v[i];
    touched_[idx] = 1;
  } else {
    add(k, s * a);
  }
}

ModeAccumulator::Collected ModeAccumulator::collect(double truncation_radius, bool project) const {
  Collected out;
  const bool finite_radius = !std::isinf(truncation_radius);
  const double r2 = truncation_radius * truncation_radius * (1.0 + 1e-14);
  auto emit = [&](const WaveVector& k, const CVector& raw) {
    CVector a = project ? project_mode(k, raw) : raw;
    if (finite_radius && static_cast<double>(k.norm2()) > r2) {
      out.dropped += a.norm();
    } else {
      out.kept.push_back({k, a});
    }
  };
  if (dense_) {
    out.kept.reserve(static_cast<std::size_t>(std::count(touched_.begin(), touched_.end(), 1)));
    // Row-major with the first component slowest: index order is lexicographic.
    for (std::size_t idx = 0; idx < cells_.size(); ++idx) {
      if (!touched_[idx]) continue;
      WaveVector k(n_);
      std::size_t rem = idx;
      for (int i = 0; i < n_; ++i) {
        k[i] = box_.lo[i] + static_cast<int>(rem / stride_[i]);
        rem %= stride_[i];
      }
      emit(k, cells_[idx]);
    }
  } else {
    out.kept.reserve(sparse_.size());
    for (const auto& [k, a] : sparse_) emit(k, a);
  }
  return out;
}

}  // namespace fcns::detail
