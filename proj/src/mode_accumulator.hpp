#pragma once

// Scatter-add buffer for coefficient sums over wave vectors. Dense over the
// bounding box when it is small enough, ordered map otherwise; either way the
// collected modes come out in lexicographic order.

#include <map>
#include <vector>

#include "fcns/leray.hpp"
#include "fcns/spectral.hpp"

namespace fcns::detail {

struct Box {
  std::array<int, kMaxDim> lo{};
  std::array<int, kMaxDim> hi{};
};

Box bounding_box(const FourierField& f);
/// Box of all sums a + b with a in `a`, b in `b`.
Box sum_box(const Box& a, const Box& b, int n);

class ModeAccumulator {
 public:
  ModeAccumulator(int n, const Box& box);

  void add(const WaveVector& k, const CVector& a);
  void add_scaled(const WaveVector& k, Complex s, const CVector& a);

  // Dense fast path: the cell of k is offset(k) - offset(box.lo), which is
  // linear in k, so the cell of a sum of wave vectors is a sum of offsets.
  bool dense() const { return dense_; }
  std::ptrdiff_t offset(const WaveVector& k) const;
  std::ptrdiff_t origin() const;
  void add_scaled_at(std::ptrdiff_t cell, Complex s, const CVector& a) {
    CVector& c = cells_[static_cast<std::size_t>(cell)];
    for (int i = 0; i < n_; ++i) c.v[i] += s * a.v[i];
    touched_[static_cast<std::size_t>(cell)] = 1;
  }

  struct Collected {
    std::vector<Mode> kept;
    double dropped = 0.0;  // sum of |coefficient| over modes beyond the radius
  };

  /// Applies P_k to each accumulated coefficient when `project` is set, then
  /// splits the modes by the truncation radius.
  Collected collect(double truncation_radius, bool project) const;

 private:
  std::size_t index(const WaveVector& k) const;

  int n_;
  Box box_;
  std::array<std::size_t, kMaxDim> stride_{};
  bool dense_ = true;
  std::vector<CVector> cells_;
  std::vector<unsigned char> touched_;
  std::map<WaveVector, CVector> sparse_;
};

}  // namespace fcns::detail
