#pragma once

#include "gcstar/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

namespace gcstar {

// splitmix64; the only source of randomness so reports are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  int below(int n) { return n <= 0 ? 0 : static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
  int between(int lo, int hi) { return lo + below(hi - lo + 1); }
  bool coin() { return (next() >> 63) != 0; }

  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  cx complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re * std::sqrt(0.5), im * std::sqrt(0.5)};
  }

  Rng split() { return Rng(next()); }

 private:
  std::uint64_t state_;
};

inline Mat gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.complex_gaussian();
  return m;
}

// Haar-distributed unitary: QR of a complex Gaussian matrix with diag(R) made positive.
inline Mat haar_unitary(Rng& rng, Eigen::Index n) {
  if (n == 0) return Mat(0, 0);
  const Mat z = gaussian_matrix(rng, n, n);
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

// Haar-random isometry C^cols -> C^rows (rows >= cols).
inline Mat haar_isometry(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  return haar_unitary(rng, rows).leftCols(cols);
}

}  // namespace gcstar
