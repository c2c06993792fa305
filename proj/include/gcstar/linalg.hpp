#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcstar {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kTol = 1e-9;
inline constexpr double kCanonTol = 1e-12;

struct EigenError : std::runtime_error {
  double residual;
  EigenError(const std::string& what, double res) : std::runtime_error(what), residual(res) {}
};

inline double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

struct HermitianEigen {
  std::vector<double> values;  // ascending
  Mat vectors;                 // columns, in the order of values
};

// Cyclic Jacobi for Hermitian matrices.
inline HermitianEigen hermitian_eigen(Mat a, double threshold = 1e-12, int max_sweeps = 100) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("hermitian_eigen: matrix not square");
  HermitianEigen out{std::vector<double>(static_cast<std::size_t>(n)), Mat::Identity(n, n)};
  if (n == 0) return out;
  Mat v = Mat::Identity(n, n);
  a = (0.5 * (a + a.adjoint())).eval();
  const double scale = std::max(a.norm(), 1e-300);
  auto off = [&] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };
  int sweep = 0;
  for (; sweep < max_sweeps && off() > threshold * scale; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double b = std::abs(a(p, q));
        if (b <= 1e-300) continue;
        const cx phase = a(p, q) / b;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * b);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Q = diag(1, conj(phase)) * [[c, s], [-s, c]]
        const cx qpp = c, qpq = s, qqp = -s * std::conj(phase), qqq = c * std::conj(phase);
        for (Eigen::Index k = 0; k < n; ++k) {
          const cx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * qpp + akq * qqp;
          a(k, q) = akp * qpq + akq * qqq;
          const cx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * qpp + vkq * qqp;
          v(k, q) = vkp * qpq + vkq * qqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const cx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(qpp) * apk + std::conj(qqp) * aqk;
          a(q, k) = std::conj(qpq) * apk + std::conj(qqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
      }
    }
  }
  const double residual = off();
  if (residual > threshold * scale)
    throw EigenError("Jacobi iteration did not converge, off-diagonal residual " + std::to_string(residual),
                     residual);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&a](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[static_cast<std::size_t>(k)] = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

// Eigenvalues in ascending order.
inline std::vector<double> hermitian_eigenvalues(const Mat& a, double threshold = 1e-12, int max_sweeps = 100) {
  return hermitian_eigen(a, threshold, max_sweeps).values;
}

// Largest singular value of a plain (orthonormal-basis) matrix.
inline double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  const Mat g = m.rows() < m.cols() ? Mat(m * m.adjoint()) : Mat(m.adjoint() * m);
  const auto ev = hermitian_eigenvalues(g);
  return std::sqrt(std::max(0.0, ev.back()));
}

inline Eigen::Index numerical_rank(const Mat& m, double tol = 1e-9) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  const double cut = tol * std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

// Least-squares solution X of X * a = b (rows of b in the row space of a).
inline Mat right_solve(const Mat& a, const Mat& b) {
  if (a.size() == 0 || b.size() == 0) return Mat::Zero(b.rows(), a.rows());
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(a.adjoint());
  return cod.solve(b.adjoint()).adjoint();
}

}  // namespace gcstar
