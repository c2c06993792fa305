#pragma once

#include "gcstar/measures.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gcstar {

// C(Z)-C(Y)-correspondence in graded normal form: each basis vector e_i lies in the
// fibre H_{left[i], right[i]}; the basis is orthogonal with <e_i, e_i> = weight[i].
struct Correspondence {
  int z_size = 0;
  int y_size = 0;
  std::vector<int> left, right;
  std::vector<double> weight;
  std::vector<int> origin;                   // point of the underlying space, for l2 modules
  std::vector<std::pair<int, int>> factors;  // (i, j) for tensor products

  int dim() const { return static_cast<int>(left.size()); }
  int fibre_dim(int z, int y) const {
    int n = 0;
    for (int i = 0; i < dim(); ++i) n += left[i] == z && right[i] == y;
    return n;
  }
  void push(int z, int y, double w, int org = -1) {
    left.push_back(z);
    right.push_back(y);
    weight.push_back(w);
    origin.push_back(org);
  }
  Eigen::VectorXd sqrt_weights() const {
    Eigen::VectorXd s(dim());
    for (int i = 0; i < dim(); ++i) s(i) = std::sqrt(weight[i]);
    return s;
  }
};

inline bool same_shape(const Correspondence& a, const Correspondence& b, double tol = kCanonTol) {
  if (a.z_size != b.z_size || a.y_size != b.y_size || a.left != b.left || a.right != b.right) return false;
  for (int i = 0; i < a.dim(); ++i)
    if (std::abs(a.weight[i] - b.weight[i]) > tol * std::max(1.0, std::abs(a.weight[i]))) return false;
  return true;
}

// Orthonormal-basis correspondence with the given fibre dimensions dims[z][y].
inline Correspondence graded_space(const std::vector<std::vector<int>>& dims) {
  Correspondence E;
  E.z_size = static_cast<int>(dims.size());
  E.y_size = dims.empty() ? 0 : static_cast<int>(dims[0].size());
  for (int y = 0; y < E.y_size; ++y)
    for (int z = 0; z < E.z_size; ++z)
      for (int k = 0; k < dims[z][y]; ++k) E.push(z, y, 1.0);
  return E;
}

struct ModuleMap {
  Correspondence source, target;
  Mat matrix;  // target.dim() x source.dim(), in the weighted point bases

  Mat normalized() const {
    return target.sqrt_weights().cast<cx>().asDiagonal() * matrix *
           source.sqrt_weights().cwiseInverse().cast<cx>().asDiagonal();
  }
};

inline Mat from_normalized(const Correspondence& source, const Correspondence& target, const Mat& n) {
  return target.sqrt_weights().cwiseInverse().cast<cx>().asDiagonal() * n *
         source.sqrt_weights().cast<cx>().asDiagonal();
}

inline ModuleMap identity_map(const Correspondence& E) {
  return {E, E, Mat::Identity(E.dim(), E.dim())};
}

inline ModuleMap compose(const ModuleMap& b, const ModuleMap& a) {
  if (b.source.dim() != a.target.dim()) throw std::invalid_argument("compose: shape mismatch");
  return {a.source, b.target, b.matrix * a.matrix};
}

// m* = W_S^{-1} M^H W_T in the weighted bases.
inline ModuleMap adjoint(const ModuleMap& m) {
  const Eigen::VectorXd ws = Eigen::Map<const Eigen::VectorXd>(m.source.weight.data(), m.source.dim());
  const Eigen::VectorXd wt = Eigen::Map<const Eigen::VectorXd>(m.target.weight.data(), m.target.dim());
  Mat a = ws.cwiseInverse().cast<cx>().asDiagonal() * m.matrix.adjoint() * wt.cast<cx>().asDiagonal();
  return {m.target, m.source, a};
}

// C(Y)-valued inner product.
inline std::vector<cx> inner(const Correspondence& E, const Vec& xi, const Vec& eta) {
  std::vector<cx> out(static_cast<std::size_t>(E.y_size), 0.0);
  for (int i = 0; i < E.dim(); ++i) out[E.right[i]] += std::conj(xi(i)) * eta(i) * E.weight[i];
  return out;
}

inline double module_norm(const Correspondence& E, const Vec& xi) {
  double m = 0.0;
  for (const cx& v : inner(E, xi, xi)) m = std::max(m, v.real());
  return std::sqrt(m);
}

inline double operator_norm(const ModuleMap& m) { return spectral_norm(m.normalized()); }

inline double unitarity_defect(const ModuleMap& m) {
  if (m.source.dim() != m.target.dim()) return std::numeric_limits<double>::infinity();
  const Mat n = m.normalized();
  const Mat id = Mat::Identity(n.rows(), n.cols());
  return std::max(max_abs(n.adjoint() * n - id), max_abs(n * n.adjoint() - id));
}

inline double isometry_defect(const ModuleMap& m) {
  const Mat n = m.normalized();
  return max_abs(n.adjoint() * n - Mat::Identity(n.cols(), n.cols()));
}

inline double right_linearity_defect(const ModuleMap& m) {
  double d = 0.0;
  const Mat n = m.normalized();
  for (int i = 0; i < m.target.dim(); ++i)
    for (int j = 0; j < m.source.dim(); ++j)
      if (m.target.right[i] != m.source.right[j]) d = std::max(d, std::abs(n(i, j)));
  return d;
}

inline double intertwining_defect(const ModuleMap& m) {
  double d = 0.0;
  const Mat n = m.normalized();
  for (int i = 0; i < m.target.dim(); ++i)
    for (int j = 0; j < m.source.dim(); ++j)
      if (m.target.left[i] != m.source.left[j]) d = std::max(d, std::abs(n(i, j)));
  return d;
}

inline bool is_unitary(const ModuleMap& m, double tol = kTol) {
  return unitarity_defect(m) <= tol && right_linearity_defect(m) <= tol;
}

inline bool is_intertwiner(const ModuleMap& m, double tol = kTol) {
  return m.source.z_size == m.target.z_size && intertwining_defect(m) <= tol;
}

inline Correspondence l2(const TopologicalCorrespondence& T) {
  Correspondence E;
  E.z_size = T.z_size;
  E.y_size = T.y_size();
  for (int x = 0; x < T.space(); ++x)
    if (T.family.weight[x] > 0.0) E.push(T.backward[x], T.forward(x), T.family.weight[x], x);
  return E;
}

inline Correspondence tensor(const Correspondence& E, const Correspondence& F) {
  if (E.y_size != F.z_size) throw std::invalid_argument("tensor: algebra mismatch");
  Correspondence T;
  T.z_size = E.z_size;
  T.y_size = F.y_size;
  for (int i = 0; i < E.dim(); ++i)
    for (int j = 0; j < F.dim(); ++j)
      if (E.right[i] == F.left[j]) {
        T.push(E.left[i], F.right[j], E.weight[i] * F.weight[j], static_cast<int>(T.factors.size()));
        T.factors.emplace_back(i, j);
      }
  return T;
}

namespace detail {
inline std::vector<int> pair_lookup(const Correspondence& T, int e_dim, int f_dim) {
  std::vector<int> at(static_cast<std::size_t>(e_dim) * f_dim, -1);
  for (int k = 0; k < T.dim(); ++k) at[static_cast<std::size_t>(T.factors[k].first) * f_dim + T.factors[k].second] = k;
  return at;
}
}  // namespace detail

// id_P (x) m : P (x) m.source -> P (x) m.target; uses only entries of m that respect the left grading.
inline ModuleMap tensor_id_left(const Correspondence& P, const ModuleMap& m) {
  Correspondence A = tensor(P, m.source), B = tensor(P, m.target);
  const auto at = detail::pair_lookup(B, P.dim(), m.target.dim());
  Mat M = Mat::Zero(B.dim(), A.dim());
  for (int col = 0; col < A.dim(); ++col) {
    const auto [p, j] = A.factors[col];
    for (int i = 0; i < m.target.dim(); ++i) {
      if (m.matrix(i, j) == cx(0.0)) continue;
      const int row = at[static_cast<std::size_t>(p) * m.target.dim() + i];
      if (row >= 0) M(row, col) = m.matrix(i, j);
    }
  }
  return {A, B, M};
}

// m (x) id_K : m.source (x) K -> m.target (x) K; uses only entries of m that respect the right grading.
inline ModuleMap tensor_id_right(const ModuleMap& m, const Correspondence& K) {
  Correspondence A = tensor(m.source, K), B = tensor(m.target, K);
  const auto at = detail::pair_lookup(B, m.target.dim(), K.dim());
  Mat M = Mat::Zero(B.dim(), A.dim());
  for (int col = 0; col < A.dim(); ++col) {
    const auto [j, k] = A.factors[col];
    for (int i = 0; i < m.target.dim(); ++i) {
      if (m.matrix(i, j) == cx(0.0)) continue;
      const int row = at[static_cast<std::size_t>(i) * K.dim() + k];
      if (row >= 0) M(row, col) = m.matrix(i, j);
    }
  }
  return {A, B, M};
}

// Regrouping E (x) (F (x) K) -> (E (x) F) (x) K.
inline ModuleMap associator(const Correspondence& E, const Correspondence& F, const Correspondence& K) {
  const Correspondence FK = tensor(F, K), EF = tensor(E, F);
  Correspondence A = tensor(E, FK), B = tensor(EF, K);
  const auto ef_at = detail::pair_lookup(EF, E.dim(), F.dim());
  const auto b_at = detail::pair_lookup(B, EF.dim(), K.dim());
  Mat M = Mat::Zero(B.dim(), A.dim());
  for (int col = 0; col < A.dim(); ++col) {
    const auto [e, fk] = A.factors[col];
    const auto [f, k] = FK.factors[fk];
    const int ef = ef_at[static_cast<std::size_t>(e) * F.dim() + f];
    M(b_at[static_cast<std::size_t>(ef) * K.dim() + k], col) = 1.0;
  }
  return {A, B, M};
}

// T_x : F -> E (x) F, eta |-> x (x) eta.
inline ModuleMap creation(const Correspondence& E, const Vec& x, const Correspondence& F) {
  if (x.size() != E.dim()) throw std::invalid_argument("creation: element not in E");
  Correspondence T = tensor(E, F);
  Mat M = Mat::Zero(T.dim(), F.dim());
  for (int k = 0; k < T.dim(); ++k) {
    const auto [i, j] = T.factors[k];
    M(k, j) = x(i);
  }
  return {F, T, M};
}

// Tensor of a topological correspondence with a family along its forward leg,
// identified with the composite correspondence: delta_x (x) delta_f(x) |-> delta_x.
inline ModuleMap gamma_compose(const TopologicalCorrespondence& V, const MeasureFamily& mu) {
  if (V.y_size() != mu.along.dom) throw std::invalid_argument("gamma_compose: domain mismatch");
  const Correspondence E = l2(V), F = l2(as_correspondence(mu));
  Correspondence T = tensor(E, F);
  const TopologicalCorrespondence C = make_correspondence(V.z_size, V.backward, compose_families(V.family, mu));
  Correspondence L = l2(C);
  std::vector<int> slot(static_cast<std::size_t>(V.space()), -1);
  for (int k = 0; k < L.dim(); ++k) slot[L.origin[k]] = k;
  Mat M = Mat::Zero(L.dim(), T.dim());
  int hits = 0;
  for (int k = 0; k < T.dim(); ++k) {
    const int x = E.origin[T.factors[k].first];
    if (F.origin[T.factors[k].second] != V.forward(x) || slot[x] < 0)
      throw std::logic_error("gamma_compose: support mismatch between tensor and composite");
    M(slot[x], k) = std::sqrt(T.weight[k] / L.weight[slot[x]]);
    ++hits;
  }
  if (hits != L.dim()) throw std::logic_error("gamma_compose: support mismatch between tensor and composite");
  return {T, L, M};
}

inline ModuleMap gamma_compose(const MeasureFamily& lambda, const MeasureFamily& mu) {
  return gamma_compose(as_correspondence(lambda), mu);
}

// l2(V) (x) l2(W) -> l2(V x_Y W), delta_v (x) delta_w |-> delta_(v,w).
inline ModuleMap gamma_fibre(const TopologicalCorrespondence& V, const TopologicalCorrespondence& W) {
  const Correspondence E = l2(V), F = l2(W);
  Correspondence T = tensor(E, F);
  const FibreProduct fp = fibre_product(V, W);
  Correspondence L = l2(fp.corr);
  std::vector<int> slot(fp.points.size(), -1);
  for (int k = 0; k < L.dim(); ++k) slot[L.origin[k]] = k;
  std::vector<int> index(static_cast<std::size_t>(V.space()) * W.space(), -1);
  for (std::size_t p = 0; p < fp.points.size(); ++p)
    index[static_cast<std::size_t>(fp.points[p].first) * W.space() + fp.points[p].second] = static_cast<int>(p);
  Mat M = Mat::Zero(L.dim(), T.dim());
  for (int k = 0; k < T.dim(); ++k) {
    const int v = E.origin[T.factors[k].first], w = F.origin[T.factors[k].second];
    const int p = index[static_cast<std::size_t>(v) * W.space() + w];
    if (p < 0 || slot[p] < 0) throw std::logic_error("gamma_fibre: support mismatch");
    M(slot[p], k) = std::sqrt(T.weight[k] / L.weight[slot[p]]);
  }
  if (T.dim() != L.dim()) throw std::logic_error("gamma_fibre: support mismatch");
  return {T, L, M};
}

// Unitary l2(C1) -> l2(C2) induced by an isomorphism (Phi, delta) of topological correspondences.
inline ModuleMap induced_unitary(const TopologicalCorrespondence& C1, const TopologicalCorrespondence& C2,
                                 const std::vector<int>& phi, const std::vector<double>& delta) {
  Correspondence A = l2(C1), B = l2(C2);
  std::vector<int> slot(static_cast<std::size_t>(C2.space()), -1);
  for (int k = 0; k < B.dim(); ++k) slot[B.origin[k]] = k;
  Mat M = Mat::Zero(B.dim(), A.dim());
  for (int k = 0; k < A.dim(); ++k) {
    const int y = phi[A.origin[k]];
    if (slot[y] >= 0) M(slot[y], k) = 1.0 / std::sqrt(delta[y]);
  }
  return {A, B, M};
}

// Inner-product preservation of m on the full basis, relative to the Gram scale.
inline double gram_defect(const ModuleMap& m) {
  double d = 0.0;
  for (int i = 0; i < m.source.dim(); ++i)
    for (int j = 0; j < m.source.dim(); ++j) {
      const auto lhs = inner(m.target, m.matrix.col(i), m.matrix.col(j));
      const double ref = std::sqrt(m.source.weight[i] * m.source.weight[j]);
      for (int y = 0; y < m.source.y_size; ++y) {
        const cx rhs = (i == j && m.source.right[i] == y) ? cx(m.source.weight[i]) : cx(0.0);
        d = std::max(d, std::abs(lhs[y] - rhs) / ref);
      }
    }
  return d;
}

inline Correspondence direct_sum(const Correspondence& A, const Correspondence& B) {
  if (A.z_size != B.z_size || A.y_size != B.y_size) throw std::invalid_argument("direct_sum: algebra mismatch");
  Correspondence S = A;
  S.factors.clear();
  for (int i = 0; i < B.dim(); ++i) S.push(B.left[i], B.right[i], B.weight[i], B.origin[i]);
  return S;
}

inline Mat block_diag(const Mat& a, const Mat& b) {
  Mat m = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

}  // namespace gcstar
