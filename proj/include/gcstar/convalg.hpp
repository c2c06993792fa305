#pragma once

#include "gcstar/fingroupoid.hpp"
#include "gcstar/hilbmod.hpp"

#include <cmath>
#include <vector>

namespace gcstar {

// A function on the arrows, as an element of the convolution algebra.
using ConvElement = std::vector<cx>;

inline ConvElement delta(const FiniteGroupoid& G, int g) {
  ConvElement f(static_cast<std::size_t>(G.arrows()), 0.0);
  f[g] = 1.0;
  return f;
}

inline ConvElement random_element(Rng& rng, const FiniteGroupoid& G, double density = 1.0) {
  ConvElement f(static_cast<std::size_t>(G.arrows()), 0.0);
  for (auto& v : f)
    if (density >= 1.0 || rng.uniform() < density) v = rng.complex_gaussian();
  return f;
}

// (f1 * f2)(k) = sum_{h in G^{r(k)}} f1(h) f2(h^-1 k) alpha(h).
inline ConvElement convolve(const MeasuredGroupoid& M, const ConvElement& f1, const ConvElement& f2) {
  const auto& G = M.G;
  ConvElement out(static_cast<std::size_t>(G.arrows()), 0.0);
  for (int k = 0; k < G.arrows(); ++k)
    for (int h = 0; h < G.arrows(); ++h)
      if (G.rng[h] == G.rng[k]) out[k] += f1[h] * f2[G.compose(G.inv[h], k)] * M.alpha(h);
  return out;
}

inline ConvElement star(const FiniteGroupoid& G, const ConvElement& f) {
  ConvElement out(f.size());
  for (int g = 0; g < G.arrows(); ++g) out[g] = std::conj(f[G.inv[g]]);
  return out;
}

inline ConvElement axpy(cx a, const ConvElement& x, const ConvElement& y) {
  ConvElement out = y;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * x[i];
  return out;
}

// max over x of alpha(|f|)(x) and alpha~(|f|)(x).
inline double alpha_sup(const MeasuredGroupoid& M, const ConvElement& f) {
  std::vector<double> s(static_cast<std::size_t>(M.G.objects()), 0.0);
  for (int g = 0; g < M.G.arrows(); ++g) s[M.G.rng[g]] += std::abs(f[g]) * M.alpha(g);
  return s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
}

inline double alpha_tilde_sup(const MeasuredGroupoid& M, const ConvElement& f) {
  std::vector<double> s(static_cast<std::size_t>(M.G.objects()), 0.0);
  for (int g = 0; g < M.G.arrows(); ++g) s[M.G.src[g]] += std::abs(f[g]) * M.alpha_tilde(g);
  return s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
}

inline double i_norm(const MeasuredGroupoid& M, const ConvElement& f) {
  return std::max(alpha_sup(M, f), alpha_tilde_sup(M, f));
}

// The bound sqrt(||alpha|f|||_inf ||alpha~|f|||_inf) for integrated representations.
inline double integrated_bound(const MeasuredGroupoid& M, const ConvElement& f) {
  return std::sqrt(alpha_sup(M, f) * alpha_tilde_sup(M, f));
}

// The module on which the regular representation acts: basis arrows h,
// graded by (r(h), s(h)), with <delta_h, delta_h> = alpha~(h).
inline Correspondence regular_module(const MeasuredGroupoid& M) {
  Correspondence E;
  E.z_size = E.y_size = M.G.objects();
  for (int h = 0; h < M.G.arrows(); ++h) E.push(M.G.rng[h], M.G.src[h], M.alpha_tilde(h), h);
  return E;
}

// Left convolution: (f.xi)(h) = sum_{g in G^{r(h)}} f(g) xi(g^-1 h) alpha(g).
inline Mat regular_matrix(const MeasuredGroupoid& M, const ConvElement& f) {
  const auto& G = M.G;
  Mat L = Mat::Zero(G.arrows(), G.arrows());
  for (int h = 0; h < G.arrows(); ++h)
    for (int g = 0; g < G.arrows(); ++g)
      if (G.rng[g] == G.rng[h]) L(h, G.compose(G.inv[g], h)) += f[g] * M.alpha(g);
  return L;
}

inline ModuleMap regular_operator(const MeasuredGroupoid& M, const ConvElement& f) {
  const Correspondence E = regular_module(M);
  return {E, E, regular_matrix(M, f)};
}

inline double cstar_norm(const MeasuredGroupoid& M, const ConvElement& f) {
  return operator_norm(regular_operator(M, f));
}

}  // namespace gcstar
