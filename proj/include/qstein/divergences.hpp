#pragma once

// Closed-form divergences and distances. Everything is in nats.

#include <cmath>
#include <limits>

#include "qstein/tensor.hpp"

namespace qstein {

/// A value in nats or +infinity (support violations, orthogonality).
using ExtendedReal = double;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_inf(ExtendedReal x) { return std::isinf(x) && x > 0; }

inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("binary_entropy: argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

inline double von_neumann_entropy(const Matrix& rho) {
  RealVector ev = eigenvalues(rho);
  const double thr = support_threshold(ev);
  double s = 0.0;
  for (double l : ev)
    if (l > thr) s -= l * std::log(l);
  return s;
}

/// Weight of rho outside the support of sigma.
inline double weight_outside_support(const Matrix& rho, const Matrix& sigma) {
  Matrix perp = Matrix::Identity(sigma.rows(), sigma.cols()) - support_projector(sigma);
  return (rho * perp).trace().real();
}

inline bool support_contained(const Matrix& rho, const Matrix& sigma) {
  return weight_outside_support(rho, sigma) <= tol::kSupport;
}

inline ExtendedReal rel_entropy(const Matrix& rho, const Matrix& sigma) {
  check_same_dims(rho, sigma, "rel_entropy");
  if (!support_contained(rho, sigma)) return kInf;
  double v = -von_neumann_entropy(rho) - (rho * logm(sigma)).trace().real();
  return std::max(v, 0.0);
}

inline double fidelity(const Matrix& rho, const Matrix& sigma) {
  check_same_dims(rho, sigma, "fidelity");
  Eigen::JacobiSVD<Matrix> svd(sqrtm(rho) * sqrtm(sigma));
  double root = svd.singularValues().sum();
  return std::clamp(root * root, 0.0, 1.0);
}

inline double purified_distance(const Matrix& rho, const Matrix& sigma) {
  return std::sqrt(std::max(0.0, 1.0 - fidelity(rho, sigma)));
}

inline double trace_distance(const Matrix& rho, const Matrix& sigma) {
  check_same_dims(rho, sigma, "trace_distance");
  return 0.5 * trace_norm(rho - sigma);
}

inline ExtendedReal dmax(const Matrix& rho, const Matrix& sigma) {
  check_same_dims(rho, sigma, "dmax");
  if (!support_contained(rho, sigma)) return kInf;
  Matrix s = powm(sigma, -0.5);
  double top = max_eigenvalue(s * rho * s);
  if (top <= 0.0) return -kInf;
  return std::log(top);
}

inline ExtendedReal dmin(const Matrix& rho, const Matrix& sigma) {
  double f = fidelity(rho, sigma);
  // sqrt(F) below the support threshold counts as orthogonal.
  if (f <= tol::kSupport * tol::kSupport) return kInf;
  return -std::log(f);
}

/// Sandwiched Renyi relative entropy for alpha in [1/2, 1) or (1, inf).
inline ExtendedReal renyi_sandwiched(const Matrix& rho, const Matrix& sigma, double alpha) {
  check_same_dims(rho, sigma, "renyi_sandwiched");
  if (!(alpha >= 0.5) || alpha == 1.0 || !std::isfinite(alpha))
    throw std::invalid_argument("renyi_sandwiched: alpha must lie in [1/2,1) or (1,inf)");
  if (alpha > 1.0 && !support_contained(rho, sigma)) return kInf;
  const double gamma = (1.0 - alpha) / (2.0 * alpha);
  Matrix s = powm(sigma, gamma);
  Matrix inner = s * rho * s;
  inner = (inner + inner.adjoint()) / 2.0;
  RealVector ev = eigenvalues(inner);
  double q = 0.0;
  for (double l : ev)
    if (l > 0.0) q += std::pow(l, alpha);
  if (q <= 0.0) return kInf;
  return std::log(q) / (alpha - 1.0);
}

/// Given rho_AB and sigma_A, an extension sigma_AB of sigma_A with
/// F(rho_AB, sigma_AB) = F(rho_A, sigma_A), built from purifications aligned by
/// the polar unitary of their overlap.
inline Matrix uhlmann_extension(const Matrix& rho_ab, const Matrix& sigma_a, int dim_a, int dim_b) {
  if (rho_ab.rows() != static_cast<Eigen::Index>(dim_a) * dim_b || sigma_a.rows() != dim_a)
    throw std::invalid_argument("uhlmann_extension: dimension mismatch");
  const Eigen::Index dab = rho_ab.rows();
  const Eigen::Index dbr = static_cast<Eigen::Index>(dim_b) * dab;
  // |psi>_{A B R} with R a copy of AB; Psi is its (A) x (B R) coefficient matrix.
  Vector psi = canonical_purification(rho_ab);
  Matrix big_psi(dim_a, dbr);
  for (Eigen::Index a = 0; a < dim_a; ++a)
    for (Eigen::Index c = 0; c < dbr; ++c) big_psi(a, c) = psi(a * dbr + c);
  Matrix m = sqrtm(sigma_a) * big_psi;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix w = svd.matrixU() * svd.matrixV().adjoint();
  Matrix phi_mat = sqrtm(sigma_a) * w;
  Vector phi(dim_a * dbr);
  for (Eigen::Index a = 0; a < dim_a; ++a)
    for (Eigen::Index c = 0; c < dbr; ++c) phi(a * dbr + c) = phi_mat(a, c);
  SiteStructure s({dim_a, dim_b, static_cast<int>(dab)});
  Matrix out = partial_trace(projector(phi), s, {2});
  return (out + out.adjoint()) / 2.0;
}

}  // namespace qstein
