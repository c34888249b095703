#pragma once

// Dense Hermitian linear algebra and multipartite tensor manipulation.
//
// Operators are plain Eigen complex matrices. Site ordering follows the
// Kronecker convention: site 0 is the most significant tensor factor.

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qstein {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Thrown when an operation would exceed the configured dimension cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace tol {
/// Eigenvalues at or below kSupport * lambda_max are treated as kernel.
inline constexpr double kSupport = 1e-10;
inline constexpr double kHermitian = 1e-10;
inline constexpr double kDensityEig = 1e-9;
inline constexpr double kDensityTrace = 1e-9;
inline constexpr double kPureNorm = 1e-10;
}  // namespace tol

namespace detail {
inline std::atomic<std::int64_t>& capacity_slot() {
  static std::atomic<std::int64_t> cap{std::int64_t{1} << 14};
  return cap;
}
}  // namespace detail

inline std::int64_t max_total_dim() { return detail::capacity_slot().load(); }
inline void set_max_total_dim(std::int64_t cap) { detail::capacity_slot().store(cap); }

inline void check_capacity(std::int64_t dim, const char* what) {
  if (dim > max_total_dim()) {
    std::ostringstream os;
    os << what << ": total dimension " << dim << " exceeds capacity " << max_total_dim();
    throw CapacityError(os.str());
  }
}

// ---------------------------------------------------------------------------
// SiteStructure

struct SiteStructure {
  std::vector<int> dims;
  /// Optional per-site (A, B) split, used for partial transposes and PPT sets.
  std::optional<std::vector<std::pair<int, int>>> bipartition;

  SiteStructure() = default;
  explicit SiteStructure(std::vector<int> d) : dims(std::move(d)) { validate(); }
  SiteStructure(std::vector<int> d, std::vector<std::pair<int, int>> split)
      : dims(std::move(d)), bipartition(std::move(split)) {
    validate();
  }

  static SiteStructure uniform(int site_dim, int n) {
    return SiteStructure(std::vector<int>(static_cast<std::size_t>(n), site_dim));
  }
  static SiteStructure uniform_bipartite(int da, int db, int n) {
    return SiteStructure(std::vector<int>(static_cast<std::size_t>(n), da * db),
                         std::vector<std::pair<int, int>>(static_cast<std::size_t>(n), {da, db}));
  }

  int num_sites() const { return static_cast<int>(dims.size()); }

  std::int64_t total_dim() const {
    std::int64_t t = 1;
    for (int d : dims) t *= d;
    return t;
  }

  void validate() const {
    if (dims.empty()) throw std::invalid_argument("SiteStructure: no sites");
    for (int d : dims)
      if (d < 2) throw std::invalid_argument("SiteStructure: local dimension must be >= 2");
    if (bipartition) {
      if (bipartition->size() != dims.size())
        throw std::invalid_argument("SiteStructure: bipartition size mismatch");
      for (std::size_t i = 0; i < dims.size(); ++i) {
        auto [a, b] = (*bipartition)[i];
        if (a < 1 || b < 1 || a * b != dims[i])
          throw std::invalid_argument("SiteStructure: bipartition factors must multiply to site dim");
      }
    }
  }

  /// Each bipartitioned site split into its A and B factors (A first).
  SiteStructure fine() const {
    if (!bipartition) return *this;
    std::vector<int> out;
    for (auto [a, b] : *bipartition) {
      out.push_back(a);
      out.push_back(b);
    }
    SiteStructure s;
    s.dims = std::move(out);
    return s;
  }

  SiteStructure select(const std::vector<int>& sites) const {
    SiteStructure s;
    for (int i : sites) s.dims.push_back(dims.at(static_cast<std::size_t>(i)));
    if (bipartition) {
      std::vector<std::pair<int, int>> bp;
      for (int i : sites) bp.push_back((*bipartition)[static_cast<std::size_t>(i)]);
      s.bipartition = std::move(bp);
    }
    return s;
  }

  bool operator==(const SiteStructure&) const = default;
};

inline void check_operator(const Matrix& op, const SiteStructure& s, const char* what) {
  if (op.rows() != op.cols() || op.rows() != s.total_dim()) {
    std::ostringstream os;
    os << what << ": operator dimension " << op.rows() << "x" << op.cols()
       << " does not match site structure (" << s.total_dim() << ")";
    throw std::invalid_argument(os.str());
  }
}

inline void check_same_dims(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

// ---------------------------------------------------------------------------
// Hermitian / density validation

inline double hermiticity_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  double scale = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
  return hermiticity_defect(m) <= tol::kHermitian * (1.0 + scale);
}

/// Returns (M + M^dagger)/2, rejecting inputs that are not Hermitian within tolerance.
inline Matrix hermitize(const Matrix& m) {
  if (!is_hermitian(m)) throw std::invalid_argument("hermitize: matrix is not Hermitian within tolerance");
  return (m + m.adjoint()) / 2.0;
}

inline RealVector eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double min_eigenvalue(const Matrix& m) { return eigenvalues(m).minCoeff(); }
inline double max_eigenvalue(const Matrix& m) { return eigenvalues(m).maxCoeff(); }

inline bool is_density(const Matrix& m) {
  if (!is_hermitian(m)) return false;
  if (std::abs(m.trace().real() - 1.0) > tol::kDensityTrace) return false;
  return min_eigenvalue(m) >= -tol::kDensityEig;
}

inline void require_density(const Matrix& m, const char* what) {
  if (!is_density(m)) throw std::invalid_argument(std::string(what) + ": not a density operator");
}

inline bool is_pure_state(const Vector& v) { return std::abs(v.norm() - 1.0) <= tol::kPureNorm; }

inline Matrix projector(const Vector& v) { return v * v.adjoint(); }

// ---------------------------------------------------------------------------
// Tensor products

inline Matrix kron(const Matrix& a, const Matrix& b) {
  check_capacity(a.rows() * b.rows(), "tensor");
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  check_capacity(a.size() * b.size(), "tensor");
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline Matrix tensor(std::span<const Matrix> ops) {
  if (ops.empty()) return Matrix::Identity(1, 1);
  std::int64_t total = 1;
  for (const auto& m : ops) total *= m.rows();
  check_capacity(total, "tensor");
  Matrix out = ops[0];
  for (std::size_t i = 1; i < ops.size(); ++i) out = kron(out, ops[i]);
  return out;
}

inline Matrix tensor(std::initializer_list<Matrix> ops) {
  std::vector<Matrix> v(ops);
  return tensor(std::span<const Matrix>(v));
}

inline Matrix tensor_power(const Matrix& m, int n) {
  if (n < 0) throw std::invalid_argument("tensor_power: negative exponent");
  std::int64_t total = 1;
  for (int i = 0; i < n; ++i) total *= m.rows();
  check_capacity(total, "tensor_power");
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = kron(out, m);
  return out;
}

inline Vector tensor_power(const Vector& v, int n) {
  Vector out = Vector::Ones(1);
  for (int i = 0; i < n; ++i) out = kron(out, v);
  return out;
}

// ---------------------------------------------------------------------------
// Multi-index helpers

namespace detail {

inline std::vector<std::int64_t> strides(const std::vector<int>& dims) {
  std::vector<std::int64_t> st(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k)
    st[static_cast<std::size_t>(k)] = st[static_cast<std::size_t>(k) + 1] * dims[static_cast<std::size_t>(k) + 1];
  return st;
}

inline void check_sites(const std::vector<int>& sites, int n, const char* what) {
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int i : sites) {
    if (i < 0 || i >= n) throw std::invalid_argument(std::string(what) + ": invalid site index");
    if (seen[static_cast<std::size_t>(i)]) throw std::invalid_argument(std::string(what) + ": repeated site index");
    seen[static_cast<std::size_t>(i)] = true;
  }
}

/// Index map for the permutation unitary W_pi moving the content of site i to site pi[i].
inline std::vector<std::int64_t> permutation_index_map(const std::vector<int>& perm, const std::vector<int>& dims) {
  const int n = static_cast<int>(dims.size());
  std::vector<int> out_dims(dims.size());
  for (int i = 0; i < n; ++i) out_dims[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = dims[static_cast<std::size_t>(i)];
  auto in_st = strides(dims);
  auto out_st = strides(out_dims);
  std::int64_t total = 1;
  for (int d : dims) total *= d;
  std::vector<std::int64_t> map(static_cast<std::size_t>(total));
  std::vector<int> digit(dims.size(), 0);
  for (std::int64_t x = 0; x < total; ++x) {
    std::int64_t y = 0;
    for (int i = 0; i < n; ++i) y += digit[static_cast<std::size_t>(i)] * out_st[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    map[static_cast<std::size_t>(x)] = y;
    for (int k = n - 1; k >= 0; --k) {
      if (++digit[static_cast<std::size_t>(k)] < dims[static_cast<std::size_t>(k)]) break;
      digit[static_cast<std::size_t>(k)] = 0;
    }
  }
  (void)in_st;
  return map;
}

}  // namespace detail

inline void check_permutation(const std::vector<int>& perm, int n) {
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permutation: wrong length");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)])
      throw std::invalid_argument("permutation: not a bijection");
    seen[static_cast<std::size_t>(p)] = true;
  }
}

/// Site dimensions after permuting with pi (content of site i moves to pi[i]).
inline SiteStructure permuted_structure(const SiteStructure& s, const std::vector<int>& perm) {
  check_permutation(perm, s.num_sites());
  SiteStructure out = s;
  for (int i = 0; i < s.num_sites(); ++i) {
    out.dims[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = s.dims[static_cast<std::size_t>(i)];
    if (s.bipartition)
      (*out.bipartition)[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = (*s.bipartition)[static_cast<std::size_t>(i)];
  }
  return out;
}

/// W_pi op W_pi^dagger, where W_pi moves the content of site i to site pi[i].
/// permute_sites(op, pi o pi') == permute_sites(permute_sites(op, pi'), pi).
inline Matrix permute_sites(const Matrix& op, const std::vector<int>& perm, const SiteStructure& s) {
  check_operator(op, s, "permute_sites");
  check_permutation(perm, s.num_sites());
  auto map = detail::permutation_index_map(perm, s.dims);
  const auto d = op.rows();
  Matrix out(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto mj = map[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < d; ++i) out(map[static_cast<std::size_t>(i)], mj) = op(i, j);
  }
  return out;
}

inline Vector permute_sites(const Vector& v, const std::vector<int>& perm, const SiteStructure& s) {
  if (v.size() != s.total_dim()) throw std::invalid_argument("permute_sites: vector dimension mismatch");
  check_permutation(perm, s.num_sites());
  auto map = detail::permutation_index_map(perm, s.dims);
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(map[static_cast<std::size_t>(i)]) = v(i);
  return out;
}

/// Explicit permutation unitary (real 0/1 matrix).
inline Matrix permutation_unitary(const std::vector<int>& perm, const SiteStructure& s) {
  check_permutation(perm, s.num_sites());
  auto map = detail::permutation_index_map(perm, s.dims);
  const auto d = s.total_dim();
  Matrix w = Matrix::Zero(d, d);
  for (Eigen::Index x = 0; x < d; ++x) w(map[static_cast<std::size_t>(x)], x) = 1.0;
  return w;
}

/// Partial trace over the listed sites; the remaining sites keep their order.
inline Matrix partial_trace(const Matrix& op, const SiteStructure& s, const std::vector<int>& drop) {
  check_operator(op, s, "partial_trace");
  detail::check_sites(drop, s.num_sites(), "partial_trace");
  const int n = s.num_sites();
  std::vector<bool> dropped(static_cast<std::size_t>(n), false);
  for (int i : drop) dropped[static_cast<std::size_t>(i)] = true;
  std::vector<int> keep, order;
  for (int i = 0; i < n; ++i)
    if (!dropped[static_cast<std::size_t>(i)]) keep.push_back(i);
  // Move kept sites to the front in their original order, dropped sites to the back.
  std::vector<int> perm(static_cast<std::size_t>(n));
  int pos = 0;
  for (int i : keep) perm[static_cast<std::size_t>(i)] = pos++;
  for (int i = 0; i < n; ++i)
    if (dropped[static_cast<std::size_t>(i)]) perm[static_cast<std::size_t>(i)] = pos++;
  std::int64_t dk = 1, dd = 1;
  for (int i = 0; i < n; ++i) (dropped[static_cast<std::size_t>(i)] ? dd : dk) *= s.dims[static_cast<std::size_t>(i)];
  Matrix p = drop.empty() ? op : permute_sites(op, perm, s);
  Matrix out = Matrix::Zero(dk, dk);
  for (std::int64_t i = 0; i < dk; ++i)
    for (std::int64_t j = 0; j < dk; ++j) {
      cplx acc = 0.0;
      for (std::int64_t k = 0; k < dd; ++k) acc += p(i * dd + k, j * dd + k);
      out(i, j) = acc;
    }
  return out;
}

/// Reduced operator on the listed sites (in increasing site order).
inline Matrix reduce_to(const Matrix& op, const SiteStructure& s, const std::vector<int>& keep) {
  detail::check_sites(keep, s.num_sites(), "reduce_to");
  std::vector<bool> kept(static_cast<std::size_t>(s.num_sites()), false);
  for (int i : keep) kept[static_cast<std::size_t>(i)] = true;
  std::vector<int> drop;
  for (int i = 0; i < s.num_sites(); ++i)
    if (!kept[static_cast<std::size_t>(i)]) drop.push_back(i);
  return partial_trace(op, s, drop);
}

/// Transpose applied on the listed sites only.
inline Matrix partial_transpose(const Matrix& op, const SiteStructure& s, const std::vector<int>& sites) {
  check_operator(op, s, "partial_transpose");
  detail::check_sites(sites, s.num_sites(), "partial_transpose");
  const int n = s.num_sites();
  auto st = detail::strides(s.dims);
  const auto d = op.rows();
  Matrix out(d, d);
  std::vector<int> xi(static_cast<std::size_t>(n)), xj(static_cast<std::size_t>(n));
  auto digits = [&](std::int64_t x, std::vector<int>& dig) {
    for (int k = 0; k < n; ++k) {
      dig[static_cast<std::size_t>(k)] = static_cast<int>((x / st[static_cast<std::size_t>(k)]) % s.dims[static_cast<std::size_t>(k)]);
    }
  };
  for (Eigen::Index i = 0; i < d; ++i) {
    digits(i, xi);
    for (Eigen::Index j = 0; j < d; ++j) {
      digits(j, xj);
      std::int64_t a = i, b = j;
      for (int k : sites) {
        const auto sk = st[static_cast<std::size_t>(k)];
        const int di = xi[static_cast<std::size_t>(k)], dj = xj[static_cast<std::size_t>(k)];
        a += (dj - di) * sk;
        b += (di - dj) * sk;
      }
      out(a, b) = op(i, j);
    }
  }
  return out;
}

/// Partial transpose on every B factor of a bipartitioned structure.
inline Matrix partial_transpose_b(const Matrix& op, const SiteStructure& s) {
  if (!s.bipartition) throw std::invalid_argument("partial_transpose_b: structure has no bipartition");
  SiteStructure f = s.fine();
  std::vector<int> bs;
  for (int i = 0; i < s.num_sites(); ++i) bs.push_back(2 * i + 1);
  return partial_transpose(op, f, bs);
}

/// Embeds an operator acting on `sites` (ordered as listed) into the full structure.
inline Matrix embed(const Matrix& local, const SiteStructure& s, const std::vector<int>& sites) {
  detail::check_sites(sites, s.num_sites(), "embed");
  std::int64_t dl = 1;
  for (int i : sites) dl *= s.dims[static_cast<std::size_t>(i)];
  if (local.rows() != dl) throw std::invalid_argument("embed: local operator dimension mismatch");
  std::vector<bool> in(static_cast<std::size_t>(s.num_sites()), false);
  for (int i : sites) in[static_cast<std::size_t>(i)] = true;
  std::vector<int> rest;
  for (int i = 0; i < s.num_sites(); ++i)
    if (!in[static_cast<std::size_t>(i)]) rest.push_back(i);
  std::int64_t dr = s.total_dim() / dl;
  Matrix full = kron(local, Matrix::Identity(dr, dr));
  // Current order: sites..., rest...; move back to natural order.
  std::vector<int> order = sites;
  order.insert(order.end(), rest.begin(), rest.end());
  SiteStructure cur;
  for (int i : order) cur.dims.push_back(s.dims[static_cast<std::size_t>(i)]);
  std::vector<int> perm(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) perm[k] = order[k];
  return permute_sites(full, perm, cur);
}

// ---------------------------------------------------------------------------
// Spectral functions

struct EigenDecomposition {
  RealVector values;  // ascending
  Matrix vectors;     // columns are eigenvectors
};

inline EigenDecomposition eigh(const Matrix& op) {
  if (op.rows() != op.cols()) throw std::invalid_argument("eigh: matrix not square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(op);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigh: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline Matrix reconstruct(const RealVector& values, const Matrix& vectors) {
  return vectors * values.cast<cplx>().asDiagonal() * vectors.adjoint();
}

/// Support threshold shared by every pseudo-function: eigenvalues at or below
/// kSupport * lambda_max count as kernel.
inline double support_threshold(const RealVector& values) {
  double top = values.size() ? std::max(values.maxCoeff(), 0.0) : 0.0;
  return tol::kSupport * top;
}

enum class Function { kLog, kSqrt, kPower };

/// f applied to the spectrum; log, sqrt and powers act on the support only and vanish on the kernel.
inline Matrix matrix_function(const Matrix& op, Function f, double alpha = 1.0) {
  auto ed = eigh(op);
  const double thr = support_threshold(ed.values);
  RealVector g(ed.values.size());
  for (Eigen::Index k = 0; k < ed.values.size(); ++k) {
    const double l = ed.values(k);
    if (l <= thr) {
      g(k) = 0.0;
      continue;
    }
    switch (f) {
      case Function::kLog: g(k) = std::log(l); break;
      case Function::kSqrt: g(k) = std::sqrt(l); break;
      case Function::kPower: g(k) = std::pow(l, alpha); break;
    }
  }
  return reconstruct(g, ed.vectors);
}

inline Matrix sqrtm(const Matrix& op) { return matrix_function(op, Function::kSqrt); }
inline Matrix logm(const Matrix& op) { return matrix_function(op, Function::kLog); }
inline Matrix powm(const Matrix& op, double alpha) { return matrix_function(op, Function::kPower, alpha); }

/// Orthogonal projector onto the support (eigenvalues above the shared threshold).
inline Matrix support_projector(const Matrix& op) {
  auto ed = eigh(op);
  const double thr = support_threshold(ed.values);
  RealVector g = (ed.values.array() > thr).cast<double>();
  return reconstruct(g, ed.vectors);
}

/// Isometry whose columns span the support of a PSD operator.
inline Matrix support_basis(const Matrix& op) {
  auto ed = eigh(op);
  const double thr = support_threshold(ed.values);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index k = 0; k < ed.values.size(); ++k)
    if (ed.values(k) > thr) cols.push_back(k);
  Matrix v(op.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) v.col(static_cast<Eigen::Index>(c)) = ed.vectors.col(cols[c]);
  return v;
}

inline double trace_norm(const Matrix& m) {
  if (is_hermitian(m)) return eigenvalues((m + m.adjoint()) / 2.0).cwiseAbs().sum();
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

inline double operator_norm(const Matrix& m) {
  if (is_hermitian(m)) return eigenvalues((m + m.adjoint()) / 2.0).cwiseAbs().maxCoeff();
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

// ---------------------------------------------------------------------------
// Purification and random states

/// Canonical purification (sqrt(rho) (x) I)|Omega>, |Omega> = sum_i |i>|i>, on H (x) H.
/// Equals sum_k sqrt(l_k)|u_k>|u_k*>, so a permutation of sites applied to both
/// factors leaves it invariant whenever rho is invariant.
inline Vector canonical_purification(const Matrix& rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("canonical_purification: not square");
  const auto d = rho.rows();
  check_capacity(d * d, "canonical_purification");
  Matrix s = sqrtm(rho);
  Vector psi(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) psi(i * d + j) = s(i, j);
  return psi;
}

/// Deterministic complex Gaussian matrix for a seed.
inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      double re = nd(rng);
      double im = nd(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

inline Matrix random_density(int dim, int rank, std::uint64_t seed) {
  if (dim < 1 || rank < 1 || rank > dim) throw std::invalid_argument("random_density: rank out of range");
  check_capacity(dim, "random_density");
  Matrix g = gaussian_matrix(dim, rank, seed);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) / 2.0;
}

inline Vector random_pure(int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_pure: dimension must be positive");
  Vector v = gaussian_matrix(dim, 1, seed).col(0);
  return v / v.norm();
}

/// Random Hermitian operator with Gaussian entries, deterministic per seed.
inline Matrix random_hermitian(int dim, std::uint64_t seed) {
  Matrix g = gaussian_matrix(dim, dim, seed);
  return (g + g.adjoint()) / 2.0;
}

/// Maximally entangled two-qudit state (|00> + ... + |d-1,d-1>)/sqrt(d).
inline Vector max_entangled(int d) {
  Vector v = Vector::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

inline Vector basis_vector(int dim, int k) {
  Vector v = Vector::Zero(dim);
  v(k) = 1.0;
  return v;
}

inline Matrix maximally_mixed(int dim) { return Matrix::Identity(dim, dim) / static_cast<double>(dim); }

}  // namespace qstein
