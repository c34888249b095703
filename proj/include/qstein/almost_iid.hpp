#pragma once

// Almost-iid states: defect-pattern bases, symmetrization, random ensembles,
// pinching, type-class states, symmetric-subspace projectors and the rotation
// unitary.

#include <cmath>
#include <vector>

#include "qstein/divergences.hpp"
#include "qstein/hypothesis.hpp"
#include "qstein/symmetry.hpp"
#include "qstein/tensor.hpp"

namespace qstein {

inline constexpr int kMaxSymmetrizeSites = 8;

/// Defect pattern of one basis vector: sites off theta and the completion label (>= 1) on each.
struct DefectPattern {
  std::vector<int> sites;
  std::vector<int> labels;
};

struct AlmostIIDBasis {
  Vector theta;
  int n = 0;
  int r = 0;
  /// Unitary whose first column is theta; the remaining columns complete it.
  Matrix local_basis;
  std::vector<DefectPattern> patterns;
  /// Columns are the basis vectors |Psi_t>.
  Matrix vectors;

  int site_dim() const { return static_cast<int>(theta.size()); }
  int size() const { return static_cast<int>(patterns.size()); }
};

struct AlmostIIDEnsemble {
  AlmostIIDBasis basis;
  /// A and E factors of each site (A first).
  int dim_a = 0;
  int dim_e = 0;
  Matrix beta;

  Matrix state_ae() const {
    Matrix s = basis.vectors * beta * basis.vectors.adjoint();
    return (s + s.adjoint()) / 2.0;
  }
  SiteStructure ae_structure() const { return SiteStructure::uniform(basis.site_dim(), basis.n); }
  SiteStructure a_structure() const { return SiteStructure::uniform(dim_a, basis.n); }
  int card() const { return basis.size(); }
};

/// Orthonormal completion of a unit vector: Householder QR of [theta | 1], first column pinned to theta.
inline Matrix complete_basis(const Vector& theta) {
  if (!is_pure_state(theta)) throw std::invalid_argument("complete_basis: theta must be normalized");
  const auto d = theta.size();
  Matrix m(d, d + 1);
  m.col(0) = theta;
  m.rightCols(d) = Matrix::Identity(d, d);
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  q.col(0) = theta;
  return q;
}

namespace detail {

inline void subsets_of_size(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    subsets_of_size(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

inline Vector pattern_vector(const Matrix& local, int n, const DefectPattern& p) {
  Vector v = Vector::Ones(1);
  std::size_t next = 0;
  for (int i = 0; i < n; ++i) {
    int label = 0;
    if (next < p.sites.size() && p.sites[next] == i) label = p.labels[next++];
    v = kron(v, Vector(local.col(label)));
  }
  return v;
}

}  // namespace detail

/// Basis of span V(H^{(x) n}, theta^{(x) n-r}): theta off the pattern F (|F| <= r)
/// and completion vectors (labels 1..D-1) on F. Size sum_k C(n,k)(D-1)^k.
inline AlmostIIDBasis almost_iid_basis(const Vector& theta, int n, int r) {
  if (n < 1 || r < 0 || r > n) throw std::invalid_argument("almost_iid_basis: need 0 <= r <= n, n >= 1");
  const int d = static_cast<int>(theta.size());
  if (d < 2) throw std::invalid_argument("almost_iid_basis: site dimension must be >= 2");
  std::int64_t total = 1;
  for (int i = 0; i < n; ++i) {
    total *= d;
    check_capacity(total, "almost_iid_basis");
  }
  AlmostIIDBasis b;
  b.theta = theta;
  b.n = n;
  b.r = r;
  b.local_basis = complete_basis(theta);
  for (int k = 0; k <= r; ++k) {
    std::vector<std::vector<int>> subsets;
    std::vector<int> cur;
    detail::subsets_of_size(n, k, 0, cur, subsets);
    for (const auto& f : subsets) {
      std::vector<int> labels(static_cast<std::size_t>(k), 1);
      while (true) {
        b.patterns.push_back({f, labels});
        int pos = k - 1;
        while (pos >= 0 && labels[static_cast<std::size_t>(pos)] == d - 1) labels[static_cast<std::size_t>(pos--)] = 1;
        if (pos < 0) break;
        ++labels[static_cast<std::size_t>(pos)];
      }
    }
  }
  b.vectors = Matrix(total, static_cast<Eigen::Index>(b.patterns.size()));
  for (std::size_t t = 0; t < b.patterns.size(); ++t)
    b.vectors.col(static_cast<Eigen::Index>(t)) = detail::pattern_vector(b.local_basis, n, b.patterns[t]);
  return b;
}

/// Upper bound n h(r/n) + r log D on log |T| (valid for r <= n/2).
inline double log_card_bound(int n, int r, int site_dim) {
  return n * binary_entropy(static_cast<double>(r) / n) + r * std::log(static_cast<double>(site_dim));
}

/// Index of the pattern obtained by moving every defect from site i to pi[i].
inline std::vector<int> permute_patterns(const AlmostIIDBasis& b, const std::vector<int>& perm) {
  check_permutation(perm, b.n);
  std::map<std::vector<int>, int> index;
  auto code = [&](const DefectPattern& p) {
    std::vector<int> c(static_cast<std::size_t>(b.n), 0);
    for (std::size_t k = 0; k < p.sites.size(); ++k) c[static_cast<std::size_t>(p.sites[k])] = p.labels[k];
    return c;
  };
  for (int t = 0; t < b.size(); ++t) index[code(b.patterns[static_cast<std::size_t>(t)])] = t;
  std::vector<int> out(static_cast<std::size_t>(b.size()));
  for (int t = 0; t < b.size(); ++t) {
    auto c = code(b.patterns[static_cast<std::size_t>(t)]);
    std::vector<int> moved(c.size(), 0);
    for (int i = 0; i < b.n; ++i) moved[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = c[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(t)] = index.at(moved);
  }
  return out;
}

/// (1/n!) sum_pi W_pi op W_pi^dagger.
inline Matrix symmetrize(const Matrix& op, const SiteStructure& s) {
  check_operator(op, s, "symmetrize");
  const int n = s.num_sites();
  if (n > kMaxSymmetrizeSites) throw CapacityError("symmetrize: more than 8 sites");
  for (int dk : s.dims)
    if (dk != s.dims[0]) throw std::invalid_argument("symmetrize: sites must be identical");
  auto perms = all_permutations(n);
  Matrix acc = Matrix::Zero(op.rows(), op.cols());
  for (const auto& p : perms) acc += permute_sites(op, p, s);
  acc /= static_cast<double>(perms.size());
  return (acc + acc.adjoint()) / 2.0;
}

/// Symmetrization carried out on the coefficient matrix: W_pi |Psi_t> = |Psi_{pi(t)}>.
inline Matrix symmetrize_coefficients(const AlmostIIDBasis& b, const Matrix& beta) {
  if (b.n > kMaxSymmetrizeSites) throw CapacityError("symmetrize: more than 8 sites");
  auto perms = all_permutations(b.n);
  Matrix acc = Matrix::Zero(beta.rows(), beta.cols());
  for (const auto& p : perms) {
    auto map = permute_patterns(b, p);
    for (Eigen::Index j = 0; j < beta.cols(); ++j)
      for (Eigen::Index i = 0; i < beta.rows(); ++i) acc(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]) += beta(i, j);
  }
  acc /= static_cast<double>(perms.size());
  return (acc + acc.adjoint()) / 2.0;
}

/// Weight of op outside span of the basis, tr[(1 - Pi) op].
inline double span_residual(const AlmostIIDBasis& b, const Matrix& op) {
  if (op.rows() != b.vectors.rows()) throw std::invalid_argument("span_residual: dimension mismatch");
  Matrix inside = b.vectors.adjoint() * op * b.vectors;
  return std::abs(op.trace().real() - inside.trace().real());
}

/// Marginal on A^n of a state on (A E)^n.
inline Matrix trace_out_e(const Matrix& op_ae, int dim_a, int dim_e, int n) {
  std::vector<int> dims;
  std::vector<int> drop;
  for (int i = 0; i < n; ++i) {
    dims.push_back(dim_a);
    dims.push_back(dim_e);
    drop.push_back(2 * i + 1);
  }
  SiteStructure fine;
  fine.dims = dims;
  return partial_trace(op_ae, fine, drop);
}

struct AlmostIIDSample {
  AlmostIIDEnsemble ensemble;
  Matrix rho_ae;
  Matrix rho_a;
  double span_residual = 0.0;
};

/// Random almost-iid state along the A-marginal of theta (A x E sites).
/// beta is a Wishart draw G G^dagger / tr; `symmetric` applies the permutation
/// twirl (condition (i)); without it the state is generalized almost-iid.
inline AlmostIIDSample random_almost_iid(const Vector& theta, int dim_a, int dim_e, int n, int r, std::uint64_t seed,
                                         bool symmetric = true) {
  if (dim_a * dim_e != theta.size()) throw std::invalid_argument("random_almost_iid: A x E dims do not match theta");
  AlmostIIDSample out;
  out.ensemble.basis = almost_iid_basis(theta, n, r);
  out.ensemble.dim_a = dim_a;
  out.ensemble.dim_e = dim_e;
  const int t = out.ensemble.basis.size();
  Matrix g = gaussian_matrix(t, t, seed);
  Matrix beta = g * g.adjoint();
  beta /= beta.trace().real();
  if (symmetric) beta = symmetrize_coefficients(out.ensemble.basis, beta);
  out.ensemble.beta = (beta + beta.adjoint()) / 2.0;
  out.rho_ae = out.ensemble.state_ae();
  out.span_residual = span_residual(out.ensemble.basis, out.rho_ae);
  if (out.span_residual > 1e-9) throw std::runtime_error("random_almost_iid: state leaves the almost-iid span");
  out.rho_a = trace_out_e(out.rho_ae, dim_a, dim_e, n);
  out.rho_a = (out.rho_a + out.rho_a.adjoint()) / 2.0;
  return out;
}

/// Almost-iid sample along sigma, using its canonical purification as theta.
inline AlmostIIDSample random_almost_iid_along(const Matrix& sigma, int n, int r, std::uint64_t seed, bool symmetric = true) {
  require_density(sigma, "random_almost_iid_along");
  const int d = static_cast<int>(sigma.rows());
  return random_almost_iid(canonical_purification(sigma), d, d, n, r, seed, symmetric);
}

// ---------------------------------------------------------------------------
// Pinching

struct PinchingReport {
  Matrix pinched_ae;       // sum_t beta_tt |Psi_t><Psi_t|
  Matrix pinched_a;        // its A^n marginal
  int card = 0;            // |T|
  double min_eig_coeff = 0.0;  // lambda_min(|T| diag(beta) - beta), equal to the AE-level value on the span
  double min_eig_a = 0.0;      // lambda_min(|T| pinched_a - state_a)
};

inline PinchingReport pinch_to_blocks(const AlmostIIDEnsemble& e) {
  PinchingReport r;
  r.card = e.card();
  Matrix diag = Matrix::Zero(r.card, r.card);
  for (int t = 0; t < r.card; ++t) diag(t, t) = std::max(0.0, e.beta(t, t).real());
  r.pinched_ae = e.basis.vectors * diag * e.basis.vectors.adjoint();
  r.pinched_a = trace_out_e(r.pinched_ae, e.dim_a, e.dim_e, e.basis.n);
  r.min_eig_coeff = min_eigenvalue(hermitize(static_cast<double>(r.card) * diag - e.beta));
  Matrix state_a = trace_out_e(e.state_ae(), e.dim_a, e.dim_e, e.basis.n);
  Matrix gap = static_cast<double>(r.card) * r.pinched_a - state_a;
  r.min_eig_a = min_eigenvalue((gap + gap.adjoint()) / 2.0);
  return r;
}

struct PinchedDmaxReport {
  ExtendedReal per_copy = 0.0;  // (1/n) D_max(pinched_a || sigma^{(x) n})
  double bound = 0.0;           // (r/n) log(1/lambda_min(sigma))
  bool pass = false;
};

inline PinchedDmaxReport dmax_pinched_vs_iid(const AlmostIIDEnsemble& e, const Matrix& sigma_site, double tol = 1e-7) {
  if (sigma_site.rows() != e.dim_a) throw std::invalid_argument("dmax_pinched_vs_iid: site dimension mismatch");
  PinchedDmaxReport r;
  const int n = e.basis.n;
  const double lmin = min_eigenvalue(sigma_site);
  if (lmin <= tol::kSupport) {
    r.per_copy = kInf;
    r.bound = kInf;
    r.pass = false;
    return r;
  }
  // (sigma^{-1/2})^{(x) n} applied factorwise to the product basis vectors.
  const Matrix local = kron(powm(sigma_site, -0.5), Matrix::Identity(e.dim_e, e.dim_e)) * e.basis.local_basis;
  Matrix acc = Matrix::Zero(e.basis.vectors.rows(), e.basis.vectors.rows());
  for (int t = 0; t < e.card(); ++t) {
    const Vector v = detail::pattern_vector(local, n, e.basis.patterns[static_cast<std::size_t>(t)]);
    acc += std::max(0.0, e.beta(t, t).real()) * v * v.adjoint();
  }
  const Matrix m = trace_out_e(acc, e.dim_a, e.dim_e, n);
  r.per_copy = std::log(max_eigenvalue(0.5 * (m + m.adjoint()))) / n;
  r.bound = static_cast<double>(e.basis.r) / n * std::log(1.0 / lmin);
  r.pass = r.per_copy <= r.bound + tol;
  return r;
}

// ---------------------------------------------------------------------------
// Type classes and the symmetric subspace

/// Uniform superposition over strings of length l with symbol counts q, in the given local basis (columns).
inline Vector type_state(int l, const std::vector<int>& q, const Matrix& local_basis) {
  const int d = static_cast<int>(local_basis.cols());
  if (static_cast<int>(q.size()) != d) throw std::invalid_argument("type_state: type length must equal alphabet size");
  int sum = 0;
  for (int c : q) {
    if (c < 0) throw std::invalid_argument("type_state: negative count");
    sum += c;
  }
  if (sum != l) throw std::invalid_argument("type_state: counts must sum to l");
  std::int64_t total = 1;
  for (int i = 0; i < l; ++i) {
    total *= local_basis.rows();
    check_capacity(total, "type_state");
  }
  Vector out = Vector::Zero(total);
  std::int64_t strings = 1;
  for (int i = 0; i < l; ++i) strings *= d;
  std::int64_t count = 0;
  std::vector<int> digit(static_cast<std::size_t>(l), 0);
  for (std::int64_t x = 0; x < strings; ++x) {
    std::vector<int> c(static_cast<std::size_t>(d), 0);
    for (int dg : digit) ++c[static_cast<std::size_t>(dg)];
    if (c == q) {
      Vector v = Vector::Ones(1);
      for (int dg : digit) v = kron(v, Vector(local_basis.col(dg)));
      out += v;
      ++count;
    }
    for (int k = l - 1; k >= 0; --k) {
      if (++digit[static_cast<std::size_t>(k)] < d) break;
      digit[static_cast<std::size_t>(k)] = 0;
    }
  }
  return out / std::sqrt(static_cast<double>(count));
}

inline Vector type_state(int l, int d, const std::vector<int>& q) { return type_state(l, q, Matrix::Identity(d, d)); }

/// All types of length l over d symbols with at least l - r copies of symbol 0.
inline std::vector<std::vector<int>> types_near(int l, int d, int r) {
  std::vector<std::vector<int>> keep;
  std::vector<int> cur(static_cast<std::size_t>(d));
  detail::enumerate_types(d, l, cur, 0, l, [&](const std::vector<int>& q) {
    if (q[0] >= l - r) keep.push_back(q);
  });
  return keep;
}

/// P_{l,r} = sum over types with l Q(theta) >= l - r of |Theta^Q><Theta^Q|, in a basis whose first element is theta.
inline Matrix sym_subspace_projector(const Vector& theta, int l, int r) {
  if (l < 1 || r < 0 || r > l) throw std::invalid_argument("sym_subspace_projector: need 0 <= r <= l");
  const Matrix local = complete_basis(theta);
  const int d = static_cast<int>(theta.size());
  std::int64_t total = 1;
  for (int i = 0; i < l; ++i) total *= d;
  check_capacity(total, "sym_subspace_projector");
  Matrix p = Matrix::Zero(total, total);
  for (const auto& q : types_near(l, d, r)) {
    Vector v = type_state(l, q, local);
    p += v * v.adjoint();
  }
  return p;
}

/// Unitary with U|xi> = |theta>: after fixing the phase of xi so that <xi|theta> >= 0,
/// U_0 = 1 + A + A^2/(1 + <xi|theta>) with A = |theta><xi| - |xi><theta|, composed with
/// the phase rotation on xi.
inline Matrix rotation_unitary(const Vector& xi, const Vector& theta) {
  if (xi.size() != theta.size()) throw std::invalid_argument("rotation_unitary: dimension mismatch");
  if (!is_pure_state(xi) || !is_pure_state(theta)) throw std::invalid_argument("rotation_unitary: inputs must be normalized");
  const auto d = xi.size();
  const cplx ov = xi.dot(theta);  // <xi|theta>
  const cplx phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : cplx(1.0);
  Vector xp = phase * xi;  // <xp|theta> = |<xi|theta>|
  const double c = std::abs(ov);
  Matrix a = theta * xp.adjoint() - xp * theta.adjoint();
  Matrix u0 = Matrix::Identity(d, d) + a + a * a / (1.0 + c);
  Matrix ph = Matrix::Identity(d, d) + (phase - 1.0) * (xi * xi.adjoint());
  return u0 * ph;
}

// ---------------------------------------------------------------------------
// Fidelity inequality for almost-iid states

struct FidelityReport {
  double lhs = 0.0;   // F(omega_n, rho_n)
  double rhs = 0.0;   // F(omega_{n-r}, rho^{(x) n-r}) |T|^2
  double slack = 0.0;
  bool pass = false;
};

inline FidelityReport fidelity_almost_iid_check(const Matrix& omega_n, const AlmostIIDEnsemble& e, const Matrix& rho_site,
                                                double tol = 1e-7) {
  const int n = e.basis.n;
  const int r = e.basis.r;
  SiteStructure s = e.a_structure();
  check_operator(omega_n, s, "fidelity_almost_iid_check");
  if (!is_permutation_invariant(omega_n, s)) throw std::invalid_argument("fidelity_almost_iid_check: omega_n must be permutation invariant");
  FidelityReport rep;
  Matrix rho_n = trace_out_e(e.state_ae(), e.dim_a, e.dim_e, n);
  rep.lhs = fidelity(omega_n, rho_n);
  const double card = e.card();
  if (n - r == 0) {
    rep.rhs = card * card;
  } else {
    std::vector<int> keep;
    for (int k = 0; k < n - r; ++k) keep.push_back(k);
    Matrix omega_rest = reduce_to(omega_n, s, keep);
    rep.rhs = fidelity(omega_rest, tensor_power(rho_site, n - r)) * card * card;
  }
  rep.slack = rep.rhs - rep.lhs;
  rep.pass = rep.slack >= -tol;
  return rep;
}

/// The extension with site i replaced by theta: theta_i (x) tr_i[op].
inline Matrix replace_site_with_theta(const Matrix& op_ae, const Vector& theta, int n, int i) {
  SiteStructure s = SiteStructure::uniform(static_cast<int>(theta.size()), n);
  Matrix rest = partial_trace(op_ae, s, {i});
  std::vector<int> perm;
  for (int k = 0; k < n; ++k)
    if (k != i) perm.push_back(k);
  perm.push_back(i);
  return permute_sites(kron(rest, projector(theta)), perm, s);
}

}  // namespace qstein
