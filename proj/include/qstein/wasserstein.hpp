#pragma once

// Quantum Wasserstein distance of order 1, quantum Lipschitz constants and
// the bounds used for systems beyond SDP reach.
//
// The exact value comes from the dual LMI
//   max tr[(omega - tau) H]  s.t.  -1/2 <= H - X_i (x) 1_i <= 1/2  for every site i,
// whose primal blocks P_i, N_i give the decomposition X^(i) = P_i - N_i.

#include <cmath>
#include <vector>

#include "qstein/divergences.hpp"
#include "qstein/sdp.hpp"
#include "qstein/symmetry.hpp"

namespace qstein {

inline constexpr std::int64_t kW1ExactCap = 64;

struct W1Certificate {
  /// SDP value (dual objective, certified by the observable).
  double value = 0.0;
  /// X^(i) with tr_i X^(i) = 0 and sum_i X^(i) = omega - tau.
  std::vector<Matrix> witness;
  /// (1/2) sum_i ||X^(i)||_1, an upper bound on the distance.
  double witness_cost = 0.0;
  /// Observable H with Lipschitz constant at most 1 and tr[(omega - tau) H] = value.
  Matrix observable;
  sdp::Status status = sdp::Status::kOptimal;
  bool symmetric = false;
};

namespace detail {

inline std::vector<int> other_sites(int n, int i) {
  std::vector<int> out;
  for (int k = 0; k < n; ++k)
    if (k != i) out.push_back(k);
  return out;
}

inline std::vector<int> transposition(int n, int a, int b) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) p[static_cast<std::size_t>(k)] = k;
  std::swap(p[static_cast<std::size_t>(a)], p[static_cast<std::size_t>(b)]);
  return p;
}

/// Replaces the blocks by nearby ones that satisfy the witness constraints to
/// machine precision: exact vanishing partial traces, then a telescoping
/// distribution of the residual omega - tau - sum_i X^(i).
inline void exactify_witness(std::vector<Matrix>& x, const Matrix& delta, const SiteStructure& s) {
  const int n = s.num_sites();
  for (int i = 0; i < n; ++i) {
    auto& xi = x[static_cast<std::size_t>(i)];
    const double di = s.dims[static_cast<std::size_t>(i)];
    Matrix tr_i = partial_trace(xi, s, {i});
    Matrix id_i = Matrix::Identity(s.dims[static_cast<std::size_t>(i)], s.dims[static_cast<std::size_t>(i)]) / di;
    // embed tr_i on the other sites, 1/d_i on site i
    std::vector<int> others = other_sites(n, i);
    std::vector<int> order = others;
    order.push_back(i);
    Matrix full = embed(kron(tr_i, id_i), s, order);
    xi -= full;
  }
  Matrix resid = delta;
  for (const auto& xi : x) resid -= xi;
  for (int i = 0; i < n; ++i) {
    // term_i = (R_{1..i} - R_{1..i-1} (x) 1/d_i) (x) (1/d)^{rest}, traceless on site i
    std::vector<int> head, head_prev;
    for (int k = 0; k <= i; ++k) head.push_back(k);
    for (int k = 0; k < i; ++k) head_prev.push_back(k);
    std::int64_t d_tail = 1;
    for (int k = i + 1; k < n; ++k) d_tail *= s.dims[static_cast<std::size_t>(k)];
    Matrix tail = Matrix::Identity(d_tail, d_tail) / static_cast<double>(d_tail);
    Matrix r_head = reduce_to(resid, s, head);
    const double di = s.dims[static_cast<std::size_t>(i)];
    Matrix id_i = Matrix::Identity(s.dims[static_cast<std::size_t>(i)], s.dims[static_cast<std::size_t>(i)]) / di;
    Matrix r_prev = head_prev.empty() ? Matrix::Constant(1, 1, resid.trace()) : reduce_to(resid, s, head_prev);
    Matrix term = kron(r_head - kron(r_prev, id_i), tail);
    x[static_cast<std::size_t>(i)] += term;
  }
}

inline double witness_cost(const std::vector<Matrix>& x) {
  double c = 0.0;
  for (const auto& xi : x) c += trace_norm(xi);
  return 0.5 * c;
}

inline void check_w1_inputs(const Matrix& omega, const Matrix& tau, const SiteStructure& s, const char* what) {
  check_operator(omega, s, what);
  check_operator(tau, s, what);
  require_density(omega, what);
  require_density(tau, what);
}

}  // namespace detail

/// W1 via the full LMI (any site structure, total dimension at most 64).
inline W1Certificate w1_distance_generic(const Matrix& omega, const Matrix& tau, const SiteStructure& s,
                                         const sdp::Options& opt = {}) {
  detail::check_w1_inputs(omega, tau, s, "w1_distance");
  const std::int64_t dim = s.total_dim();
  if (dim > kW1ExactCap)
    throw CapacityError("w1_distance: total dimension exceeds the exact-mode cap of 64; use bracket mode");
  const int n = s.num_sites();
  const int d = static_cast<int>(dim);
  const Matrix delta = omega - tau;

  auto h_basis = sdp::hermitian_basis(d);
  std::vector<std::vector<sdp::SparseHermitian>> x_basis(static_cast<std::size_t>(n));
  int nvar = d * d;
  std::vector<int> x_off(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto others = detail::other_sites(n, i);
    const int dl = static_cast<int>(dim / s.dims[static_cast<std::size_t>(i)]);
    auto local = sdp::hermitian_basis(dl);
    // Dropping the first diagonal unit of X_1 removes the common shift H + c, X_i + c.
    for (std::size_t k = (i == 0 ? 1 : 0); k < local.size(); ++k)
      x_basis[static_cast<std::size_t>(i)].push_back(embed_sparse(local[k], s, others));
    x_off[static_cast<std::size_t>(i)] = nvar;
    nvar += static_cast<int>(x_basis[static_cast<std::size_t>(i)].size());
  }
  sdp::LmiBuilder lmi(nvar);
  const Matrix half = 0.5 * Matrix::Identity(d, d);
  std::vector<int> bp(static_cast<std::size_t>(n)), bn(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    bp[static_cast<std::size_t>(i)] = lmi.add_block(half);
    bn[static_cast<std::size_t>(i)] = lmi.add_block(half);
  }
  for (int k = 0; k < d * d; ++k) {
    const auto& b = h_basis[static_cast<std::size_t>(k)];
    lmi.set_objective(k, b.inner(delta));
    for (int i = 0; i < n; ++i) {
      lmi.add_coefficient(bp[static_cast<std::size_t>(i)], k, b.scaled(-1.0));
      lmi.add_coefficient(bn[static_cast<std::size_t>(i)], k, b);
    }
  }
  for (int i = 0; i < n; ++i)
    for (std::size_t k = 0; k < x_basis[static_cast<std::size_t>(i)].size(); ++k) {
      const int var = x_off[static_cast<std::size_t>(i)] + static_cast<int>(k);
      const auto& b = x_basis[static_cast<std::size_t>(i)][k];
      lmi.add_coefficient(bp[static_cast<std::size_t>(i)], var, b);
      lmi.add_coefficient(bn[static_cast<std::size_t>(i)], var, b.scaled(-1.0));
    }
  auto sol = sdp::solve(lmi.build(), opt);

  W1Certificate cert;
  cert.status = sol.status;
  cert.value = std::max(0.0, sol.dual_objective);
  cert.observable = Matrix::Zero(d, d);
  for (int k = 0; k < d * d; ++k) h_basis[static_cast<std::size_t>(k)].axpy_into(sol.y(k), cert.observable);
  for (int i = 0; i < n; ++i) {
    Matrix y = sol.x[static_cast<std::size_t>(bp[static_cast<std::size_t>(i)])] - sol.x[static_cast<std::size_t>(bn[static_cast<std::size_t>(i)])];
    cert.witness.push_back((y + y.adjoint()) / 2.0);
  }
  detail::exactify_witness(cert.witness, delta, s);
  cert.witness_cost = detail::witness_cost(cert.witness);
  return cert;
}

/// W1 for permutation-invariant inputs on identical sites. The optimal H can be
/// taken permutation invariant, so only the site-1 constraint is needed and X_1
/// is invariant under permutations of the remaining sites.
inline W1Certificate w1_distance_symmetric(const Matrix& omega, const Matrix& tau, const SiteStructure& s,
                                           const sdp::Options& opt = {}) {
  detail::check_w1_inputs(omega, tau, s, "w1_distance");
  const std::int64_t dim = s.total_dim();
  if (dim > kW1ExactCap)
    throw CapacityError("w1_distance: total dimension exceeds the exact-mode cap of 64; use bracket mode");
  const int n = s.num_sites();
  const int site = s.dims[0];
  for (int dk : s.dims)
    if (dk != site) throw std::invalid_argument("w1_distance_symmetric: sites must be identical");
  if (!is_permutation_invariant(omega, s) || !is_permutation_invariant(tau, s))
    throw std::invalid_argument("w1_distance_symmetric: inputs must be permutation invariant");
  const int d = static_cast<int>(dim);
  const Matrix delta = omega - tau;

  auto h_basis = invariant_hermitian_basis(site, n);
  auto x_local = invariant_hermitian_basis(site, n - 1);
  std::vector<sdp::SparseHermitian> x_basis;
  auto others = detail::other_sites(n, 0);
  for (const auto& b : x_local) {
    const bool is_corner = b.nnz() == 1 && b.rows[0] == 0 && b.cols[0] == 0;
    if (is_corner) continue;  // removes the common shift H + c, X_1 + c
    x_basis.push_back(n > 1 ? embed_sparse(b, s, others) : b);
  }
  const int nh = static_cast<int>(h_basis.size());
  const int nvar = nh + static_cast<int>(x_basis.size());
  sdp::LmiBuilder lmi(nvar);
  const Matrix half = 0.5 * Matrix::Identity(d, d);
  const int bp = lmi.add_block(half);
  const int bn = lmi.add_block(half);
  for (int k = 0; k < nh; ++k) {
    const auto& b = h_basis[static_cast<std::size_t>(k)];
    lmi.set_objective(k, b.inner(delta));
    lmi.add_coefficient(bp, k, b.scaled(-1.0));
    lmi.add_coefficient(bn, k, b);
  }
  for (std::size_t k = 0; k < x_basis.size(); ++k) {
    const int var = nh + static_cast<int>(k);
    lmi.add_coefficient(bp, var, x_basis[k]);
    lmi.add_coefficient(bn, var, x_basis[k].scaled(-1.0));
  }
  auto sol = sdp::solve(lmi.build(), opt);

  W1Certificate cert;
  cert.symmetric = true;
  cert.status = sol.status;
  cert.value = std::max(0.0, sol.dual_objective);
  cert.observable = Matrix::Zero(d, d);
  for (int k = 0; k < nh; ++k) h_basis[static_cast<std::size_t>(k)].axpy_into(sol.y(k), cert.observable);

  Matrix y = sol.x[static_cast<std::size_t>(bp)] - sol.x[static_cast<std::size_t>(bn)];
  y = (y + y.adjoint()) / 2.0;
  // Twirl over permutations fixing site 1, then move to site i.
  Matrix ybar = Matrix::Zero(d, d);
  auto rest = all_permutations(n - 1);
  for (const auto& p : rest) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    perm[0] = 0;
    for (int k = 1; k < n; ++k) perm[static_cast<std::size_t>(k)] = 1 + p[static_cast<std::size_t>(k - 1)];
    ybar += permute_sites(y, perm, s);
  }
  ybar /= static_cast<double>(rest.size());
  for (int i = 0; i < n; ++i)
    cert.witness.push_back(permute_sites(ybar, detail::transposition(n, 0, i), s) / static_cast<double>(n));
  detail::exactify_witness(cert.witness, delta, s);
  cert.witness_cost = detail::witness_cost(cert.witness);
  return cert;
}

/// Exact W1; uses the symmetry-reduced program when both states are permutation invariant.
inline W1Certificate w1_distance(const Matrix& omega, const Matrix& tau, const SiteStructure& s, const sdp::Options& opt = {}) {
  bool uniform = true;
  for (int dk : s.dims) uniform = uniform && dk == s.dims[0];
  if (s.num_sites() > 1 && uniform && is_permutation_invariant(omega, s) && is_permutation_invariant(tau, s))
    return w1_distance_symmetric(omega, tau, s, opt);
  return w1_distance_generic(omega, tau, s, opt);
}

/// (1/2) sum_i ||rho_{1..i} - rho_{1..i-1} (x) sigma_i||_1 for a product reference (x)_i sigma_i.
inline double w1_upper_bound_telescope(const Matrix& rho, const std::vector<Matrix>& sigma_sites, const SiteStructure& s) {
  check_operator(rho, s, "w1_upper_bound_telescope");
  const int n = s.num_sites();
  if (static_cast<int>(sigma_sites.size()) != n) throw std::invalid_argument("w1_upper_bound_telescope: one reference per site");
  double total = 0.0;
  Matrix prev = Matrix::Constant(1, 1, rho.trace());
  for (int i = 0; i < n; ++i) {
    if (sigma_sites[static_cast<std::size_t>(i)].rows() != s.dims[static_cast<std::size_t>(i)])
      throw std::invalid_argument("w1_upper_bound_telescope: reference dimension mismatch");
    std::vector<int> head;
    for (int k = 0; k <= i; ++k) head.push_back(k);
    Matrix cur = reduce_to(rho, s, head);
    total += trace_norm(cur - kron(prev, sigma_sites[static_cast<std::size_t>(i)]));
    prev = std::move(cur);
  }
  return 0.5 * total;
}

inline double w1_upper_bound_telescope(const Matrix& rho, const Matrix& sigma, const SiteStructure& s) {
  return w1_upper_bound_telescope(rho, std::vector<Matrix>(static_cast<std::size_t>(s.num_sites()), sigma), s);
}

/// Best pairing over observables sum_i h_i with ||h_i||_inf <= 1/2 on single sites:
/// (1/2) sum_i ||omega_i - tau_i||_1. Each such observable has Lipschitz constant at most 1.
inline double w1_lower_bound_single_site(const Matrix& omega, const Matrix& tau, const SiteStructure& s) {
  check_operator(omega, s, "w1_lower_bound_single_site");
  check_operator(tau, s, "w1_lower_bound_single_site");
  double total = 0.0;
  for (int i = 0; i < s.num_sites(); ++i) total += trace_norm(reduce_to(omega, s, {i}) - reduce_to(tau, s, {i}));
  return 0.5 * total;
}

struct W1Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

/// Bracket lo <= W1 <= hi without the full SDP. The upper end is the smaller of
/// n * (1/2)||omega - tau||_1 and, when tau is a product of its marginals, the telescope.
inline W1Bracket w1_bracket(const Matrix& omega, const Matrix& tau, const SiteStructure& s) {
  detail::check_w1_inputs(omega, tau, s, "w1_bracket");
  const int n = s.num_sites();
  W1Bracket b;
  b.lo = w1_lower_bound_single_site(omega, tau, s);
  b.hi = n * 0.5 * trace_norm(omega - tau);
  std::vector<Matrix> marg;
  for (int i = 0; i < n; ++i) marg.push_back(reduce_to(tau, s, {i}));
  Matrix prod = tensor(std::span<const Matrix>(marg));
  if ((prod - tau).cwiseAbs().maxCoeff() <= 1e-12) b.hi = std::min(b.hi, w1_upper_bound_telescope(omega, marg, s));
  b.hi = std::max(b.hi, b.lo);
  return b;
}

// ---------------------------------------------------------------------------
// Lipschitz constant

/// min over Hermitian X on the other sites of ||H - X (x) 1_i||_inf.
inline double lipschitz_site_term(const Matrix& h, const SiteStructure& s, int i, const sdp::Options& opt = {}) {
  check_operator(h, s, "lipschitz_constant");
  if (!is_hermitian(h)) throw std::invalid_argument("lipschitz_constant: H must be Hermitian");
  const int n = s.num_sites();
  const int d = static_cast<int>(s.total_dim());
  if (n == 1) {
    // X is a scalar: the best shift centres the spectrum.
    RealVector ev = eigenvalues(hermitize(h));
    return 0.5 * (ev.maxCoeff() - ev.minCoeff());
  }
  auto others = detail::other_sites(n, i);
  const int dl = static_cast<int>(s.total_dim() / s.dims[static_cast<std::size_t>(i)]);
  auto local = sdp::hermitian_basis(dl);
  sdp::LmiBuilder lmi(1 + dl * dl);
  const Matrix hh = hermitize(h);
  const int b_up = lmi.add_block(-hh);
  const int b_lo = lmi.add_block(hh);
  sdp::SparseHermitian id;
  for (int k = 0; k < d; ++k) id.push(k, k, 1.0);
  lmi.add_coefficient(b_up, 0, id);
  lmi.add_coefficient(b_lo, 0, id);
  lmi.set_objective(0, -1.0);
  for (int k = 0; k < dl * dl; ++k) {
    auto e = embed_sparse(local[static_cast<std::size_t>(k)], s, others);
    lmi.add_coefficient(b_up, 1 + k, e);
    lmi.add_coefficient(b_lo, 1 + k, e.scaled(-1.0));
  }
  auto sol = sdp::solve(lmi.build(), opt);
  return std::max(0.0, -sol.dual_objective);
}

inline double lipschitz_constant(const Matrix& h, const SiteStructure& s, const sdp::Options& opt = {}) {
  double best = 0.0;
  for (int i = 0; i < s.num_sites(); ++i) best = std::max(best, lipschitz_site_term(h, s, i, opt));
  return 2.0 * best;
}

struct PairingReport {
  double pairing = 0.0;  // tr[(omega - tau) H]
  double w1 = 0.0;
  double lipschitz = 0.0;
  double slack = 0.0;  // w1 * lipschitz - pairing
  bool pass = false;
};

inline PairingReport w1_dual_pairing_check(const Matrix& omega, const Matrix& tau, const Matrix& h, const SiteStructure& s,
                                           double tol = 1e-6) {
  PairingReport r;
  r.pairing = ((omega - tau) * h).trace().real();
  auto cert = w1_distance(omega, tau, s);
  r.w1 = cert.value;
  r.lipschitz = lipschitz_constant(h, s);
  r.slack = r.w1 * r.lipschitz - r.pairing;
  r.pass = r.slack >= -tol;
  return r;
}

}  // namespace qstein
