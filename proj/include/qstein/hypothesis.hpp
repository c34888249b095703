#pragma once

// Hypothesis-testing relative entropy, smooth max-relative entropy and the
// sandwich relating them.
//
// Convention: D_H^eps(rho||sigma) = -log min{ tr[sigma M] : 0 <= M <= 1, tr[rho(1-M)] <= eps }.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "qstein/divergences.hpp"
#include "qstein/sdp.hpp"
#include "qstein/symmetry.hpp"

namespace qstein {

struct BlockTestResult {
  double beta = 0.0;
  /// Lagrange dual lower bound on beta; beta - lower certifies optimality.
  double lower = 0.0;
  double accept = 0.0;  // tr[rho M]
  std::vector<Matrix> test;
};

struct TestResult {
  double beta = 0.0;
  double lower = 0.0;
  Matrix test;
};

namespace detail {

inline void check_eps_open(double eps, const char* what) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument(std::string(what) + ": eps must lie in (0,1)");
}

struct Threshold {
  double accept = 0.0;  // sum_k m_k tr[rho_k P_k]
  double cost = 0.0;    // sum_k m_k tr[sigma_k P_k]
  std::vector<Matrix> proj;
};

/// Projectors onto the strictly positive part of lambda*rho - sigma, blockwise.
inline Threshold positive_part(const BlockDiag& rho, const BlockDiag& sigma, double lambda) {
  Threshold t;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    const Matrix& r = rho.blocks[k];
    const Matrix& s = sigma.blocks[k];
    const Eigen::Index d = r.rows();
    Matrix p = Matrix::Zero(d, d);
    if (lambda > 0.0) {
      Matrix diff = lambda * r - s;
      auto ed = eigh((diff + diff.adjoint()) / 2.0);
      const double scale = lambda * r.cwiseAbs().maxCoeff() + s.cwiseAbs().maxCoeff();
      const double thr = 1e-13 * std::max(scale, 1e-300);
      for (Eigen::Index i = 0; i < d; ++i)
        if (ed.values(i) > thr) p += ed.vectors.col(i) * ed.vectors.col(i).adjoint();
    }
    t.accept += rho.multiplicity[k] * (r * p).trace().real();
    t.cost += rho.multiplicity[k] * (s * p).trace().real();
    t.proj.push_back(std::move(p));
  }
  return t;
}

}  // namespace detail

/// Optimal type-II error for block-diagonal rho, sigma (same block shapes).
///
/// The Lagrange dual L(l) = l(1-eps) - tr(l rho - sigma)_+ is concave with
/// supergradient (1-eps) - tr[rho P_{>0}(l rho - sigma)]. Bisection on l brackets
/// the maximiser; the test mixes the two bracketing projectors so that
/// tr[rho M] = 1 - eps exactly, which also fills degenerate kernels.
inline BlockTestResult beta_eps_blocks(const BlockDiag& rho, const BlockDiag& sigma, double eps) {
  detail::check_eps_open(eps, "beta_eps");
  rho.check_compatible(sigma, "beta_eps");
  const double target = 1.0 - eps;

  auto at = [&](double l) { return detail::positive_part(rho, sigma, l); };
  double hi = 1.0;
  detail::Threshold thi = at(hi);
  while (thi.accept < target && hi < 1e300) {
    hi *= 4.0;
    thi = at(hi);
  }
  double lo = hi / 4.0;
  detail::Threshold tlo = at(lo);
  while (tlo.accept >= target && lo > 1e-300) {
    hi = lo;
    thi = std::move(tlo);
    lo /= 4.0;
    tlo = at(lo);
  }
  if (tlo.accept >= target) {
    lo = 0.0;
    tlo = at(0.0);
  }
  for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = lo > 0.0 ? std::sqrt(lo * hi) : hi / 2.0;
    const double m2 = (mid <= lo || mid >= hi) ? 0.5 * (lo + hi) : mid;
    detail::Threshold tm = at(m2);
    if (tm.accept >= target) {
      hi = m2;
      thi = std::move(tm);
    } else {
      lo = m2;
      tlo = std::move(tm);
    }
  }
  const double span = thi.accept - tlo.accept;
  const double s = span > 0.0 ? std::clamp((target - tlo.accept) / span, 0.0, 1.0) : 1.0;

  BlockTestResult out;
  out.beta = std::max(0.0, (1.0 - s) * tlo.cost + s * thi.cost);
  out.accept = (1.0 - s) * tlo.accept + s * thi.accept;
  for (std::size_t k = 0; k < rho.size(); ++k) out.test.push_back((1.0 - s) * tlo.proj[k] + s * thi.proj[k]);
  auto dual = [&](double l, const detail::Threshold& t) { return l * target - (l * t.accept - t.cost); };
  out.lower = std::max({0.0, dual(lo, tlo), dual(hi, thi)});
  return out;
}

inline TestResult beta_eps(const Matrix& rho, const Matrix& sigma, double eps) {
  check_same_dims(rho, sigma, "beta_eps");
  require_density(rho, "beta_eps");
  require_density(sigma, "beta_eps");
  auto r = beta_eps_blocks(BlockDiag::single(rho), BlockDiag::single(sigma), eps);
  return {r.beta, r.lower, r.test[0]};
}

inline ExtendedReal dh_from_beta(double beta) { return beta < 1e-300 ? kInf : -std::log(beta); }

inline ExtendedReal dh(const Matrix& rho, const Matrix& sigma, double eps) { return dh_from_beta(beta_eps(rho, sigma, eps).beta); }

inline ExtendedReal dh_blocks(const BlockDiag& rho, const BlockDiag& sigma, double eps) {
  return dh_from_beta(beta_eps_blocks(rho, sigma, eps).beta);
}

/// Solver settings for dh_sdp: beta can be small, so the gap is tightened to keep -log(beta) accurate.
inline sdp::Options dh_sdp_options() {
  sdp::Options o;
  o.gap_tol = 1e-11;
  return o;
}

/// D_H^eps from the semidefinite program
///   max -tr[sigma M]  s.t.  M >= 0, 1 - M >= 0, tr[rho M] >= 1 - eps.
inline ExtendedReal dh_sdp(const Matrix& rho, const Matrix& sigma, double eps, const sdp::Options& opt = dh_sdp_options()) {
  detail::check_eps_open(eps, "dh_sdp");
  check_same_dims(rho, sigma, "dh_sdp");
  const int d = static_cast<int>(rho.rows());
  auto basis = sdp::hermitian_basis(d);
  sdp::LmiBuilder lmi(d * d);
  const int b_pos = lmi.add_block(Matrix::Zero(d, d));
  const int b_cap = lmi.add_block(Matrix::Identity(d, d));
  Matrix c(1, 1);
  c(0, 0) = -(1.0 - eps);
  const int b_acc = lmi.add_block(c);
  for (int k = 0; k < d * d; ++k) {
    const auto& bk = basis[static_cast<std::size_t>(k)];
    lmi.add_coefficient(b_pos, k, bk);
    lmi.add_coefficient(b_cap, k, bk.scaled(-1.0));
    sdp::SparseHermitian a;
    a.push(0, 0, bk.inner(rho));
    lmi.add_coefficient(b_acc, k, a);
    lmi.set_objective(k, -bk.inner(sigma));
  }
  auto sol = sdp::solve(lmi.build(), opt);
  if (sol.status == sdp::Status::kInfeasible) throw std::runtime_error("dh_sdp: solver reported infeasible");
  return dh_from_beta(-sol.dual_objective);
}

// ---------------------------------------------------------------------------
// Classical iid fast path

namespace detail {

inline double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

inline void enumerate_types(int k, int n, std::vector<int>& cur, int pos, int left,
                            const std::function<void(const std::vector<int>&)>& visit) {
  if (pos == k - 1) {
    cur[static_cast<std::size_t>(pos)] = left;
    visit(cur);
    return;
  }
  for (int c = left; c >= 0; --c) {
    cur[static_cast<std::size_t>(pos)] = c;
    enumerate_types(k, n, cur, pos + 1, left - c, visit);
  }
}

}  // namespace detail

struct ClassicalTestResult {
  double log_beta = 0.0;  // natural log of the optimal type-II error
  ExtendedReal dh = 0.0;  // -log_beta
};

/// Exact beta_eps for p^{(x) n} vs q^{(x) n} over type classes, in log-domain arithmetic.
inline ClassicalTestResult dh_classical_iid(const std::vector<double>& p, const std::vector<double>& q, int n, double eps) {
  detail::check_eps_open(eps, "dh_classical_iid");
  if (p.size() != q.size() || p.empty()) throw std::invalid_argument("dh_classical_iid: p and q must have equal nonzero length");
  if (n < 1) throw std::invalid_argument("dh_classical_iid: n must be positive");
  auto check_prob = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) {
      if (!(x >= 0.0)) throw std::invalid_argument("dh_classical_iid: negative probability");
      s += x;
    }
    if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("dh_classical_iid: probabilities must sum to 1");
  };
  check_prob(p);
  check_prob(q);
  const int k = static_cast<int>(p.size());

  struct TypeClass {
    double llr;    // log p^n(x) - log q^n(x) for x in the class
    double log_p;  // log P^n(class)
    double log_q;  // log Q^n(class)
  };
  std::vector<TypeClass> classes;
  std::vector<int> cur(static_cast<std::size_t>(k));
  const double lg_n = std::lgamma(n + 1.0);
  detail::enumerate_types(k, n, cur, 0, n, [&](const std::vector<int>& c) {
    double log_mult = lg_n, lp = 0.0, lq = 0.0;
    for (int x = 0; x < k; ++x) {
      const int cx = c[static_cast<std::size_t>(x)];
      log_mult -= std::lgamma(cx + 1.0);
      if (cx == 0) continue;
      lp += cx * std::log(p[static_cast<std::size_t>(x)]);
      lq += cx * std::log(q[static_cast<std::size_t>(x)]);
    }
    if (lp == -kInf && lq == -kInf) return;
    double llr = (lq == -kInf) ? kInf : (lp == -kInf ? -kInf : lp - lq);
    classes.push_back({llr, log_mult + lp, log_mult + lq});
  });
  std::stable_sort(classes.begin(), classes.end(), [](const TypeClass& a, const TypeClass& b) { return a.llr > b.llr; });

  const double target = 1.0 - eps;
  double acc_p = 0.0;
  double log_beta = -kInf;
  for (const auto& c : classes) {
    const double pc = std::exp(c.log_p);
    if (acc_p + pc < target) {
      acc_p += pc;
      log_beta = detail::log_sum_exp(log_beta, c.log_q);
      continue;
    }
    const double frac = pc > 0.0 ? (target - acc_p) / pc : 0.0;
    if (frac > 0.0) log_beta = detail::log_sum_exp(log_beta, std::log(frac) + c.log_q);
    acc_p = target;
    break;
  }
  ClassicalTestResult r;
  r.log_beta = log_beta;
  r.dh = log_beta == -kInf ? kInf : -log_beta;
  return r;
}

// ---------------------------------------------------------------------------
// Smooth max-relative entropy

namespace detail {

inline void check_eps_smooth(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("smooth_dmax: eps must lie in [0,1)");
}

inline ExtendedReal dmax_blocks(const BlockDiag& rho, const BlockDiag& sigma) {
  ExtendedReal best = -kInf;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    if (rho.multiplicity[k] <= 0.0) continue;
    if (rho.blocks[k].cwiseAbs().maxCoeff() <= 1e-300) continue;
    best = std::max(best, dmax(rho.blocks[k], sigma.blocks[k]));
  }
  return best;
}

}  // namespace detail

struct SmoothDmaxResult {
  ExtendedReal value = 0.0;
  sdp::Status status = sdp::Status::kOptimal;
  double lower = 0.0;  // log of the SDP primal bound
  std::vector<Matrix> optimizer;
};

/// min over normalized rho' with P(rho, rho') <= eps of D_max(rho'||sigma), blockwise.
///
/// The optimizer lives on supp(sigma); the fidelity constraint uses Watrous's
/// block form [[rho, X], [X^dagger, rho']] >= 0 with sum_k m_k Re tr X_k >= sqrt(1-eps^2),
/// where X_k is compressed to supp(rho_k) x supp(sigma_k).
inline SmoothDmaxResult smooth_dmax_blocks(const BlockDiag& rho, const BlockDiag& sigma, double eps,
                                           const sdp::Options& opt = {}) {
  detail::check_eps_smooth(eps);
  rho.check_compatible(sigma, "smooth_dmax");
  SmoothDmaxResult res;
  if (eps == 0.0) {
    res.value = detail::dmax_blocks(rho, sigma);
    res.lower = res.value;
    return res;
  }
  const std::size_t nb = rho.size();
  std::vector<Matrix> vs(nb), vr(nb), sig(nb), rs(nb);
  double reachable = 0.0, dim_total = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    vs[k] = sigma.blocks[k].rows() ? support_basis(sigma.blocks[k]) : Matrix();
    vr[k] = rho.blocks[k].rows() ? support_basis(rho.blocks[k]) : Matrix();
    sig[k] = vs[k].adjoint() * sigma.blocks[k] * vs[k];
    rs[k] = vr[k].adjoint() * rho.blocks[k] * vr[k];
    reachable += rho.multiplicity[k] * (vs[k].adjoint() * rho.blocks[k] * vs[k]).trace().real();
    dim_total += rho.multiplicity[k] * static_cast<double>(vs[k].cols());
  }
  if (dim_total <= 0.0) throw std::invalid_argument("smooth_dmax: sigma is zero");
  const double root = std::sqrt(1.0 - eps * eps);
  if (reachable < root * root - 1e-12) {
    res.value = kInf;
    res.lower = kInf;
    res.status = sdp::Status::kInfeasible;
    return res;
  }

  // Variable layout: [m | rho' coordinates | X coordinates].
  struct Coord {
    std::size_t block;
    sdp::SparseHermitian dir;  // direction inside block `block` (compressed coordinates)
    std::size_t pivot_block;   // correction on the pivot diagonal entry
    double pivot_weight;
  };
  std::size_t pivot = nb;
  for (std::size_t k = 0; k < nb; ++k)
    if (vs[k].cols() > 0 && rho.multiplicity[k] > 0.0) {
      pivot = k;
      break;
    }
  std::vector<Coord> coords;
  for (std::size_t k = 0; k < nb; ++k) {
    const int d = static_cast<int>(vs[k].cols());
    for (int i = 0; i < d; ++i) {
      if (k == pivot && i == 0) continue;
      sdp::SparseHermitian s;
      s.push(i, i, 1.0);
      coords.push_back({k, s, pivot, -rho.multiplicity[k] / rho.multiplicity[pivot]});
    }
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        sdp::SparseHermitian re, im;
        re.add_hermitian_pair(i, j, 1.0);
        im.add_hermitian_pair(i, j, cplx(0.0, 1.0));
        coords.push_back({k, re, pivot, 0.0});
        coords.push_back({k, im, pivot, 0.0});
      }
  }
  std::vector<int> x_offset(nb, 0);
  int nvar = 1 + static_cast<int>(coords.size());
  for (std::size_t k = 0; k < nb; ++k) {
    x_offset[k] = nvar;
    nvar += 2 * static_cast<int>(vr[k].cols() * vs[k].cols());
  }

  sdp::LmiBuilder lmi(nvar);
  lmi.set_objective(0, -1.0);
  std::vector<int> b_pos(nb, -1), b_dom(nb, -1), b_fid(nb, -1);
  const double base = 1.0 / dim_total;
  for (std::size_t k = 0; k < nb; ++k) {
    const Eigen::Index d = vs[k].cols();
    const Eigen::Index r = vr[k].cols();
    if (d == 0) continue;
    const Matrix off = base * Matrix::Identity(d, d);
    b_pos[k] = lmi.add_block(off);
    b_dom[k] = lmi.add_block(-off);
    lmi.add_coefficient(b_dom[k], 0, sdp::SparseHermitian::from_dense(sig[k]));
    if (r > 0) {
      Matrix f = Matrix::Zero(r + d, r + d);
      f.topLeftCorner(r, r) = rs[k];
      f.bottomRightCorner(d, d) = off;
      b_fid[k] = lmi.add_block(f);
    }
  }
  auto shift = [](const sdp::SparseHermitian& s, int by) {
    sdp::SparseHermitian out = s;
    for (auto& v : out.rows) v += by;
    for (auto& v : out.cols) v += by;
    return out;
  };
  for (std::size_t c = 0; c < coords.size(); ++c) {
    const int var = 1 + static_cast<int>(c);
    const auto& co = coords[c];
    auto apply = [&](std::size_t k, const sdp::SparseHermitian& dir) {
      const int r = static_cast<int>(vr[k].cols());
      lmi.add_coefficient(b_pos[k], var, dir);
      lmi.add_coefficient(b_dom[k], var, dir.scaled(-1.0));
      if (b_fid[k] >= 0) lmi.add_coefficient(b_fid[k], var, shift(dir, r));
    };
    apply(co.block, co.dir);
    if (co.pivot_weight != 0.0) {
      sdp::SparseHermitian pv;
      pv.push(0, 0, co.pivot_weight);
      apply(co.pivot_block, pv);
    }
  }
  // Overlap row: sum_k m_k Re tr[V_rho X_k V_sigma^dagger] - sqrt(1-eps^2) >= 0.
  Matrix cst(1, 1);
  cst(0, 0) = -root;
  const int b_ov = lmi.add_block(cst);
  for (std::size_t k = 0; k < nb; ++k) {
    const int r = static_cast<int>(vr[k].cols());
    const int d = static_cast<int>(vs[k].cols());
    if (r == 0 || d == 0) continue;
    const Matrix overlap = vs[k].adjoint() * vr[k];  // d x r; Re tr[V_r X V_s^dag] = Re sum_ij X_ij overlap_ji
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < d; ++j) {
        const int var_re = x_offset[k] + 2 * (i * d + j);
        const int var_im = var_re + 1;
        sdp::SparseHermitian re, im;
        re.add_hermitian_pair(i, r + j, 1.0);
        im.add_hermitian_pair(i, r + j, cplx(0.0, 1.0));
        lmi.add_coefficient(b_fid[k], var_re, re);
        lmi.add_coefficient(b_fid[k], var_im, im);
        const cplx w = overlap(j, i);
        sdp::SparseHermitian a, b;
        a.push(0, 0, rho.multiplicity[k] * w.real());
        b.push(0, 0, -rho.multiplicity[k] * w.imag());
        lmi.add_coefficient(b_ov, var_re, a);
        lmi.add_coefficient(b_ov, var_im, b);
      }
  }

  auto sol = sdp::solve(lmi.build(), opt);
  res.status = sol.status;
  if (sol.status == sdp::Status::kInfeasible) {
    res.value = kInf;
    res.lower = kInf;
    return res;
  }
  const double m = sol.y(0);
  res.value = m > 0.0 ? std::log(m) : -kInf;
  res.lower = sol.primal_objective < 0.0 ? std::log(-sol.primal_objective) : -kInf;
  for (std::size_t k = 0; k < nb; ++k) {
    const Eigen::Index d = vs[k].cols();
    Matrix a = Matrix::Zero(rho.blocks[k].rows(), rho.blocks[k].rows());
    if (d > 0) {
      Matrix comp = base * Matrix::Identity(d, d);
      for (std::size_t c = 0; c < coords.size(); ++c) {
        const double yv = sol.y(1 + static_cast<Eigen::Index>(c));
        if (coords[c].block == k) coords[c].dir.axpy_into(yv, comp);
        if (coords[c].pivot_weight != 0.0 && coords[c].pivot_block == k) comp(0, 0) += yv * coords[c].pivot_weight;
      }
      a = vs[k] * comp * vs[k].adjoint();
    }
    res.optimizer.push_back((a + a.adjoint()) / 2.0);
  }
  return res;
}

inline ExtendedReal smooth_dmax(const Matrix& rho, const Matrix& sigma, double eps) {
  check_same_dims(rho, sigma, "smooth_dmax");
  require_density(rho, "smooth_dmax");
  require_density(sigma, "smooth_dmax");
  return smooth_dmax_blocks(BlockDiag::single(rho), BlockDiag::single(sigma), eps).value;
}

// ---------------------------------------------------------------------------
// Sandwich check

struct SandwichReport {
  ExtendedReal lhs = 0.0;  // D_H^{1-eps}
  ExtendedReal mid = 0.0;  // D_max^{sqrt eps} - log(1/(1-eps))
  ExtendedReal rhs = 0.0;  // D_H^{1-eps-nu} - log(4/nu^2)
  double slack_left = 0.0;
  double slack_right = 0.0;
  bool pass = false;
};

namespace detail {

/// a - b for extended reals, +inf when a is +inf, -inf when only b is.
inline double extended_slack(ExtendedReal a, ExtendedReal b) {
  if (is_inf(a)) return kInf;
  if (is_inf(b)) return -kInf;
  return a - b;
}

}  // namespace detail

inline SandwichReport buscemi_sandwich_check_blocks(const BlockDiag& rho, const BlockDiag& sigma, double eps, double nu,
                                                    double slack = 1e-6) {
  detail::check_eps_open(eps, "buscemi_sandwich_check");
  if (!(nu > 0.0 && nu < 1.0 - eps)) throw std::invalid_argument("buscemi_sandwich_check: nu must lie in (0, 1-eps)");
  SandwichReport r;
  r.lhs = dh_blocks(rho, sigma, 1.0 - eps);
  r.mid = smooth_dmax_blocks(rho, sigma, std::sqrt(eps)).value - std::log(1.0 / (1.0 - eps));
  r.rhs = dh_blocks(rho, sigma, 1.0 - eps - nu) - std::log(4.0 / (nu * nu));
  r.slack_left = detail::extended_slack(r.lhs, r.mid);
  r.slack_right = detail::extended_slack(r.mid, r.rhs);
  r.pass = r.slack_left >= -slack && r.slack_right >= -slack;
  return r;
}

inline SandwichReport buscemi_sandwich_check(const Matrix& rho, const Matrix& sigma, double eps, double nu, double slack = 1e-6) {
  check_same_dims(rho, sigma, "buscemi_sandwich_check");
  require_density(rho, "buscemi_sandwich_check");
  require_density(sigma, "buscemi_sandwich_check");
  return buscemi_sandwich_check_blocks(BlockDiag::single(rho), BlockDiag::single(sigma), eps, nu, slack);
}

}  // namespace qstein
