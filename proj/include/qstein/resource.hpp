#pragma once

// Relative entropy of resource over computable convex sets: membership tests,
// Frank-Wolfe minimization, replacer and smoothing channels, continuity bounds.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qstein/divergences.hpp"
#include "qstein/sdp.hpp"
#include "qstein/symmetry.hpp"
#include "qstein/tensor.hpp"
#include "qstein/wasserstein.hpp"

namespace qstein {

/// Free set on n sites: either {sigma^{(x) n}} or the PPT states across the A^n : B^n cut.
struct ResourceSet {
  enum class Kind { kSingleIID, kPPT };

  Kind kind = Kind::kPPT;
  SiteStructure structure;
  /// Single-site state for kSingleIID.
  Matrix sigma;
  /// Full-rank single-site member used by the replacer.
  Matrix omega;
  double lambda_min = 0.0;

  static ResourceSet single_iid(const Matrix& sigma_site, int n) {
    require_density(sigma_site, "ResourceSet::single_iid");
    const double lmin = min_eigenvalue(sigma_site);
    if (lmin <= tol::kSupport) throw std::invalid_argument("ResourceSet::single_iid: sigma must be full rank");
    ResourceSet r;
    r.kind = Kind::kSingleIID;
    r.structure = SiteStructure::uniform(static_cast<int>(sigma_site.rows()), n);
    r.sigma = sigma_site;
    r.omega = sigma_site;
    r.lambda_min = lmin;
    return r;
  }

  static ResourceSet ppt(const SiteStructure& s) {
    if (!s.bipartition) throw std::invalid_argument("ResourceSet::ppt: structure needs a bipartition");
    for (int dk : s.dims)
      if (dk != s.dims[0]) throw std::invalid_argument("ResourceSet::ppt: sites must be identical");
    ResourceSet r;
    r.kind = Kind::kPPT;
    r.structure = s;
    r.omega = maximally_mixed(s.dims[0]);
    r.lambda_min = 1.0 / s.dims[0];
    return r;
  }

  int num_sites() const { return structure.num_sites(); }
  Matrix omega_n() const { return tensor_power(omega, num_sites()); }
};

inline std::string to_string(ResourceSet::Kind k) { return k == ResourceSet::Kind::kPPT ? "ppt" : "iid"; }

inline bool is_member(const ResourceSet& set, const Matrix& tau) {
  check_operator(tau, set.structure, "is_member");
  if (set.kind == ResourceSet::Kind::kSingleIID)
    return trace_norm(tau - tensor_power(set.sigma, set.num_sites())) <= 1e-8;
  if (!is_density(tau)) return false;
  return min_eigenvalue(hermitize(partial_transpose_b(tau, set.structure))) >= -1e-9;
}

struct REEResult {
  ExtendedReal value = 0.0;
  Matrix optimizer;
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;
};

/// Gradient of sigma -> D(rho||sigma): -(Dlog_sigma)[rho] via the divided-difference kernel of log.
inline Matrix ree_gradient(const Matrix& rho, const Matrix& sigma) {
  auto [lam, u] = eigh(sigma);
  const auto d = lam.size();
  const double lmax = lam.maxCoeff();
  Matrix r = u.adjoint() * rho * u;
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) {
      const double a = lam(i), b = lam(j);
      double k;
      if (std::abs(a - b) <= 1e-12 * lmax)
        k = 2.0 / (a + b);
      else
        k = (std::log(a) - std::log(b)) / (a - b);
      r(i, j) *= k;
    }
  Matrix g = -(u * r * u.adjoint());
  return (g + g.adjoint()) / 2.0;
}

/// argmin tr[G tau] over PPT states, by SDP. tau = E_00 + sum_k y_k B_k with the trace pinned.
inline Matrix ppt_linear_minimizer(const Matrix& g, const SiteStructure& s, const sdp::Options& opt = {}) {
  const int d = static_cast<int>(s.total_dim());
  auto basis = sdp::hermitian_basis(d);
  const int nvar = d * d - 1;
  sdp::LmiBuilder lmi(nvar);
  Matrix e00 = Matrix::Zero(d, d);
  e00(0, 0) = 1.0;
  const int b_pos = lmi.add_block(e00);
  const int b_ppt = lmi.add_block(e00);
  std::vector<Matrix> dirs;
  for (int k = 1; k < d * d; ++k) {
    Matrix dir = basis[static_cast<std::size_t>(k)].dense(d);
    if (k < d) dir(0, 0) = -1.0;
    const int var = k - 1;
    lmi.add_coefficient(b_pos, var, sdp::SparseHermitian::from_dense(dir));
    lmi.add_coefficient(b_ppt, var, sdp::SparseHermitian::from_dense(partial_transpose_b(dir, s)));
    lmi.set_objective(var, -(g * dir).trace().real());
    dirs.push_back(std::move(dir));
  }
  auto sol = sdp::solve(lmi.build(), opt);
  Matrix tau = e00;
  for (int v = 0; v < nvar; ++v) tau += sol.y(v) * dirs[static_cast<std::size_t>(v)];
  tau = (tau + tau.adjoint()) / 2.0;
  // Clean residual negativity so the iterate stays a state.
  auto [lam, u] = eigh(tau);
  for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = std::max(lam(i), 0.0);
  tau = reconstruct(lam, u);
  return tau / tau.trace().real();
}

/// Interior point of the PPT set near the minimizer of D(rho||.): L-BFGS on
/// D(rho||sigma) - mu log det sigma - mu log det sigma^T_B over traceless moves,
/// with mu decreasing until 2 d mu <= mu_final_scale.
inline Matrix ppt_barrier_warm_start(const Matrix& rho, const SiteStructure& s, double target_gap, int max_inner = 300) {
  const int d = static_cast<int>(rho.rows());
  const double neg_entropy = -von_neumann_entropy(rho);
  const Matrix id = Matrix::Identity(d, d);
  auto inner = [](const Matrix& a, const Matrix& b) { return (a.adjoint() * b).trace().real(); };
  auto traceless = [&](Matrix m) {
    m = (m + m.adjoint()) / 2.0;
    return Matrix(m - (m.trace().real() / d) * id);
  };
  struct Eval {
    double value;
    Matrix grad;
  };
  auto evaluate = [&](const Matrix& x, double mu, bool with_grad) -> std::optional<Eval> {
    Eigen::SelfAdjointEigenSolver<Matrix> es(x);
    const RealVector& lam = es.eigenvalues();
    if (lam(0) <= 0.0) return std::nullopt;
    Matrix xt = hermitize(partial_transpose_b(x, s));
    Eigen::SelfAdjointEigenSolver<Matrix> et(xt);
    const RealVector& lt = et.eigenvalues();
    if (lt(0) <= 0.0) return std::nullopt;
    const Matrix& u = es.eigenvectors();
    double cross = 0.0, logdet = 0.0, logdet_t = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      cross += (u.col(i).adjoint() * rho * u.col(i)).value().real() * std::log(lam(i));
      logdet += std::log(lam(i));
      logdet_t += std::log(lt(i));
    }
    Eval e{neg_entropy - cross - mu * (logdet + logdet_t), Matrix()};
    if (with_grad) {
      RealVector inv = lam.cwiseInverse(), inv_t = lt.cwiseInverse();
      Matrix g = ree_gradient(rho, x) - mu * reconstruct(inv, u) -
                 mu * partial_transpose_b(reconstruct(inv_t, et.eigenvectors()), s);
      e.grad = traceless(g);
    }
    return e;
  };
  Matrix x = maximally_mixed(d);
  double mu = 1e-2;
  const double mu_final = target_gap / (4.0 * d);
  const int memory = 10;
  while (true) {
    std::vector<Matrix> ss, ys;
    std::vector<double> rhos;
    auto cur = *evaluate(x, mu, true);
    for (int it = 0; it < max_inner; ++it) {
      const double gnorm = std::sqrt(inner(cur.grad, cur.grad));
      if (gnorm <= 1e-3 * mu + 1e-12) break;
      // Two-loop recursion.
      Matrix q = cur.grad;
      std::vector<double> alpha(ss.size());
      for (std::size_t j = ss.size(); j-- > 0;) {
        alpha[j] = rhos[j] * inner(ss[j], q);
        q -= alpha[j] * ys[j];
      }
      double scale = ss.empty() ? 1.0 / gnorm * 1e-2 : inner(ss.back(), ys.back()) / inner(ys.back(), ys.back());
      Matrix r = scale * q;
      for (std::size_t j = 0; j < ss.size(); ++j) {
        const double b = rhos[j] * inner(ys[j], r);
        r += (alpha[j] - b) * ss[j];
      }
      Matrix dir = -r;
      double slope = inner(cur.grad, dir);
      if (!(slope < 0.0)) {
        dir = -cur.grad * (1e-2 / gnorm);
        slope = inner(cur.grad, dir);
        ss.clear();
        ys.clear();
        rhos.clear();
      }
      double step = 1.0;
      std::optional<Eval> next;
      for (int bt = 0; bt < 60; ++bt, step *= 0.5) {
        next = evaluate(x + step * dir, mu, false);
        if (next && next->value <= cur.value + 1e-4 * step * slope) break;
        next.reset();
      }
      if (!next) break;
      Matrix xn = x + step * dir;
      auto full = *evaluate(xn, mu, true);
      Matrix sk = xn - x, yk = full.grad - cur.grad;
      const double sy = inner(sk, yk);
      if (sy > 1e-16) {
        ss.push_back(sk);
        ys.push_back(yk);
        rhos.push_back(1.0 / sy);
        if (static_cast<int>(ss.size()) > memory) {
          ss.erase(ss.begin());
          ys.erase(ys.begin());
          rhos.erase(rhos.begin());
        }
      }
      x = (xn + xn.adjoint()) / 2.0;
      cur = std::move(full);
    }
    if (mu <= mu_final) break;
    mu = std::max(mu / 10.0, mu_final);
  }
  return x;
}

struct FrankWolfeOptions {
  double tol = 1e-4;
  int max_iter = 5000;
  int golden_steps = 20;
  int local_steps = 5;
  bool warm_start = true;
  sdp::Options lmo;
};

/// min_{sigma in set} D(rho||sigma). The value is certified within the reported Frank-Wolfe gap.
inline REEResult ree_frank_wolfe(const Matrix& rho, const ResourceSet& set, const FrankWolfeOptions& opt = {}) {
  check_operator(rho, set.structure, "ree_frank_wolfe");
  require_density(rho, "ree_frank_wolfe");
  REEResult res;
  if (set.kind == ResourceSet::Kind::kSingleIID) {
    res.optimizer = tensor_power(set.sigma, set.num_sites());
    res.value = rel_entropy(rho, res.optimizer);
    res.converged = true;
    res.objective_trace.push_back(res.value);
    return res;
  }
  const int d = static_cast<int>(rho.rows());
  // sigma = sum_j w_j atoms_j. Each step moves weight from the worst active atom
  // to the best active atom (local step) or to the LMO atom.
  std::vector<Matrix> atoms{maximally_mixed(d)};
  std::vector<double> w{1.0};
  Matrix sigma = atoms[0];
  double f = rel_entropy(rho, sigma);
  res.objective_trace.push_back(f);
  const double neg_entropy = -von_neumann_entropy(rho);
  auto objective = [&](const Matrix& x) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(x);
    const RealVector& lam = es.eigenvalues();
    if (lam(0) <= 0.0) return kInf;
    const Matrix& u = es.eigenvectors();
    double cross = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) cross += (u.col(i).adjoint() * rho * u.col(i)).value().real() * std::log(lam(i));
    return std::max(0.0, neg_entropy - cross);
  };
  auto line_search = [&](const Matrix& dir, double gmax, int k) {
    auto at = [&](double gam) { return objective(sigma + gam * dir); };
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = gmax;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = at(x1), f2 = at(x2);
    for (int it = 0; it < opt.golden_steps; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = at(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = at(x2);
      }
    }
    double gam = f1 <= f2 ? x1 : x2;
    double fg = std::min(f1, f2);
    const double fallback = std::min(2.0 / (k + 2.0), gmax);
    const double ff = at(fallback);
    if (ff < fg) {
      gam = fallback;
      fg = ff;
    }
    const double fend = at(gmax);
    if (fend < fg) {
      gam = gmax;
      fg = fend;
    }
    while (!(fg < f) && gam > 1e-14) {
      gam /= 2.0;
      fg = at(gam);
    }
    return std::pair<double, double>{gam, fg};
  };
  auto accept = [&](std::size_t from, std::size_t to, double gam, double fg) {
    sigma += gam * (atoms[to] - atoms[from]);
    sigma = (sigma + sigma.adjoint()) / 2.0;
    w[from] -= gam;
    w[to] += gam;
    if (w[from] < 1e-14) w[from] = 0.0;
    f = fg;
    res.objective_trace.push_back(f);
  };
  if (opt.warm_start && opt.max_iter > 0) {
    Matrix g0 = ree_gradient(rho, sigma);
    Matrix s0 = ppt_linear_minimizer(g0, set.structure, opt.lmo);
    if ((g0 * (sigma - s0)).trace().real() > opt.tol) {
      Matrix x = ppt_barrier_warm_start(rho, set.structure, opt.tol);
      const double fx = objective(x);
      if (fx < f) {
        atoms = {x};
        sigma = x;
        f = fx;
        res.objective_trace.push_back(f);
      }
    }
  }
  int k = 0;
  double gap = kInf;
  for (; k < opt.max_iter; ++k) {
    Matrix g = ree_gradient(rho, sigma);
    Matrix s = ppt_linear_minimizer(g, set.structure, opt.lmo);
    const double gsig = (g * sigma).trace().real();
    gap = std::max(0.0, gsig - (g * s).trace().real());
    if (gap <= opt.tol) break;
    bool moved = false;
    for (int inner = 0; inner < opt.local_steps; ++inner) {
      if (inner > 0) g = ree_gradient(rho, sigma);
      std::size_t lo_j = 0, hi_j = 0;
      double lo_v = kInf, hi_v = -kInf;
      for (std::size_t j = 0; j < atoms.size(); ++j) {
        if (w[j] <= 0.0) continue;
        const double v = (g * atoms[j]).trace().real();
        if (v < lo_v) {
          lo_v = v;
          lo_j = j;
        }
        if (v > hi_v) {
          hi_v = v;
          hi_j = j;
        }
      }
      const double fw_gap = std::max(0.0, (g * sigma).trace().real() - (g * s).trace().real());
      if (hi_j == lo_j || hi_v - lo_v < fw_gap) break;
      auto [gam, fg] = line_search(atoms[lo_j] - atoms[hi_j], w[hi_j], k);
      if (!(fg < f)) break;
      accept(hi_j, lo_j, gam, fg);
      moved = true;
    }
    g = ree_gradient(rho, sigma);
    std::size_t hi_j = 0;
    double hi_v = -kInf;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (w[j] <= 0.0) continue;
      const double v = (g * atoms[j]).trace().real();
      if (v > hi_v) {
        hi_v = v;
        hi_j = j;
      }
    }
    auto [gam, fg] = line_search(s - atoms[hi_j], w[hi_j], k);
    if (fg < f) {
      atoms.push_back(s);
      w.push_back(0.0);
      accept(hi_j, atoms.size() - 1, gam, fg);
      moved = true;
    } else {
      auto [gfw, ffw] = line_search(s - sigma, 1.0, k);
      if (ffw < f) {
        for (auto& wj : w) wj *= 1.0 - gfw;
        atoms.push_back(s);
        w.push_back(gfw);
        sigma += gfw * (s - sigma);
        sigma = (sigma + sigma.adjoint()) / 2.0;
        f = ffw;
        res.objective_trace.push_back(f);
        moved = true;
      }
    }
    if (!moved) break;
    for (std::size_t j = atoms.size(); j-- > 0;)
      if (w[j] == 0.0) {
        atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(j));
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(j));
      }
  }
  res.value = f;
  res.optimizer = sigma;
  res.gap = gap;
  res.iterations = k;
  res.converged = gap <= opt.tol;
  return res;
}

// ---------------------------------------------------------------------------
// Channels

/// X -> tr_i[X] (x) omega, with omega placed at site i.
inline Matrix replacer_channel(const Matrix& omega, int i, const SiteStructure& s, const Matrix& x) {
  check_operator(x, s, "replacer_channel");
  const int n = s.num_sites();
  if (i < 0 || i >= n) throw std::invalid_argument("replacer_channel: site out of range");
  if (omega.rows() != s.dims[static_cast<std::size_t>(i)]) throw std::invalid_argument("replacer_channel: omega dimension mismatch");
  if (n == 1) return x.trace() * omega;
  Matrix rest = partial_trace(x, s, {i});
  std::vector<int> perm;
  for (int k = 0; k < n; ++k)
    if (k != i) perm.push_back(k);
  perm.push_back(i);
  std::vector<int> dims;
  for (int k = 0; k < n; ++k)
    if (k != i) dims.push_back(s.dims[static_cast<std::size_t>(k)]);
  dims.push_back(s.dims[static_cast<std::size_t>(i)]);
  SiteStructure moved;
  moved.dims = dims;
  return permute_sites(kron(rest, omega), perm, moved);
}

/// Per site: X -> e^{-t} X + (1 - e^{-t}) tr_i[X] (x) omega; composed over `sites` (all by default).
inline Matrix smoothing_channel_Et(double t, const Matrix& omega, const SiteStructure& s, const Matrix& x,
                                   std::vector<int> sites = {}) {
  if (t < 0.0) throw std::invalid_argument("smoothing_channel_Et: t must be nonnegative");
  if (sites.empty())
    for (int k = 0; k < s.num_sites(); ++k) sites.push_back(k);
  const double keep = std::exp(-t);
  Matrix out = x;
  for (int i : sites) out = keep * out + (1.0 - keep) * replacer_channel(omega, i, s, out);
  return out;
}

// ---------------------------------------------------------------------------
// Continuity

/// 3 h(eps) + 6 eps log(d / lambda_min).
inline double continuity_bound(double eps, int d, double lambda_min) {
  if (!(eps >= 0.0 && eps <= 0.5)) throw std::invalid_argument("continuity_bound: eps must lie in [0, 1/2]");
  if (d < 1 || !(lambda_min > 0.0)) throw std::invalid_argument("continuity_bound: bad d or lambda_min");
  return 3.0 * binary_entropy(eps) + 6.0 * eps * std::log(d / lambda_min);
}

/// 3 h(2 sqrt(r/n)) + 12 sqrt(r/n) log(d / lambda_min), valid for 16 r <= n.
inline double almostiid_continuity_bound(int n, int r, int d, double lambda_min) {
  if (n < 1 || r < 0) throw std::invalid_argument("almostiid_continuity_bound: bad n or r");
  if (16 * r > n) throw std::invalid_argument("almostiid_continuity_bound: requires 16 r <= n");
  if (d < 1 || !(lambda_min > 0.0)) throw std::invalid_argument("almostiid_continuity_bound: bad d or lambda_min");
  const double q = std::sqrt(static_cast<double>(r) / n);
  return 3.0 * binary_entropy(2.0 * q) + 12.0 * q * std::log(d / lambda_min);
}

struct ContinuityReport {
  double eps_n = 0.0;
  double ree = 0.0;
  double ree_prime = 0.0;
  double delta = 0.0;
  double bound = 0.0;
  bool skipped = false;
  bool pass = false;
};

inline ContinuityReport continuity_check(const Matrix& rho, const Matrix& rho_prime, const ResourceSet& set,
                                         const FrankWolfeOptions& opt = {}) {
  const SiteStructure& s = set.structure;
  check_operator(rho, s, "continuity_check");
  check_operator(rho_prime, s, "continuity_check");
  const int n = s.num_sites();
  ContinuityReport r;
  r.eps_n = w1_distance(rho, rho_prime, s).value / n;
  if (r.eps_n > 0.5) {
    r.skipped = true;
    return r;
  }
  r.ree = ree_frank_wolfe(rho, set, opt).value / n;
  r.ree_prime = ree_frank_wolfe(rho_prime, set, opt).value / n;
  r.delta = std::abs(r.ree - r.ree_prime);
  r.bound = continuity_bound(r.eps_n, s.dims[0], set.lambda_min);
  r.pass = r.delta <= r.bound + 2.0 * opt.tol;
  return r;
}

struct RERBoundReport {
  double per_copy = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  bool pass = false;
};

/// (1/n) REE <= log(1/lambda_min(omega)).
inline RERBoundReport rer_upper_bound_check(const Matrix& rho_n, const ResourceSet& set, const FrankWolfeOptions& opt = {}) {
  RERBoundReport r;
  auto res = ree_frank_wolfe(rho_n, set, opt);
  r.per_copy = res.value / set.num_sites();
  r.gap = res.gap;
  r.bound = std::log(1.0 / set.lambda_min);
  r.pass = r.per_copy <= r.bound + opt.tol;
  return r;
}

struct RegularizedRow {
  int n = 0;
  double per_copy = 0.0;
  double running_infimum = 0.0;
  double gap = 0.0;
};

/// (n, REE(rho^{(x) n})/n, running infimum) for n = 1..n_max.
inline std::vector<RegularizedRow> regularized_sequence(const Matrix& rho, const std::function<ResourceSet(int)>& set_family,
                                                        int n_max, const FrankWolfeOptions& opt = {}) {
  if (n_max < 1) throw std::invalid_argument("regularized_sequence: n_max must be positive");
  std::vector<RegularizedRow> rows;
  double inf = kInf;
  for (int n = 1; n <= n_max; ++n) {
    ResourceSet set = set_family(n);
    check_capacity(set.structure.total_dim(), "regularized_sequence");
    auto res = ree_frank_wolfe(tensor_power(rho, n), set, opt);
    RegularizedRow row;
    row.n = n;
    row.per_copy = res.value / n;
    row.gap = res.gap;
    inf = std::min(inf, row.per_copy);
    row.running_infimum = inf;
    rows.push_back(row);
  }
  return rows;
}

/// Two copies of a bipartite site structure, reordered so sites are (A1 B1)(A2 B2) with the cut A^2 : B^2.
inline SiteStructure two_copy_bipartite(int da, int db) { return SiteStructure::uniform_bipartite(da, db, 2); }

}  // namespace qstein
