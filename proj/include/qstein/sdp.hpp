#pragma once

// Dense primal-dual interior-point solver for complex Hermitian block SDPs.
//
//   primal:  min  sum_j tr[C_j X_j]  s.t.  sum_j tr[A_kj X_j] = b_k,  X_j >= 0
//   dual:    max  b.y                s.t.  Z_j = C_j - sum_k y_k A_kj >= 0
//
// Infeasible-start path following with the HKM search direction and a
// Mehrotra predictor-corrector. Blocks are complex Hermitian and handled
// natively; constraint matrices are stored sparse.

#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qstein/tensor.hpp"

namespace qstein::sdp {

/// Hermitian matrix in coordinate form; both (r,c) and (c,r) entries are stored.
struct SparseHermitian {
  std::vector<int> rows;
  std::vector<int> cols;
  std::vector<cplx> values;

  std::size_t nnz() const { return values.size(); }

  void push(int r, int c, cplx v) {
    rows.push_back(r);
    cols.push_back(c);
    values.push_back(v);
  }

  /// Adds v at (r,c) and conj(v) at (c,r); a diagonal entry is added once with Re(v).
  void add_hermitian_pair(int r, int c, cplx v) {
    if (r == c) {
      push(r, r, cplx(v.real(), 0.0));
    } else {
      push(r, c, v);
      push(c, r, std::conj(v));
    }
  }

  static SparseHermitian from_dense(const Matrix& m, double drop = 0.0) {
    SparseHermitian s;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        if (std::abs(m(i, j)) > drop) s.push(static_cast<int>(i), static_cast<int>(j), m(i, j));
    return s;
  }

  Matrix dense(int dim) const {
    Matrix m = Matrix::Zero(dim, dim);
    for (std::size_t e = 0; e < nnz(); ++e) m(rows[e], cols[e]) += values[e];
    return m;
  }

  SparseHermitian scaled(double a) const {
    SparseHermitian s = *this;
    for (auto& v : s.values) v *= a;
    return s;
  }

  /// tr[S X] for Hermitian S.
  double inner(const Matrix& x) const {
    double acc = 0.0;
    for (std::size_t e = 0; e < nnz(); ++e) acc += (values[e] * x(cols[e], rows[e])).real();
    return acc;
  }

  void axpy_into(double a, Matrix& out) const {
    for (std::size_t e = 0; e < nnz(); ++e) out(rows[e], cols[e]) += a * values[e];
  }

  double frobenius() const {
    double acc = 0.0;
    for (const auto& v : values) acc += std::norm(v);
    return std::sqrt(acc);
  }
};

struct Term {
  int block;
  SparseHermitian matrix;
};

struct Problem {
  std::vector<int> block_dims;
  std::vector<Matrix> c;
  std::vector<std::vector<Term>> constraints;
  std::vector<double> b;

  int add_block(int dim) {
    block_dims.push_back(dim);
    c.push_back(Matrix::Zero(dim, dim));
    return static_cast<int>(block_dims.size()) - 1;
  }
  int add_constraint(double rhs) {
    constraints.emplace_back();
    b.push_back(rhs);
    return static_cast<int>(b.size()) - 1;
  }
  void add_term(int k, int block, SparseHermitian m) { constraints.at(static_cast<std::size_t>(k)).push_back({block, std::move(m)}); }

  int num_constraints() const { return static_cast<int>(b.size()); }
  int num_blocks() const { return static_cast<int>(block_dims.size()); }

  void validate() const {
    if (c.size() != block_dims.size()) throw std::invalid_argument("sdp::Problem: objective/block count mismatch");
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j].rows() != block_dims[j] || c[j].cols() != block_dims[j])
        throw std::invalid_argument("sdp::Problem: objective block has wrong size");
      if (!is_hermitian(c[j])) throw std::invalid_argument("sdp::Problem: objective block not Hermitian");
    }
    for (const auto& con : constraints)
      for (const auto& t : con) {
        if (t.block < 0 || t.block >= num_blocks()) throw std::invalid_argument("sdp::Problem: bad block index");
        for (std::size_t e = 0; e < t.matrix.nnz(); ++e)
          if (t.matrix.rows[e] < 0 || t.matrix.rows[e] >= block_dims[static_cast<std::size_t>(t.block)] ||
              t.matrix.cols[e] < 0 || t.matrix.cols[e] >= block_dims[static_cast<std::size_t>(t.block)])
            throw std::invalid_argument("sdp::Problem: constraint entry out of range");
        const int dim = block_dims[static_cast<std::size_t>(t.block)];
        if (!is_hermitian(t.matrix.dense(dim))) throw std::invalid_argument("sdp::Problem: constraint matrix not Hermitian");
      }
  }
};

enum class Status { kOptimal, kInfeasible, kMaxIter };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kMaxIter: return "max-iter";
  }
  return "unknown";
}

struct IterationInfo {
  int iteration = 0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double mu = 0.0;
  double step_primal = 0.0;
  double step_dual = 0.0;
};

struct Options {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  /// Called once per iteration when set (the CLI uses it for --sdp-trace).
  std::function<void(const IterationInfo&)> trace;
};

struct Solution {
  std::vector<Matrix> x;
  std::vector<Matrix> z;
  RealVector y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  Status status = Status::kMaxIter;
  int iterations = 0;
  std::vector<IterationInfo> history;

  bool optimal() const { return status == Status::kOptimal; }
};

inline void write_trace_csv_header(std::ostream& os) {
  os << "iteration,primal_objective,dual_objective,gap,primal_residual,dual_residual,mu,step_primal,step_dual\n";
}

inline void write_trace_csv_row(std::ostream& os, const IterationInfo& it) {
  os.precision(12);
  os << it.iteration << ',' << it.primal_objective << ',' << it.dual_objective << ',' << it.gap << ','
     << it.primal_residual << ',' << it.dual_residual << ',' << it.mu << ',' << it.step_primal << ','
     << it.step_dual << '\n';
}

/// Process-wide trace sink, installed by the CLI's --sdp-trace flag.
inline std::function<void(const IterationInfo&)>& global_trace() {
  static std::function<void(const IterationInfo&)> sink;
  return sink;
}

namespace detail {

inline double inner(const Matrix& a, const Matrix& b) {
  // Re tr[A B] for Hermitian A, B.
  return (a.array() * b.transpose().array()).sum().real();
}

inline Matrix herm(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

/// Largest alpha with x + alpha*dx >= 0 (infinity if unbounded).
inline double max_step(const Matrix& x, const Matrix& dx) {
  Eigen::LLT<Matrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  Matrix linv_dx = llt.matrixL().solve(dx);
  Matrix s = llt.matrixL().solve(linv_dx.adjoint()).adjoint();
  double lmin = min_eigenvalue(herm(s));
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

struct BlockEntry {
  int constraint;
  const SparseHermitian* matrix;
};

class Solver {
 public:
  Solver(const Problem& p, const Options& o) : p_(p), opt_(o) {
    nb_ = p.num_blocks();
    m_ = p.num_constraints();
    by_block_.resize(static_cast<std::size_t>(nb_));
    for (int k = 0; k < m_; ++k)
      for (const auto& t : p.constraints[static_cast<std::size_t>(k)]) by_block_[static_cast<std::size_t>(t.block)].push_back({k, &t.matrix});
    b_ = RealVector(m_);
    for (int k = 0; k < m_; ++k) b_(k) = p.b[static_cast<std::size_t>(k)];
    n_total_ = 0;
    for (int d : p.block_dims) n_total_ += d;
  }

  Solution run() {
    Solution sol;
    init_point();
    const double bnorm = b_.norm();
    double cnorm = 0.0;
    for (const auto& c : p_.c) cnorm += c.squaredNorm();
    cnorm = std::sqrt(cnorm);

    Solution best;
    double best_score = std::numeric_limits<double>::infinity();
    int stall = 0;

    for (int it = 0; it <= opt_.max_iter; ++it) {
      RealVector rp = b_ - apply_a(x_);
      std::vector<Matrix> rd(static_cast<std::size_t>(nb_));
      double rd_norm2 = 0.0;
      std::vector<Matrix> aty = apply_at(y_);
      for (int j = 0; j < nb_; ++j) {
        rd[static_cast<std::size_t>(j)] = p_.c[static_cast<std::size_t>(j)] - aty[static_cast<std::size_t>(j)] - z_[static_cast<std::size_t>(j)];
        rd_norm2 += rd[static_cast<std::size_t>(j)].squaredNorm();
      }
      double pobj = 0.0, xz = 0.0;
      for (int j = 0; j < nb_; ++j) {
        pobj += inner(p_.c[static_cast<std::size_t>(j)], x_[static_cast<std::size_t>(j)]);
        xz += inner(x_[static_cast<std::size_t>(j)], z_[static_cast<std::size_t>(j)]);
      }
      const double dobj = b_.dot(y_);
      const double mu = xz / static_cast<double>(n_total_);
      const double pres = rp.norm() / (1.0 + bnorm);
      const double dres = std::sqrt(rd_norm2) / (1.0 + cnorm);
      const double gap = std::abs(pobj - dobj);

      IterationInfo info{it, pobj, dobj, gap, pres, dres, mu, last_ap_, last_ad_};
      sol.history.push_back(info);
      if (opt_.trace) opt_.trace(info);
      if (global_trace()) global_trace()(info);

      if (!std::isfinite(pobj) || !std::isfinite(dobj) || !std::isfinite(mu)) break;

      const bool converged = gap <= opt_.gap_tol * (1.0 + std::abs(pobj)) && pres <= opt_.feas_tol && dres <= opt_.feas_tol &&
                             xz <= opt_.gap_tol * (1.0 + std::abs(pobj)) * 10.0;
      fill(sol, pobj, dobj, pres, dres, it);
      const double score = std::max({gap / (1.0 + std::abs(pobj)), pres, dres});
      if (score < best_score) {
        best_score = score;
        best = sol;
      }
      if (converged) {
        sol.status = Status::kOptimal;
        return sol;
      }
      if (it == opt_.max_iter) break;

      if (!step(rp, rd, mu)) break;
      if (last_ap_ < 1e-10 && last_ad_ < 1e-10) {
        if (++stall > 5) break;
      } else {
        stall = 0;
      }
    }

    // No convergence: keep the best iterate and classify.
    Solution out = best.x.empty() ? sol : best;
    out.history = sol.history;
    const bool feasible_enough = out.primal_residual <= 1e3 * opt_.feas_tol && out.dual_residual <= 1e3 * opt_.feas_tol;
    out.status = feasible_enough ? Status::kMaxIter : Status::kInfeasible;
    return out;
  }

 private:
  const Problem& p_;
  Options opt_;
  int nb_ = 0;
  int m_ = 0;
  std::int64_t n_total_ = 0;
  std::vector<std::vector<BlockEntry>> by_block_;
  RealVector b_;
  std::vector<Matrix> x_, z_;
  RealVector y_;
  double last_ap_ = 0.0, last_ad_ = 0.0;

  void fill(Solution& s, double pobj, double dobj, double pres, double dres, int it) const {
    s.x = x_;
    s.z = z_;
    s.y = y_;
    s.primal_objective = pobj;
    s.dual_objective = dobj;
    s.primal_residual = pres;
    s.dual_residual = dres;
    s.iterations = it;
  }

  void init_point() {
    x_.clear();
    z_.clear();
    for (int j = 0; j < nb_; ++j) {
      const double n = p_.block_dims[static_cast<std::size_t>(j)];
      double xi = std::max(10.0, std::sqrt(n));
      double eta = std::max({10.0, std::sqrt(n), p_.c[static_cast<std::size_t>(j)].norm()});
      for (const auto& e : by_block_[static_cast<std::size_t>(j)]) {
        const double an = e.matrix->frobenius();
        xi = std::max(xi, n * (1.0 + std::abs(b_(e.constraint))) / (1.0 + an));
        eta = std::max(eta, an);
      }
      x_.push_back(xi * Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
      z_.push_back(eta * Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    }
    y_ = RealVector::Zero(m_);
  }

  RealVector apply_a(const std::vector<Matrix>& x) const {
    RealVector out = RealVector::Zero(m_);
    for (int j = 0; j < nb_; ++j)
      for (const auto& e : by_block_[static_cast<std::size_t>(j)]) out(e.constraint) += e.matrix->inner(x[static_cast<std::size_t>(j)]);
    return out;
  }

  std::vector<Matrix> apply_at(const RealVector& y) const {
    std::vector<Matrix> out;
    for (int j = 0; j < nb_; ++j) {
      const int d = p_.block_dims[static_cast<std::size_t>(j)];
      Matrix m = Matrix::Zero(d, d);
      for (const auto& e : by_block_[static_cast<std::size_t>(j)]) e.matrix->axpy_into(y(e.constraint), m);
      out.push_back(std::move(m));
    }
    return out;
  }

  // Schur complement M_kl = Re tr[A_k X A_l Z^{-1}].
  RealMatrix schur(const std::vector<Matrix>& zinv) const {
    RealMatrix mat = RealMatrix::Zero(m_, m_);
    for (int j = 0; j < nb_; ++j) {
      const auto& list = by_block_[static_cast<std::size_t>(j)];
      const auto& x = x_[static_cast<std::size_t>(j)];
      const auto& zi = zinv[static_cast<std::size_t>(j)];
      const Eigen::Index d = x.rows();
      Matrix g(d, d);
      for (std::size_t a = 0; a < list.size(); ++a) {
        const auto& ak = *list[a].matrix;
        if (static_cast<Eigen::Index>(ak.nnz()) > d) {
          g.noalias() = zi * (ak.dense(static_cast<int>(d)) * x);
        } else {
          g.setZero();
          for (std::size_t e = 0; e < ak.nnz(); ++e) g.noalias() += ak.values[e] * zi.col(ak.rows[e]) * x.row(ak.cols[e]);
        }
        const int k = list[a].constraint;
        for (std::size_t b2 = a; b2 < list.size(); ++b2) {
          const auto& al = *list[b2].matrix;
          double acc = 0.0;
          for (std::size_t e = 0; e < al.nnz(); ++e) acc += (al.values[e] * g(al.cols[e], al.rows[e])).real();
          const int l = list[b2].constraint;
          mat(k, l) += acc;
          if (b2 != a) mat(l, k) += acc;
        }
      }
    }
    return (mat + mat.transpose()) / 2.0;
  }

  struct Direction {
    std::vector<Matrix> dx, dz;
    RealVector dy;
  };

  bool solve_direction(const Eigen::LDLT<RealMatrix>& fac, const RealVector& rp, const std::vector<Matrix>& rd,
                       const std::vector<Matrix>& target, const std::vector<Matrix>& zinv, Direction& dir) const {
    std::vector<Matrix> tmp(static_cast<std::size_t>(nb_));
    for (int j = 0; j < nb_; ++j) {
      const auto u = static_cast<std::size_t>(j);
      tmp[u] = target[u] - herm(x_[u] * rd[u] * zinv[u]);
    }
    RealVector rhs = rp - apply_a(tmp);
    dir.dy = fac.solve(rhs);
    if (!dir.dy.allFinite()) return false;
    std::vector<Matrix> aty = apply_at(dir.dy);
    dir.dz.resize(static_cast<std::size_t>(nb_));
    dir.dx.resize(static_cast<std::size_t>(nb_));
    for (int j = 0; j < nb_; ++j) {
      const auto u = static_cast<std::size_t>(j);
      dir.dz[u] = rd[u] - aty[u];
      dir.dx[u] = target[u] - herm(x_[u] * dir.dz[u] * zinv[u]);
    }
    return true;
  }

  std::pair<double, double> step_lengths(const Direction& dir) const {
    double ap = std::numeric_limits<double>::infinity(), ad = ap;
    for (int j = 0; j < nb_; ++j) {
      const auto u = static_cast<std::size_t>(j);
      ap = std::min(ap, max_step(x_[u], dir.dx[u]));
      ad = std::min(ad, max_step(z_[u], dir.dz[u]));
    }
    return {ap, ad};
  }

  bool step(const RealVector& rp, const std::vector<Matrix>& rd, double mu) {
    std::vector<Matrix> zinv(static_cast<std::size_t>(nb_));
    for (int j = 0; j < nb_; ++j) {
      const auto u = static_cast<std::size_t>(j);
      Eigen::LLT<Matrix> llt(z_[u]);
      if (llt.info() != Eigen::Success) return false;
      zinv[u] = llt.solve(Matrix::Identity(z_[u].rows(), z_[u].cols()));
      zinv[u] = herm(zinv[u]);
    }
    RealMatrix mat = schur(zinv);
    if (!mat.allFinite()) return false;
    double ridge = 0.0;
    for (Eigen::Index k = 0; k < mat.rows(); ++k) ridge = std::max(ridge, std::abs(mat(k, k)));
    ridge = std::max(ridge, 1e-300) * 1e-15;
    mat.diagonal().array() += ridge;
    Eigen::LDLT<RealMatrix> fac(mat);
    if (fac.info() != Eigen::Success) return false;

    // Predictor.
    std::vector<Matrix> target(static_cast<std::size_t>(nb_));
    for (int j = 0; j < nb_; ++j) target[static_cast<std::size_t>(j)] = -x_[static_cast<std::size_t>(j)];
    Direction pred;
    if (!solve_direction(fac, rp, rd, target, zinv, pred)) return false;
    auto [ap, ad] = step_lengths(pred);
    ap = std::min(1.0, 0.98 * ap);
    ad = std::min(1.0, 0.98 * ad);
    double xz_new = 0.0;
    for (int j = 0; j < nb_; ++j) {
      const auto u = static_cast<std::size_t>(j);
      xz_new += inner(x_[u] + ap * pred.dx[u], z_[u] + ad * pred.dz[u]);
    }
    const double xz = mu * static_cast<double>(n_total_);
    double sigma = xz > 0.0 ? std::pow(std::clamp(xz_new / xz, 0.0, 1.0), 3) : 0.0;
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector.
    for (int j = 0; j < nb_; ++j) {
      const auto u = static_cast<std::size_t>(j);
      target[u] = sigma * mu * zinv[u] - x_[u] - herm(pred.dx[u] * pred.dz[u] * zinv[u]);
    }
    Direction corr;
    if (!solve_direction(fac, rp, rd, target, zinv, corr)) return false;
    auto [cp, cd] = step_lengths(corr);
    const double gamma = 0.95;
    cp = std::min(1.0, gamma * cp);
    cd = std::min(1.0, gamma * cd);
    if (!std::isfinite(cp) || !std::isfinite(cd)) return false;
    for (int j = 0; j < nb_; ++j) {
      const auto u = static_cast<std::size_t>(j);
      x_[u] = herm(x_[u] + cp * corr.dx[u]);
      z_[u] = herm(z_[u] + cd * corr.dz[u]);
    }
    y_ += cd * corr.dy;
    last_ap_ = cp;
    last_ad_ = cd;
    return true;
  }
};

}  // namespace detail

inline Solution solve(const Problem& p, const Options& opt = {}) {
  p.validate();
  if (p.num_constraints() == 0 && p.num_blocks() == 0) {
    Solution s;
    s.status = Status::kOptimal;
    return s;
  }
  detail::Solver solver(p, opt);
  return solver.run();
}

/// Builder for the dual (LMI) form: maximize c.y subject to
/// F_j(y) = F0_j + sum_k y_k F_kj >= 0.
class LmiBuilder {
 public:
  explicit LmiBuilder(int num_vars) : objective_(RealVector::Zero(num_vars)) {
    for (int k = 0; k < num_vars; ++k) prob_.add_constraint(0.0);
  }

  int num_vars() const { return static_cast<int>(objective_.size()); }

  int add_block(const Matrix& constant) {
    int j = prob_.add_block(static_cast<int>(constant.rows()));
    prob_.c[static_cast<std::size_t>(j)] = (constant + constant.adjoint()) / 2.0;
    return j;
  }

  /// Adds y_var * coeff to block `block`.
  void add_coefficient(int block, int var, const SparseHermitian& coeff) {
    prob_.add_term(var, block, coeff.scaled(-1.0));
  }

  void set_objective(int var, double c) { objective_(var) = c; }

  Problem build() const {
    Problem p = prob_;
    for (int k = 0; k < num_vars(); ++k) p.b[static_cast<std::size_t>(k)] = objective_(k);
    return p;
  }

 private:
  Problem prob_;
  RealVector objective_;
};

/// Real-linear coordinates on d x d Hermitian matrices: d diagonal units, then
/// (E_ij + E_ji) and i(E_ij - E_ji) for i < j.
inline std::vector<SparseHermitian> hermitian_basis(int d) {
  std::vector<SparseHermitian> basis;
  for (int i = 0; i < d; ++i) {
    SparseHermitian s;
    s.push(i, i, 1.0);
    basis.push_back(std::move(s));
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      SparseHermitian re, im;
      re.add_hermitian_pair(i, j, 1.0);
      im.add_hermitian_pair(i, j, cplx(0.0, 1.0));
      basis.push_back(std::move(re));
      basis.push_back(std::move(im));
    }
  return basis;
}

/// Coordinates of a Hermitian matrix in hermitian_basis(d).
inline RealVector hermitian_coordinates(const Matrix& h) {
  const int d = static_cast<int>(h.rows());
  RealVector c(d * d);
  int k = 0;
  for (int i = 0; i < d; ++i) c(k++) = h(i, i).real();
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      c(k++) = h(i, j).real();
      c(k++) = h(i, j).imag();
    }
  return c;
}

inline Matrix hermitian_from_coordinates(const RealVector& c, int d, int offset = 0) {
  auto basis = hermitian_basis(d);
  Matrix m = Matrix::Zero(d, d);
  for (int k = 0; k < d * d; ++k) basis[static_cast<std::size_t>(k)].axpy_into(c(offset + k), m);
  return m;
}

/// D_max(rho||sigma) = log min { t : t sigma - rho >= 0 }, solved as an LMI.
struct DmaxSdpResult {
  double value = 0.0;
  Solution solution;
};

inline DmaxSdpResult dmax_via_sdp(const Matrix& rho, const Matrix& sigma, const Options& opt = {}) {
  check_same_dims(rho, sigma, "dmax_via_sdp");
  LmiBuilder lmi(1);
  const int blk = lmi.add_block(-rho);
  lmi.add_coefficient(blk, 0, SparseHermitian::from_dense(sigma));
  lmi.set_objective(0, -1.0);
  DmaxSdpResult r;
  r.solution = solve(lmi.build(), opt);
  r.value = std::log(-r.solution.dual_objective);
  return r;
}

/// Seeded problem with strictly feasible primal and dual points by construction:
/// X0 > 0, Z0 > 0, b_k = tr[A_k X0], C = Z0 + sum_k y0_k A_k.
inline Problem random_feasible_problem(const std::vector<int>& block_dims, int num_constraints, std::uint64_t seed) {
  if (block_dims.empty() || num_constraints < 0) throw std::invalid_argument("random_feasible_problem: bad shape");
  std::mt19937_64 rng(seed);
  auto next = [&rng]() { return static_cast<std::uint64_t>(rng()); };
  std::normal_distribution<double> normal(0.0, 1.0);
  Problem p;
  std::vector<Matrix> x0;
  for (int d : block_dims) {
    const int j = p.add_block(d);
    x0.push_back(random_density(d, d, next()) * d + 0.1 * Matrix::Identity(d, d));
    p.c[static_cast<std::size_t>(j)] = random_density(d, d, next()) * d + 0.1 * Matrix::Identity(d, d);
  }
  for (int k = 0; k < num_constraints; ++k) {
    const double y0 = normal(rng);
    double rhs = 0.0;
    const int con = p.add_constraint(0.0);
    for (int j = 0; j < p.num_blocks(); ++j) {
      const int d = block_dims[static_cast<std::size_t>(j)];
      Matrix a = random_hermitian(d, next());
      rhs += detail::inner(a, x0[static_cast<std::size_t>(j)]);
      p.c[static_cast<std::size_t>(j)] += y0 * a;
      p.add_term(con, j, SparseHermitian::from_dense(a));
    }
    p.b[static_cast<std::size_t>(con)] = rhs;
  }
  return p;
}

}  // namespace qstein::sdp
