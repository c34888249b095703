#pragma once

// Experiment harness: Stein-exponent tables, robust variants, converse checks,
// proof-parameter schedules, superadditivity instances and CSV output.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "qstein/almost_iid.hpp"
#include "qstein/divergences.hpp"
#include "qstein/hypothesis.hpp"
#include "qstein/resource.hpp"
#include "qstein/symmetry.hpp"
#include "qstein/tensor.hpp"

namespace qstein {

// ---------------------------------------------------------------------------
// CSV and determinism plumbing

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

/// Decimal with 12 significant digits; inf and nan spelled out.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct CsvCell {
  std::string text;
  CsvCell(double x) : text(format_number(x)) {}                     // NOLINT
  CsvCell(int x) : text(std::to_string(x)) {}                        // NOLINT
  CsvCell(std::int64_t x) : text(std::to_string(x)) {}               // NOLINT
  CsvCell(std::uint64_t x) : text(std::to_string(x)) {}              // NOLINT
  CsvCell(bool x) : text(x ? "true" : "false") {}                    // NOLINT
  CsvCell(const char* s) : text(s) {}                                // NOLINT
  CsvCell(std::string s) : text(std::move(s)) {}                     // NOLINT
};

/// Rows carry the configuration hash and seed as their first two columns.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string config_hash;
  std::uint64_t seed = 0;

  CsvTable(std::vector<std::string> columns, const std::string& config, std::uint64_t seed_value)
      : header(std::move(columns)), config_hash(hex64(fnv1a(config))), seed(seed_value) {}

  void add(const std::vector<CsvCell>& cells) {
    if (cells.size() != header.size()) throw std::invalid_argument("CsvTable::add: column count mismatch");
    std::vector<std::string> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(c.text);
    rows.push_back(std::move(row));
  }

  std::string str() const {
    std::ostringstream os;
    os << "config_hash,seed";
    for (const auto& h : header) os << ',' << csv_field(h);
    os << "\r\n";
    for (const auto& r : rows) {
      os << config_hash << ',' << seed;
      for (const auto& f : r) os << ',' << csv_field(f);
      os << "\r\n";
    }
    return os.str();
  }
};

inline void emit_csv(const CsvTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
  out << table.str();
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

/// fn(0..count-1) evaluated with at most `workers` concurrent tasks; results in index order.
template <class Fn>
auto parallel_map(int count, int workers, Fn fn) -> std::vector<decltype(fn(0))> {
  using R = decltype(fn(0));
  std::vector<R> out;
  out.reserve(static_cast<std::size_t>(count));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) out.push_back(fn(i));
    return out;
  }
  for (int start = 0; start < count; start += workers) {
    std::vector<std::future<R>> batch;
    for (int i = start; i < std::min(count, start + workers); ++i) batch.push_back(std::async(std::launch::async, fn, i));
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

/// Seed for sample `index` of stream `stream` under a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t x = base ^ (0x9e3779b97f4a7c15ull * (stream + 1)) ^ (0xbf58476d1ce4e5b9ull * (index + 1));
  x ^= x >> 31;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 29;
  return x;
}

inline std::string matrix_signature(const Matrix& m) {
  std::ostringstream os;
  os << std::setprecision(17) << m.rows();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << ';' << m(i, j).real() << ',' << m(i, j).imag();
  return os.str();
}

inline std::string grid_signature(const std::vector<int>& grid) {
  std::ostringstream os;
  for (int n : grid) os << n << ' ';
  return os.str();
}

// ---------------------------------------------------------------------------
// Commuting inputs

/// Common eigenbasis distributions (p, q) when [rho, sigma] = 0.
inline std::optional<std::pair<std::vector<double>, std::vector<double>>> commuting_spectra(const Matrix& rho,
                                                                                             const Matrix& sigma,
                                                                                             double tol = 1e-12) {
  check_same_dims(rho, sigma, "commuting_spectra");
  if ((rho * sigma - sigma * rho).cwiseAbs().maxCoeff() > tol) return std::nullopt;
  auto ed = eigh(rho + 0.6180339887498949 * sigma);
  Matrix u = ed.vectors;
  // Refine inside degenerate clusters of the combination by diagonalizing sigma there.
  Matrix sr = u.adjoint() * sigma * u;
  Matrix rr = u.adjoint() * rho * u;
  std::vector<double> p, q;
  const auto d = rho.rows();
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index end = start + 1;
    while (end < d && std::abs(ed.values(end) - ed.values(start)) <= 1e-10) ++end;
    const auto len = end - start;
    Matrix sb = sr.block(start, start, len, len);
    auto es = eigh(sb);
    Matrix rb = es.vectors.adjoint() * rr.block(start, start, len, len) * es.vectors;
    for (Eigen::Index i = 0; i < len; ++i) {
      p.push_back(std::max(0.0, rb(i, i).real()));
      q.push_back(std::max(0.0, es.values(i)));
    }
    start = end;
  }
  auto normalize = [](std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    for (double& x : v) x /= s;
  };
  normalize(p);
  normalize(q);
  return std::make_pair(p, q);
}

// ---------------------------------------------------------------------------
// Stein tables

inline constexpr std::int64_t kSteinGenericCap = std::int64_t{1} << 12;

struct SteinOptions {
  double nu = 0.1;
  int sandwich_max_n = 8;
  bool force_generic = false;
  int workers = 1;
};

struct SteinRow {
  int n = 0;
  std::string path;
  ExtendedReal dh_per_copy = 0.0;
  ExtendedReal rel_entropy = 0.0;
  double gap = 0.0;
  bool sandwich_checked = false;
  double sandwich_slack_left = 0.0;
  double sandwich_slack_right = 0.0;
  bool pass = true;
};

/// D_H^eps(rho^{(x) n} || sigma^{(x) n}) / n against D(rho||sigma). Commuting inputs use type
/// classes; qubits use spin blocks; other inputs are dense up to total dimension 2^12.
inline std::vector<SteinRow> stein_table(const Matrix& rho, const Matrix& sigma, double eps, const std::vector<int>& n_grid,
                                         const SteinOptions& opt = {}) {
  check_same_dims(rho, sigma, "stein_table");
  require_density(rho, "stein_table");
  require_density(sigma, "stein_table");
  if (n_grid.empty()) throw std::invalid_argument("stein_table: empty n grid");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("stein_table: eps must lie in (0,1)");
  const ExtendedReal d_rel = rel_entropy(rho, sigma);
  const auto spectra = opt.force_generic ? std::nullopt : commuting_spectra(rho, sigma);
  const int d = static_cast<int>(rho.rows());
  for (int n : n_grid) {
    if (n < 1) throw std::invalid_argument("stein_table: n must be positive");
    if (!spectra) {
      std::int64_t total = 1;
      for (int i = 0; i < n; ++i) {
        total *= d;
        if (total > kSteinGenericCap) throw CapacityError("stein_table: total dimension exceeds 2^12 on the quantum path");
      }
    }
  }
  auto row_for = [&](int idx) {
    const int n = n_grid[static_cast<std::size_t>(idx)];
    SteinRow row;
    row.n = n;
    row.rel_entropy = d_rel;
    if (spectra) {
      row.path = "classical";
      row.dh_per_copy = dh_classical_iid(spectra->first, spectra->second, n, eps).dh / n;
    } else {
      BlockDiag rb, sb;
      if (d == 2) {
        row.path = "spin";
        auto sectors = qubit_spin_sectors(n);
        rb = to_spin_blocks(tensor_power(rho, n), sectors);
        sb = to_spin_blocks(tensor_power(sigma, n), sectors);
      } else {
        row.path = "dense";
        rb = BlockDiag::single(tensor_power(rho, n));
        sb = BlockDiag::single(tensor_power(sigma, n));
      }
      row.dh_per_copy = dh_blocks(rb, sb, eps) / n;
      if (n <= opt.sandwich_max_n && opt.nu < 1.0 - eps) {
        auto sw = buscemi_sandwich_check_blocks(rb, sb, eps, opt.nu);
        row.sandwich_checked = true;
        row.sandwich_slack_left = sw.slack_left;
        row.sandwich_slack_right = sw.slack_right;
        row.pass = sw.pass;
      }
    }
    row.gap = std::abs(row.dh_per_copy - row.rel_entropy);
    return row;
  };
  return parallel_map(static_cast<int>(n_grid.size()), opt.workers, row_for);
}

inline CsvTable stein_csv(const std::vector<SteinRow>& rows, const std::string& config, std::uint64_t seed) {
  CsvTable t({"n", "path", "dh_per_copy", "rel_entropy", "gap", "sandwich_checked", "sandwich_slack_left",
              "sandwich_slack_right", "pass"},
             config, seed);
  for (const auto& r : rows)
    t.add({r.n, r.path, r.dh_per_copy, r.rel_entropy, r.gap, r.sandwich_checked, r.sandwich_slack_left,
           r.sandwich_slack_right, r.pass});
  return t;
}

// ---------------------------------------------------------------------------
// Robust tables

struct RobustOptions {
  int r1 = 0;
  int r2 = 0;
  int samples = 20;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct RobustRow {
  int n = 0;
  int r1 = 0;
  int r2 = 0;
  int samples = 0;
  ExtendedReal dh_min_per_copy = 0.0;  // min over sampled pairs and the iid pair
  ExtendedReal iid_dh_per_copy = 0.0;
  ExtendedReal rel_entropy = 0.0;
  bool upper_pass = true;              // dh_min <= iid + 1e-9
  double chain_worst_slack = kInf;     // min over samples of dh/n - lower chain
  bool chain_pass = true;
  double pinched_worst_slack = kInf;   // min over samples of (r2/n) log(1/lambda_min) - dmax(pinched)/n
  bool proximity_checked = false;      // 16 r1 <= n
  double proximity_gap = 0.0;          // |D(rho_n||sigma^n)/n - D(rho||sigma)|
  double proximity_bound = 0.0;
  bool proximity_pass = true;
  bool pass = true;
};

/// Almost-iid pairs along qubit states rho and sigma, permutation invariant, reduced to spin blocks.
inline std::vector<RobustRow> robust_stein_table(const Matrix& rho, const Matrix& sigma, double eps,
                                                 const std::vector<int>& n_grid, const RobustOptions& opt = {}) {
  check_same_dims(rho, sigma, "robust_stein_table");
  require_density(rho, "robust_stein_table");
  require_density(sigma, "robust_stein_table");
  if (rho.rows() != 2) throw std::invalid_argument("robust_stein_table: qubit states required");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("robust_stein_table: eps must lie in (0,1)");
  const double lmin = min_eigenvalue(sigma);
  if (lmin <= tol::kSupport) throw std::invalid_argument("robust_stein_table: sigma must be full rank");
  if (n_grid.empty()) throw std::invalid_argument("robust_stein_table: empty n grid");
  for (int n : n_grid) {
    if (n < 1 || n > 5) throw CapacityError("robust_stein_table: n must lie in 1..5 for qubit AE sites");
    if (opt.r1 > n || opt.r2 > n) throw std::invalid_argument("robust_stein_table: r exceeds n");
  }
  const ExtendedReal d_rel = rel_entropy(rho, sigma);
  const double smooth = std::sqrt(1.0 - eps);
  std::vector<RobustRow> rows;
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const int n = n_grid[gi];
    auto sectors = qubit_spin_sectors(n);
    const Matrix sigma_n = tensor_power(sigma, n);
    const BlockDiag sigma_iid = to_spin_blocks(sigma_n, sectors);
    RobustRow row;
    row.n = n;
    row.r1 = opt.r1;
    row.r2 = opt.r2;
    row.samples = opt.samples;
    row.rel_entropy = d_rel;
    row.iid_dh_per_copy = dh_blocks(to_spin_blocks(tensor_power(rho, n), sectors), sigma_iid, eps) / n;
    struct Sample {
      ExtendedReal dh;
      double chain_slack;
      double pinched_slack;
      double proximity_gap;
    };
    const bool prox = 16 * opt.r1 <= n;
    auto sample = [&](int s) {
      auto a = random_almost_iid_along(rho, n, opt.r1, derive_seed(opt.seed, 2 * gi, static_cast<std::uint64_t>(s)));
      auto b = random_almost_iid_along(sigma, n, opt.r2, derive_seed(opt.seed, 2 * gi + 1, static_cast<std::uint64_t>(s)));
      BlockDiag rb = to_spin_blocks(a.rho_a, sectors);
      BlockDiag sb = to_spin_blocks(b.rho_a, sectors);
      Sample out{};
      out.dh = dh_blocks(rb, sb, eps) / n;
      auto pinched = dmax_pinched_vs_iid(b.ensemble, sigma);
      out.pinched_slack = pinched.bound - pinched.per_copy;
      const ExtendedReal sd = smooth_dmax_blocks(rb, sigma_iid, smooth).value;
      const double lower = sd / n - static_cast<double>(opt.r2) / n * std::log(1.0 / lmin) -
                           std::log(static_cast<double>(b.ensemble.card())) / n - std::log(1.0 / eps) / n;
      out.chain_slack = detail::extended_slack(out.dh, lower);
      out.proximity_gap = prox ? std::abs(rel_entropy(a.rho_a, sigma_n) / n - d_rel) : 0.0;
      return out;
    };
    auto results = parallel_map(opt.samples, opt.workers, sample);
    row.dh_min_per_copy = row.iid_dh_per_copy;
    double worst_prox = 0.0;
    for (const auto& s : results) {
      row.dh_min_per_copy = std::min(row.dh_min_per_copy, s.dh);
      row.chain_worst_slack = std::min(row.chain_worst_slack, s.chain_slack);
      row.pinched_worst_slack = std::min(row.pinched_worst_slack, s.pinched_slack);
      worst_prox = std::max(worst_prox, s.proximity_gap);
    }
    row.upper_pass = !(row.dh_min_per_copy > row.iid_dh_per_copy + 1e-9);
    row.chain_pass = row.chain_worst_slack >= -1e-6 && row.pinched_worst_slack >= -1e-7;
    if (prox) {
      row.proximity_checked = true;
      row.proximity_gap = worst_prox;
      row.proximity_bound = almostiid_continuity_bound(n, opt.r1, 2, lmin);
      row.proximity_pass = worst_prox <= row.proximity_bound + 1e-6;
    }
    row.pass = row.upper_pass && row.chain_pass && row.proximity_pass;
    rows.push_back(row);
  }
  return rows;
}

inline CsvTable robust_csv(const std::vector<RobustRow>& rows, const std::string& config, std::uint64_t seed) {
  CsvTable t({"n", "r1", "r2", "samples", "dh_min_per_copy", "iid_dh_per_copy", "rel_entropy", "upper_pass",
              "chain_worst_slack", "pinched_worst_slack", "chain_pass", "proximity_checked", "proximity_gap",
              "proximity_bound", "proximity_pass", "pass"},
             config, seed);
  for (const auto& r : rows)
    t.add({r.n, r.r1, r.r2, r.samples, r.dh_min_per_copy, r.iid_dh_per_copy, r.rel_entropy, r.upper_pass,
           r.chain_worst_slack, r.pinched_worst_slack, r.chain_pass, r.proximity_checked, r.proximity_gap,
           r.proximity_bound, r.proximity_pass, r.pass});
  return t;
}

// ---------------------------------------------------------------------------
// Converse check

struct ConverseRow {
  double alpha = 0.0;
  ExtendedReal lhs = 0.0;  // (1/n) D_H^eps(rho^n || sigma_n)
  ExtendedReal rhs = 0.0;  // (1/n) [D_alpha(rho^n || sigma_n) + alpha/(alpha-1) log(1/(1-eps))]
  double slack = 0.0;
  bool pass = false;
};

struct ConverseReport {
  std::vector<ConverseRow> rows;
  double ree_per_copy = 0.0;
  double fw_gap = 0.0;
  double tightest_alpha = 0.0;
  double tightest_rhs = kInf;
  bool pass = true;
};

/// Strong-converse bound at the set's REE optimizer for rho^{(x) n}.
inline ConverseReport gsl_converse_check(const Matrix& rho_site, const ResourceSet& set, double eps,
                                         const std::vector<double>& alpha_grid, const FrankWolfeOptions& fw = {}) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("gsl_converse_check: eps must lie in (0,1)");
  if (alpha_grid.empty()) throw std::invalid_argument("gsl_converse_check: empty alpha grid");
  const int n = set.num_sites();
  check_capacity(set.structure.total_dim(), "gsl_converse_check");
  const Matrix rho_n = tensor_power(rho_site, n);
  auto ree = ree_frank_wolfe(rho_n, set, fw);
  ConverseReport rep;
  rep.ree_per_copy = ree.value / n;
  rep.fw_gap = ree.gap;
  const ExtendedReal lhs = dh(rho_n, ree.optimizer, eps) / n;
  for (double a : alpha_grid) {
    if (!(a > 1.0)) throw std::invalid_argument("gsl_converse_check: alpha must exceed 1");
    ConverseRow row;
    row.alpha = a;
    row.lhs = lhs;
    row.rhs = (renyi_sandwiched(rho_n, ree.optimizer, a) + a / (a - 1.0) * std::log(1.0 / (1.0 - eps))) / n;
    row.slack = detail::extended_slack(row.rhs, row.lhs);
    row.pass = row.slack >= -1e-9;
    rep.pass = rep.pass && row.pass;
    if (row.rhs < rep.tightest_rhs) {
      rep.tightest_rhs = row.rhs;
      rep.tightest_alpha = a;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

inline CsvTable converse_csv(const ConverseReport& rep, int n, const std::string& config, std::uint64_t seed) {
  CsvTable t({"n", "alpha", "lhs", "rhs", "slack", "tightest", "ree_per_copy", "fw_gap", "pass"}, config, seed);
  for (const auto& r : rep.rows)
    t.add({n, r.alpha, r.lhs, r.rhs, r.slack, r.alpha == rep.tightest_alpha, rep.ree_per_copy, rep.fw_gap, r.pass});
  return t;
}

// ---------------------------------------------------------------------------
// Proof-parameter schedules

enum class RRule { kConstant, kSqrt, kTwoThirds };

inline RRule parse_r_rule(const std::string& s) {
  if (s == "const" || s == "constant") return RRule::kConstant;
  if (s == "sqrt") return RRule::kSqrt;
  if (s == "n23" || s == "two-thirds") return RRule::kTwoThirds;
  throw std::invalid_argument("unknown r rule: " + s);
}

inline int apply_r_rule(RRule rule, std::int64_t n, int constant = 1) {
  switch (rule) {
    case RRule::kConstant:
      return constant;
    case RRule::kSqrt:
      return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)) - 1e-12));
    case RRule::kTwoThirds:
      return static_cast<int>(std::ceil(std::cbrt(static_cast<double>(n) * static_cast<double>(n)) - 1e-9));
  }
  return constant;
}

struct ScheduleRow {
  std::int64_t n = 0;
  int r = 0;
  double nu = 0.0;
  double gamma = 0.0;  // nan when r = 0
  double m = 0.0;
  double r_prime = 0.0;  // nan when r = 0
  double exponent = 0.0;  // -m r'/(n-r) + nu
  double xi = 0.0;
  bool m_admissible = false;
  bool r_prime_admissible = false;
};

inline ScheduleRow schedule_row(std::int64_t n, int r, double eps, int d) {
  if (n < 1 || r < 0 || r > n) throw std::invalid_argument("schedule_eval: need 0 <= r <= n");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("schedule_eval: eps must lie in (0,1)");
  const double nd = static_cast<double>(n);
  ScheduleRow row;
  row.n = n;
  row.r = r;
  row.nu = std::log(1.0 / eps) + 2.0 * nd * binary_entropy(r / nd) + 4.0 * r * std::log(static_cast<double>(d));
  row.m = std::sqrt(r * nd);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (r == 0) {
    row.gamma = nan;
    row.r_prime = nan;
    row.exponent = row.nu;
    row.m_admissible = true;
    row.r_prime_admissible = false;
  } else {
    const double ratio = nd / r;
    row.gamma = ratio > 1.0 ? std::sqrt(std::sqrt(ratio) / std::log(ratio)) : nan;
    row.r_prime = row.m * std::log(ratio) * row.gamma;
    row.exponent = n > r ? -row.m * row.r_prime / (nd - r) + row.nu : nan;
    row.m_admissible = row.m <= nd - r;
    row.r_prime_admissible = row.r_prime <= nd - r - row.m;
  }
  row.xi = std::sqrt(2.0) * std::exp(row.exponent / 2.0);
  return row;
}

inline std::vector<ScheduleRow> schedule_eval(const std::vector<std::int64_t>& n_grid, RRule rule, double eps, int d,
                                              int constant_r = 1) {
  if (n_grid.empty()) throw std::invalid_argument("schedule_eval: empty n grid");
  std::vector<ScheduleRow> rows;
  for (auto n : n_grid) rows.push_back(schedule_row(n, std::min<std::int64_t>(apply_r_rule(rule, n, constant_r), n), eps, d));
  return rows;
}

/// ceil-rounded log-spaced grid from lo to hi with `points` entries.
inline std::vector<std::int64_t> log_grid(double lo, double hi, int points) {
  std::vector<std::int64_t> g;
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    g.push_back(static_cast<std::int64_t>(std::llround(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))))));
  }
  return g;
}

struct ScheduleTrend {
  bool xi_decreasing = true;
  double exponent_drop = 0.0;  // first - last
  bool m_over_n_decreasing = true;
  bool r_prime_over_n_decreasing = true;
  bool pass = false;
};

inline ScheduleTrend schedule_trend(const std::vector<ScheduleRow>& rows) {
  ScheduleTrend t;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    t.xi_decreasing = t.xi_decreasing && b.xi < a.xi;
    t.m_over_n_decreasing = t.m_over_n_decreasing && b.m / b.n < a.m / a.n;
    t.r_prime_over_n_decreasing = t.r_prime_over_n_decreasing && b.r_prime / b.n < a.r_prime / a.n;
  }
  if (!rows.empty()) t.exponent_drop = rows.front().exponent - rows.back().exponent;
  t.pass = t.xi_decreasing && t.exponent_drop >= 100.0 && t.m_over_n_decreasing && t.r_prime_over_n_decreasing;
  return t;
}

inline CsvTable schedule_csv(const std::vector<ScheduleRow>& rows, const std::string& config, std::uint64_t seed) {
  CsvTable t({"n", "r", "nu", "gamma", "m", "r_prime", "exponent", "xi", "m_admissible", "r_prime_admissible"}, config,
             seed);
  for (const auto& r : rows)
    t.add({r.n, r.r, r.nu, r.gamma, r.m, r.r_prime, r.exponent, r.xi, r.m_admissible, r.r_prime_admissible});
  return t;
}

// ---------------------------------------------------------------------------
// Superadditivity

struct SuperaddReport {
  double half_ree2 = 0.0;
  double ree1 = 0.0;
  double gap2 = 0.0;
  double gap1 = 0.0;
  double half_mutual_information = 0.0;  // I(1:2)/2, the slack of the product-optimizer bound
  double slack = 0.0;                    // ree1 + 2 tol - half_ree2
  bool pass = false;
};

/// (1/2) REE(rho over PPT(A1A2 : B1B2)) <= REE(rho_{A1B1} over PPT(A : B)) for equal site marginals.
inline SuperaddReport superadditivity_check(const Matrix& rho_2copy, int da, int db, const FrankWolfeOptions& fw = {}) {
  SiteStructure s2 = SiteStructure::uniform_bipartite(da, db, 2);
  check_operator(rho_2copy, s2, "superadditivity_check");
  require_density(rho_2copy, "superadditivity_check");
  Matrix m1 = partial_trace(rho_2copy, s2, {1});
  Matrix m2 = partial_trace(rho_2copy, s2, {0});
  if (trace_norm(m1 - m2) > 1e-8) throw std::invalid_argument("superadditivity_check: site marginals differ");
  SuperaddReport rep;
  auto r2 = ree_frank_wolfe(rho_2copy, ResourceSet::ppt(s2), fw);
  auto r1 = ree_frank_wolfe(m1, ResourceSet::ppt(SiteStructure::uniform_bipartite(da, db, 1)), fw);
  rep.half_ree2 = r2.value / 2.0;
  rep.ree1 = r1.value;
  rep.gap2 = r2.gap;
  rep.gap1 = r1.gap;
  rep.half_mutual_information = std::max(0.0, (2.0 * von_neumann_entropy(m1) - von_neumann_entropy(rho_2copy)) / 2.0);
  rep.slack = rep.ree1 + 2.0 * fw.tol - rep.half_ree2;
  rep.pass = rep.slack >= 0.0;
  return rep;
}

/// Equal-marginal two-copy state: (1-p) tau (x) tau + p sum_i lambda_i P_i (x) P_i over the eigenbasis of tau.
inline Matrix correlated_extension(const Matrix& tau, double p) {
  require_density(tau, "correlated_extension");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("correlated_extension: p must lie in [0,1]");
  auto ed = eigh(tau);
  Matrix corr = Matrix::Zero(tau.rows() * tau.rows(), tau.rows() * tau.cols());
  for (Eigen::Index i = 0; i < ed.values.size(); ++i) {
    Matrix pi = projector(Vector(ed.vectors.col(i)));
    corr += std::max(0.0, ed.values(i)) * kron(pi, pi);
  }
  Matrix out = (1.0 - p) * kron(tau, tau) + p * corr;
  return (out + out.adjoint()) / 2.0;
}

inline CsvTable superadd_csv(const std::vector<SuperaddReport>& reps, const std::string& config, std::uint64_t seed) {
  CsvTable t({"instance", "half_ree2", "ree1", "gap2", "gap1", "half_mutual_information", "slack", "pass"}, config, seed);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const auto& r = reps[i];
    t.add({static_cast<int>(i), r.half_ree2, r.ree1, r.gap2, r.gap1, r.half_mutual_information, r.slack, r.pass});
  }
  return t;
}

}  // namespace qstein
