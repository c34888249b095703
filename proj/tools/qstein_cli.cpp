// qstein command-line front end.

#include <cmath>
#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qstein/qstein.hpp"

using namespace qstein;

namespace {

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  if (out.empty()) throw std::invalid_argument("empty list: " + s);
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (double x : parse_doubles(s)) out.push_back(static_cast<int>(std::llround(x)));
  return out;
}

Matrix diag_state(const std::vector<double>& p) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = p[i];
  return m;
}

void write_output(const CsvTable& t, const std::string& out) {
  if (out.empty())
    std::cout << t.str();
  else
    emit_csv(t, out);
}

/// Lists failing rows on stderr; returns the exit code.
int report_failures(const CsvTable& t) {
  const auto it = std::find(t.header.begin(), t.header.end(), "pass");
  if (it == t.header.end()) return 0;
  const auto col = static_cast<std::size_t>(it - t.header.begin());
  int failures = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (t.rows[i][col] != "true") {
      if (failures++ == 0) std::cerr << "failing rows:\n";
      std::cerr << "  row " << i;
      for (std::size_t c = 0; c < t.header.size(); ++c) std::cerr << ' ' << t.header[c] << '=' << t.rows[i][c];
      std::cerr << '\n';
    }
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qstein: entropic quantities, almost-iid states and Stein-exponent experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string sdp_trace;
  app.add_option("--sdp-trace", sdp_trace, "Append per-iteration SDP diagnostics to this CSV file");

  int exit_code = 0;
  std::vector<std::pair<CLI::App*, std::function<void()>>> actions;

  // divergence
  auto* div = app.add_subcommand("divergence", "Relative entropies and fidelity");
  std::string div_kind = "rel", div_rho, div_sigma;
  double div_alpha = 2.0;
  div->add_option("--kind", div_kind)->check(CLI::IsMember({"rel", "dmax", "dmin", "renyi", "fidelity"}));
  div->add_option("--alpha", div_alpha);
  div->add_option("--rho", div_rho)->required();
  div->add_option("--sigma", div_sigma)->required();
  actions.emplace_back(div, [&] {
    Matrix rho = read_state(div_rho).matrix, sigma = read_state(div_sigma).matrix;
    double v = 0.0;
    if (div_kind == "rel") v = rel_entropy(rho, sigma);
    if (div_kind == "dmax") v = dmax(rho, sigma);
    if (div_kind == "dmin") v = dmin(rho, sigma);
    if (div_kind == "renyi") v = renyi_sandwiched(rho, sigma, div_alpha);
    if (div_kind == "fidelity") v = fidelity(rho, sigma);
    std::cout << format_number(v) << '\n';
  });

  // dh
  auto* dhc = app.add_subcommand("dh", "Hypothesis-testing relative entropy");
  std::string dh_rho, dh_sigma, dh_p, dh_q, dh_out;
  double dh_eps = 0.1;
  int dh_n = 1;
  bool dh_classical = false;
  dhc->add_option("--rho", dh_rho);
  dhc->add_option("--sigma", dh_sigma);
  dhc->add_option("--eps", dh_eps)->required();
  dhc->add_flag("--classical", dh_classical);
  dhc->add_option("--p", dh_p);
  dhc->add_option("--q", dh_q);
  dhc->add_option("--n", dh_n);
  dhc->add_option("--out", dh_out);
  actions.emplace_back(dhc, [&] {
    std::ostringstream cfg;
    cfg << "dh|" << dh_eps << '|' << dh_n << '|' << dh_p << '|' << dh_q << '|' << dh_rho << '|' << dh_sigma;
    CsvTable t({"n", "eps", "beta_log", "dh_per_n"}, cfg.str(), 0);
    if (dh_classical) {
      auto r = dh_classical_iid(parse_doubles(dh_p), parse_doubles(dh_q), dh_n, dh_eps);
      t.add({dh_n, dh_eps, r.log_beta, r.dh / dh_n});
    } else {
      if (dh_rho.empty() || dh_sigma.empty()) throw CLI::ValidationError("dh", "--rho and --sigma are required");
      auto r = beta_eps(read_state(dh_rho).matrix, read_state(dh_sigma).matrix, dh_eps);
      t.add({1, dh_eps, std::log(r.beta), dh_from_beta(r.beta)});
    }
    write_output(t, dh_out);
  });

  // w1
  auto* w1c = app.add_subcommand("w1", "Quantum Wasserstein distance of order 1");
  std::string w1_omega, w1_tau, w1_mode = "exact";
  w1c->add_option("--omega", w1_omega)->required();
  w1c->add_option("--tau", w1_tau)->required();
  w1c->add_option("--mode", w1_mode)->check(CLI::IsMember({"exact", "bracket"}));
  actions.emplace_back(w1c, [&] {
    auto om = read_state(w1_omega);
    Matrix tau = read_state(w1_tau).matrix;
    if (w1_mode == "exact") {
      std::cout << format_number(w1_distance(om.matrix, tau, om.sites).value) << '\n';
    } else {
      auto b = w1_bracket(om.matrix, tau, om.sites);
      std::cout << format_number(b.lo) << ',' << format_number(b.hi) << '\n';
    }
  });

  // almostiid
  auto* aic = app.add_subcommand("almostiid", "Random almost-iid states");
  std::string ai_theta, ai_emit = "state", ai_out;
  int ai_n = 3, ai_r = 1;
  std::uint64_t ai_seed = 1;
  aic->add_option("--theta", ai_theta)->required();
  aic->add_option("--n", ai_n);
  aic->add_option("--r", ai_r);
  aic->add_option("--seed", ai_seed);
  aic->add_option("--emit", ai_emit)->check(CLI::IsMember({"state", "w1report"}));
  aic->add_option("--out", ai_out);
  actions.emplace_back(aic, [&] {
    auto [theta, s] = pure_from_json(read_json_file(ai_theta));
    int da = 0, de = 0;
    if (s.bipartition && s.num_sites() == 1) {
      da = (*s.bipartition)[0].first;
      de = (*s.bipartition)[0].second;
    } else {
      da = static_cast<int>(std::lround(std::sqrt(static_cast<double>(theta.size()))));
      de = da;
      if (da * de != theta.size()) throw std::invalid_argument("almostiid: give a bipartition [[dA,dE]] for theta");
    }
    auto sample = random_almost_iid(theta, da, de, ai_n, ai_r, ai_seed);
    SiteStructure sa = SiteStructure::uniform(da, ai_n);
    if (ai_emit == "state") {
      auto j = state_to_json(sample.rho_a, sa);
      if (ai_out.empty())
        std::cout << j.dump() << '\n';
      else
        write_json_file(j, ai_out);
      return;
    }
    Matrix sigma = trace_out_e(projector(theta), da, de, 1);
    const double w = w1_distance(sample.rho_a, tensor_power(sigma, ai_n), sa).value / ai_n;
    const double bound = 2.0 * std::sqrt(static_cast<double>(ai_r) / ai_n);
    std::ostringstream cfg;
    cfg << "almostiid|" << ai_theta << '|' << ai_n << '|' << ai_r;
    CsvTable t({"n", "r", "w1_over_n", "bound", "pass"}, cfg.str(), ai_seed);
    t.add({ai_n, ai_r, w, bound, w <= bound + 1e-6});
    write_output(t, ai_out);
    exit_code = report_failures(t);
  });

  // ree
  auto* reec = app.add_subcommand("ree", "Relative entropy of resource");
  std::string ree_rho, ree_set = "ppt", ree_sigma;
  double ree_tol = 1e-4;
  reec->add_option("--rho", ree_rho)->required();
  reec->add_option("--set", ree_set)->check(CLI::IsMember({"ppt", "iid"}));
  reec->add_option("--sigma", ree_sigma);
  reec->add_option("--tol", ree_tol);
  actions.emplace_back(reec, [&] {
    auto rf = read_state(ree_rho);
    ResourceSet set;
    if (ree_set == "ppt") {
      set = ResourceSet::ppt(rf.sites);
    } else {
      if (ree_sigma.empty()) throw CLI::ValidationError("ree", "--sigma is required for --set iid");
      set = ResourceSet::single_iid(read_state(ree_sigma).matrix, rf.sites.num_sites());
    }
    FrankWolfeOptions fw;
    fw.tol = ree_tol;
    auto r = ree_frank_wolfe(rf.matrix, set, fw);
    std::cout << "value," << format_number(r.value) << "\ngap," << format_number(r.gap) << '\n';
  });

  // continuity
  auto* conc = app.add_subcommand("continuity", "Continuity of REE in the Wasserstein distance");
  std::string con_rho, con_rhop, con_set = "ppt", con_out;
  double con_tol = 1e-4;
  conc->add_option("--rho", con_rho)->required();
  conc->add_option("--rhoprime", con_rhop)->required();
  conc->add_option("--set", con_set)->check(CLI::IsMember({"ppt"}));
  conc->add_option("--tol", con_tol);
  conc->add_option("--out", con_out);
  actions.emplace_back(conc, [&] {
    auto a = read_state(con_rho);
    Matrix b = read_state(con_rhop).matrix;
    FrankWolfeOptions fw;
    fw.tol = con_tol;
    auto rep = continuity_check(a.matrix, b, ResourceSet::ppt(a.sites), fw);
    std::ostringstream cfg;
    cfg << "continuity|" << con_rho << '|' << con_rhop << '|' << con_tol;
    CsvTable t({"eps_n", "delta_ree", "bound", "skipped", "pass"}, cfg.str(), 0);
    t.add({rep.eps_n, rep.delta, rep.bound, rep.skipped, rep.skipped || rep.pass});
    write_output(t, con_out);
    exit_code = report_failures(t);
  });

  // stein
  auto* stc = app.add_subcommand("stein", "Stein-exponent table");
  std::string st_rho, st_sigma, st_p, st_q, st_grid = "1,2,4,8", st_out;
  double st_eps = 0.1, st_nu = 0.1;
  std::uint64_t st_seed = 0;
  int st_workers = 1;
  stc->add_option("--rho", st_rho);
  stc->add_option("--sigma", st_sigma);
  stc->add_option("--p", st_p);
  stc->add_option("--q", st_q);
  stc->add_option("--eps", st_eps);
  stc->add_option("--nu", st_nu);
  stc->add_option("--n", st_grid);
  stc->add_option("--out", st_out);
  stc->add_option("--seed", st_seed);
  stc->add_option("--workers", st_workers);
  actions.emplace_back(stc, [&] {
    Matrix rho, sigma;
    if (!st_p.empty()) {
      rho = diag_state(parse_doubles(st_p));
      sigma = diag_state(parse_doubles(st_q));
    } else {
      if (st_rho.empty() || st_sigma.empty()) throw CLI::ValidationError("stein", "give --p/--q or --rho/--sigma");
      rho = read_state(st_rho).matrix;
      sigma = read_state(st_sigma).matrix;
    }
    SteinOptions opt;
    opt.nu = st_nu;
    opt.workers = st_workers;
    auto rows = stein_table(rho, sigma, st_eps, parse_ints(st_grid), opt);
    std::ostringstream cfg;
    cfg << "stein|" << matrix_signature(rho) << '|' << matrix_signature(sigma) << '|' << st_eps << '|' << st_nu << '|' << st_grid;
    auto t = stein_csv(rows, cfg.str(), st_seed);
    write_output(t, st_out);
    exit_code = report_failures(t);
  });

  // robust-stein
  auto* rsc = app.add_subcommand("robust-stein", "Stein table over sampled almost-iid pairs");
  std::string rs_rho, rs_sigma, rs_grid = "1,2,3,4", rs_out;
  double rs_eps = 0.1;
  RobustOptions rs_opt;
  rsc->add_option("--rho", rs_rho)->required();
  rsc->add_option("--sigma", rs_sigma)->required();
  rsc->add_option("--eps", rs_eps);
  rsc->add_option("--n", rs_grid);
  rsc->add_option("--r1", rs_opt.r1);
  rsc->add_option("--r2", rs_opt.r2);
  rsc->add_option("--samples", rs_opt.samples);
  rsc->add_option("--out", rs_out);
  rsc->add_option("--seed", rs_opt.seed);
  rsc->add_option("--workers", rs_opt.workers);
  actions.emplace_back(rsc, [&] {
    Matrix rho = read_state(rs_rho).matrix, sigma = read_state(rs_sigma).matrix;
    auto rows = robust_stein_table(rho, sigma, rs_eps, parse_ints(rs_grid), rs_opt);
    std::ostringstream cfg;
    cfg << "robust-stein|" << matrix_signature(rho) << '|' << matrix_signature(sigma) << '|' << rs_eps << '|' << rs_grid
        << '|' << rs_opt.r1 << '|' << rs_opt.r2 << '|' << rs_opt.samples;
    auto t = robust_csv(rows, cfg.str(), rs_opt.seed);
    write_output(t, rs_out);
    exit_code = report_failures(t);
  });

  // gsl-converse
  auto* gsc = app.add_subcommand("gsl-converse", "Strong-converse bound at the REE optimizer");
  std::string gs_rho, gs_set = "ppt", gs_sigma, gs_alphas = "1.5,2,3", gs_out;
  double gs_eps = 0.3, gs_tol = 1e-4;
  int gs_n = 1, gs_workers = 1;
  std::uint64_t gs_seed = 0;
  gsc->add_option("--rho", gs_rho)->required();
  gsc->add_option("--set", gs_set)->check(CLI::IsMember({"ppt", "iid"}));
  gsc->add_option("--sigma", gs_sigma);
  gsc->add_option("--eps", gs_eps);
  gsc->add_option("--n", gs_n);
  gsc->add_option("--alphas", gs_alphas);
  gsc->add_option("--tol", gs_tol);
  gsc->add_option("--out", gs_out);
  gsc->add_option("--seed", gs_seed);
  gsc->add_option("--workers", gs_workers);
  actions.emplace_back(gsc, [&] {
    auto rf = read_state(gs_rho);
    if (rf.sites.num_sites() != 1) throw std::invalid_argument("gsl-converse: --rho must be a single-site state");
    ResourceSet set;
    if (gs_set == "ppt") {
      set = ResourceSet::ppt(SiteStructure(std::vector<int>(static_cast<std::size_t>(gs_n), rf.sites.dims[0]),
                                           std::vector<std::pair<int, int>>(static_cast<std::size_t>(gs_n), rf.sites.bipartition.value().at(0))));
    } else {
      if (gs_sigma.empty()) throw CLI::ValidationError("gsl-converse", "--sigma is required for --set iid");
      set = ResourceSet::single_iid(read_state(gs_sigma).matrix, gs_n);
    }
    FrankWolfeOptions fw;
    fw.tol = gs_tol;
    auto rep = gsl_converse_check(rf.matrix, set, gs_eps, parse_doubles(gs_alphas), fw);
    std::ostringstream cfg;
    cfg << "gsl-converse|" << matrix_signature(rf.matrix) << '|' << gs_set << '|' << gs_eps << '|' << gs_n << '|' << gs_alphas;
    auto t = converse_csv(rep, gs_n, cfg.str(), gs_seed);
    write_output(t, gs_out);
    exit_code = report_failures(t);
  });

  // schedule
  auto* scc = app.add_subcommand("schedule", "Achievability parameter schedule");
  std::string sc_rule = "n23", sc_out;
  double sc_min = 1e3, sc_max = 1e6, sc_eps = 0.1;
  int sc_points = 7, sc_d = 2, sc_rconst = 1, sc_workers = 1;
  std::uint64_t sc_seed = 0;
  bool sc_assert_trend = false;
  scc->add_option("--rule", sc_rule)->check(CLI::IsMember({"const", "sqrt", "n23"}));
  scc->add_option("--n-min", sc_min);
  scc->add_option("--n-max", sc_max);
  scc->add_option("--points", sc_points);
  scc->add_option("--eps", sc_eps);
  scc->add_option("--d", sc_d);
  scc->add_option("--r-const", sc_rconst);
  scc->add_flag("--assert-trend", sc_assert_trend);
  scc->add_option("--out", sc_out);
  scc->add_option("--seed", sc_seed);
  scc->add_option("--workers", sc_workers);
  actions.emplace_back(scc, [&] {
    auto rows = schedule_eval(log_grid(sc_min, sc_max, sc_points), parse_r_rule(sc_rule), sc_eps, sc_d, sc_rconst);
    std::ostringstream cfg;
    cfg << "schedule|" << sc_rule << '|' << sc_min << '|' << sc_max << '|' << sc_points << '|' << sc_eps << '|' << sc_d << '|'
        << sc_rconst;
    auto t = schedule_csv(rows, cfg.str(), sc_seed);
    write_output(t, sc_out);
    if (sc_assert_trend) {
      auto tr = schedule_trend(rows);
      if (!tr.pass) {
        std::cerr << "trend check failed: xi_decreasing=" << tr.xi_decreasing << " exponent_drop=" << tr.exponent_drop
                  << " m_over_n_decreasing=" << tr.m_over_n_decreasing
                  << " r_prime_over_n_decreasing=" << tr.r_prime_over_n_decreasing << '\n';
        exit_code = 2;
      }
    }
  });

  // superadd
  auto* suc = app.add_subcommand("superadd", "Two-copy REE against the single-copy value");
  std::string su_rho, su_out;
  int su_instances = 5, su_workers = 1, su_da = 2, su_db = 2;
  std::uint64_t su_seed = 1;
  double su_tol = 1e-4;
  suc->add_option("--rho", su_rho, "Two-site state with equal site marginals");
  suc->add_option("--instances", su_instances, "Random correlated extensions when --rho is absent");
  suc->add_option("--da", su_da);
  suc->add_option("--db", su_db);
  suc->add_option("--tol", su_tol);
  suc->add_option("--out", su_out);
  suc->add_option("--seed", su_seed);
  suc->add_option("--workers", su_workers);
  actions.emplace_back(suc, [&] {
    FrankWolfeOptions fw;
    fw.tol = su_tol;
    std::vector<SuperaddReport> reps;
    std::ostringstream cfg;
    cfg << "superadd|" << su_da << '|' << su_db << '|' << su_tol << '|';
    if (!su_rho.empty()) {
      auto rf = read_state(su_rho);
      cfg << matrix_signature(rf.matrix);
      reps.push_back(superadditivity_check(rf.matrix, su_da, su_db, fw));
    } else {
      cfg << su_instances;
      reps = parallel_map(su_instances, su_workers, [&](int i) {
        const auto s = derive_seed(su_seed, 0, static_cast<std::uint64_t>(i));
        Matrix tau = random_density(su_da * su_db, su_da * su_db, s);
        const double p = std::ldexp(static_cast<double>(derive_seed(su_seed, 1, static_cast<std::uint64_t>(i)) >> 11), -53);
        return superadditivity_check(correlated_extension(tau, p), su_da, su_db, fw);
      });
    }
    auto t = superadd_csv(reps, cfg.str(), su_seed);
    write_output(t, su_out);
    exit_code = report_failures(t);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  std::ofstream trace_file;
  std::mutex trace_mutex;
  if (!sdp_trace.empty()) {
    trace_file.open(sdp_trace, std::ios::app);
    if (!trace_file) {
      std::cerr << "error: cannot open " << sdp_trace << '\n';
      return 1;
    }
    if (trace_file.tellp() == 0) sdp::write_trace_csv_header(trace_file);
    sdp::global_trace() = [&](const sdp::IterationInfo& it) {
      std::lock_guard<std::mutex> lock(trace_mutex);
      sdp::write_trace_csv_row(trace_file, it);
    };
  }
  try {
    for (auto& [sub, action] : actions)
      if (sub->parsed()) action();
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  sdp::global_trace() = nullptr;
  return exit_code;
}
