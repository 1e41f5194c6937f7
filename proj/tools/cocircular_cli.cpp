// Command-line front end: solve / verify / uniqueness / simulate / orderings.
//
// Exit codes
//   0  success (converged local max; no "multiple" verdict; orbit within tolerance)
//   1  malformed problem file or bad arguments
//   2  solver did not converge (solve) / input not stationary (verify)
//   3  infeasible central-mass margin
//   4  collision during simulation
//   5  orbit residual above --tol
//   6  stationary point is not a strict local maximum (verify)

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include <CLI11.hpp>

#include "cocircular/cocircular.hpp"

namespace {

using namespace cocircular;

enum Exit : int {
  ok = 0,
  bad_input = 1,
  not_converged = 2,
  infeasible = 3,
  collision = 4,
  residual_too_large = 5,
  not_local_max = 6,
};

void emit(const json& doc, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("--out", "cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

CircularConfig default_start(const ProblemSpec& spec) {
  const double r0 = initial_radius(spec, spec.masses);
  return regular_ngon(spec.masses.size(), r0, spec.masses);
}

struct CommonArgs {
  std::string problem;
  std::string out;
  std::uint64_t seed = 0;
};

int run_solve(const CommonArgs& args, int max_iter, double tol_grad) {
  const ProblemFile pf = read_problem_file(args.problem);
  SolveOptions opts;
  opts.seed = args.seed;
  opts.max_iter = max_iter;
  opts.tol_grad = tol_grad;
  const CircularConfig init = pf.initial ? *pf.initial : default_start(pf.spec);

  if (pf.spec.variant == Variant::central_mass) {
    const double margin = feasibility_margin(pf.spec, init);
    if (!(margin > 0.0)) {
      json result{{"status", "infeasible"},
                  {"initial_config", config_to_json(init)},
                  {"feasibility_margin", margin},
                  {"feasible", false}};
      emit(make_report("solve", pf, opts, std::move(result)), args.out);
      std::cerr << "central-mass feasibility margin " << margin << " <= 0\n";
      return infeasible;
    }
  }

  const StationaryReport report = solve_stationary(pf.spec, init, opts);
  emit(make_report("solve", pf, opts, to_json(report)), args.out);
  if (report.feasibility_margin && !report.feasible) return infeasible;
  if (!report.converged || !report.is_local_max) return not_converged;
  return ok;
}

int run_verify(const CommonArgs& args, double tol_grad) {
  const ProblemFile pf = read_problem_file(args.problem);
  if (!pf.initial) throw ParseError("initial", "verify needs a configuration");
  SolveOptions opts;
  opts.seed = args.seed;
  const double grad_norm = gradient(pf.spec, *pf.initial).norm();
  if (!(grad_norm <= tol_grad)) {
    emit(make_report("verify", pf, opts, json{{"stationary", false}, {"grad_norm", grad_norm}}), args.out);
    std::cerr << "configuration is not stationary: |grad| = " << grad_norm << '\n';
    return not_converged;
  }
  const LocalMaxVerdict v = verify_local_max(pf.spec, *pf.initial, opts.tol_eig, tol_grad);
  json result = to_json(v);
  result["stationary"] = true;
  result["grad_norm"] = grad_norm;
  emit(make_report("verify", pf, opts, std::move(result)), args.out);
  return v.is_local_max && v.rotation_null_ok ? ok : not_local_max;
}

int run_uniqueness(const CommonArgs& args, const std::string& which, int starts, unsigned threads) {
  const ProblemFile pf = read_problem_file(args.problem);
  SolveOptions opts;
  opts.seed = args.seed;
  opts.starts = starts;
  opts.threads = threads;
  const auto orderings = enumerate_orderings(pf.spec.masses);

  std::vector<std::size_t> selected;
  if (which == "all") {
    for (std::size_t k = 0; k < orderings.size(); ++k) selected.push_back(k);
  } else {
    std::size_t k = 0;
    try {
      k = std::stoul(which);
    } catch (const std::exception&) {
      throw ParseError("--orderings", "expected 'all' or an ordering index");
    }
    if (k >= orderings.size()) throw ParseError("--orderings", "index out of range");
    selected.push_back(k);
  }

  bool any_multiple = false;
  json reports = json::array();
  for (std::size_t k : selected) {
    const UniquenessReport u = uniqueness_experiment(pf.spec, orderings[k], opts);
    any_multiple = any_multiple || u.verdict == UniquenessVerdict::multiple;
    json r = to_json(u);
    r["ordering_index"] = k;
    reports.push_back(std::move(r));
  }
  json result{{"orderings_total", orderings.size()}, {"reports", std::move(reports)}};
  emit(make_report("uniqueness", pf, opts, std::move(result)), args.out);
  return any_multiple ? not_converged : ok;
}

int run_simulate(const CommonArgs& args, double t_max, double dt, double tol, const std::string& csv_path) {
  const ProblemFile pf = read_problem_file(args.problem);
  SolveOptions opts;
  opts.seed = args.seed;

  CircularConfig config;
  bool solved = false;
  if (pf.initial) {
    config = *pf.initial;
  } else {
    const StationaryReport rep = solve_stationary(pf.spec, default_start(pf.spec), opts);
    if (!rep.converged) {
      std::cerr << "solve did not converge; nothing to simulate\n";
      return not_converged;
    }
    config = rep.config;
    solved = true;
  }

  const double period = 2.0 * std::numbers::pi / pf.spec.spin;
  if (t_max <= 0.0) t_max = period;
  if (dt <= 0.0) dt = period * 1e-4;
  const OrbitRun run = simulate_orbit(pf.spec, config, t_max / period, period / dt);

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw ParseError("--out", "cannot write '" + csv_path + "'");
    if (run.is_curved) write_csv(csv, run.curved);
    else write_csv(csv, run.planar);
  }

  json result = to_json(run.check);
  result["config"] = config_to_json(config);
  result["solved"] = solved;
  result["t_max"] = t_max;
  result["dt"] = dt;
  result["tol"] = tol;
  result["orbit_residual"] = run.check.max_deviation;
  emit(make_report("simulate", pf, opts, std::move(result)), args.out);

  if (run.check.truncated) {
    std::cerr << "collision at t = " << run.check.truncation_time << '\n';
    return collision;
  }
  return run.check.max_deviation < tol ? ok : residual_too_large;
}

int run_orderings(const CommonArgs& args) {
  const ProblemFile pf = read_problem_file(args.problem);
  const auto orderings = enumerate_orderings(pf.spec.masses);
  json list = json::array();
  for (std::size_t k = 0; k < orderings.size(); ++k) {
    list.push_back(json{{"index", k}, {"perm", orderings[k].perm}, {"masses", ordered_values(pf.spec.masses, orderings[k])}});
  }
  SolveOptions opts;
  opts.seed = args.seed;
  emit(make_report("orderings", pf, opts, json{{"count", orderings.size()}, {"orderings", std::move(list)}}), args.out);
  return ok;
}

void add_common(CLI::App* sub, CommonArgs& args, bool out_is_report = true) {
  sub->add_option("--problem", args.problem, "Problem file (JSON)")->required();
  if (out_is_report) sub->add_option("--out", args.out, "Report path (default: stdout)");
  sub->add_option("--seed", args.seed, "RNG seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-circular relative equilibria: solve, certify and simulate"};
  app.require_subcommand(1);

  CommonArgs solve_args, verify_args, uniq_args, sim_args, ord_args;
  int max_iter = 200;
  double solve_tol = 1e-10;
  auto* solve = app.add_subcommand("solve", "Find a stationary point and certify it");
  add_common(solve, solve_args);
  solve->add_option("--max-iter", max_iter, "Iteration cap");
  solve->add_option("--tol", solve_tol, "Gradient-norm tolerance");

  double verify_tol = 1e-8;
  auto* verify = app.add_subcommand("verify", "Certify the problem's initial config as a strict local max");
  add_common(verify, verify_args);
  verify->add_option("--tol", verify_tol, "Stationarity tolerance on |grad V|");

  std::string which = "all";
  int starts = 20;
  unsigned threads = 1;
  auto* uniq = app.add_subcommand("uniqueness", "Multi-start uniqueness experiment per mass ordering");
  add_common(uniq, uniq_args);
  uniq->add_option("--orderings", which, "'all' or a zero-based ordering index");
  uniq->add_option("--starts", starts, "Starts per ordering")->check(CLI::PositiveNumber);
  uniq->add_option("--threads", threads, "Worker threads");

  double t_max = 0.0, dt = 0.0, sim_tol = 1e-5;
  std::string csv_path;
  auto* sim = app.add_subcommand("simulate", "Integrate the equations of motion from a relative equilibrium");
  add_common(sim, sim_args, false);
  sim->add_option("--tmax", t_max, "Integration time (default: one period)");
  sim->add_option("--dt", dt, "RK4 step (default: 1e-4 period)");
  sim->add_option("--tol", sim_tol, "Orbit residual tolerance");
  sim->add_option("--out", csv_path, "Trajectory CSV path");
  sim->add_option("--report", sim_args.out, "Summary report path (default: stdout)");

  auto* ord = app.add_subcommand("orderings", "List mass orderings up to rotation");
  add_common(ord, ord_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bad_input;
  }

  try {
    if (*solve) return run_solve(solve_args, max_iter, solve_tol);
    if (*verify) return run_verify(verify_args, verify_tol);
    if (*uniq) return run_uniqueness(uniq_args, which, starts, threads);
    if (*sim) return run_simulate(sim_args, t_max, dt, sim_tol, csv_path);
    if (*ord) return run_orderings(ord_args);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return bad_input;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return bad_input;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return bad_input;
  }
  return bad_input;
}
