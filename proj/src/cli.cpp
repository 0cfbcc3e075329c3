#include "gsp/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "gsp/duality.hpp"
#include "gsp/edge_io.hpp"

namespace gsp {

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace {

std::vector<double> single_gamma(const RunConfig& config, const Problem& problem) {
  return parse_gamma_spec(config.gamma_spec, problem);
}

Problem build(const EdgeList& plant, const EdgeList& candidates,
              const RunConfig& config, double gamma) {
  const WeightSpec w = parse_weight_spec(config.weights_spec);
  return make_problem(plant, candidates, gamma, config.resistive, w.q, w.r);
}

std::vector<SolutionEdge> nonzero_edges(const Problem& problem, const VectorXd& x,
                                        double zero_tol) {
  std::vector<SolutionEdge> out;
  for (int l : support_of(x, zero_tol)) {
    out.push_back({problem.candidates.head(l), problem.candidates.tail(l), x(l)});
  }
  return out;
}

RunReport base_report(const RunConfig& config, const Problem& problem,
                      int plant_edges) {
  RunReport r;
  r.config = config;
  r.n = problem.n();
  r.m = problem.m();
  r.plant_edges = plant_edges;
  r.connected = problem.plant.connected;
  return r;
}

void copy_certificate(RunReport& r, const SolveReport& s) {
  r.certificate_available = s.certificate_available;
  r.gap = s.final_gap;
  r.rd_norm = s.final_rd_norm;
  r.beta = s.final_beta;
}

void emit(const RunConfig& config, const RunReport& report, std::ostream& out) {
  if (config.output_path.empty()) {
    out << to_json_string(report) << '\n';
  } else {
    write_report_file(config.output_path, report);
  }
}

void check_start(const SolveReport& s) {
  if (s.status == SolveStatus::InfeasibleStart) {
    throw Infeasible("the starting point does not connect the closed loop");
  }
}

void run_gen(const RunConfig& c, std::ostream& out) {
  if (c.nodes < 1) throw InvalidInput("gen: --n must be positive");
  const GraphKind kind = parse_graph_kind(c.graph_kind);
  double param = 0.0;
  if (kind == GraphKind::ErdosRenyi) {
    param = c.probability < 0.0 ? default_er_probability(c.nodes) : c.probability;
  } else if (kind == GraphKind::RandomGeometric) {
    param = c.radius;
  }
  const EdgeList edges = generate(kind, c.nodes, param, c.seed, c.side);
  if (c.output_path.empty()) {
    write_edge_list(out, edges);
  } else {
    write_edge_list_file(c.output_path, edges);
  }
}

struct Loaded {
  EdgeList plant;
  EdgeList candidates;
};

Loaded load_files(const RunConfig& c) {
  if (c.plant_path.empty()) throw InvalidInput("--plant is required");
  Loaded l;
  l.plant = read_edge_list_file(c.plant_path);
  if (c.candidates_path.empty()) {
    l.candidates = complement_candidates(l.plant);
  } else {
    l.candidates = read_edge_list_file(c.candidates_path);
    if (l.candidates.n > l.plant.n) {
      throw InvalidInput("candidate edges reference nodes outside the plant");
    }
    l.candidates.n = l.plant.n;
  }
  return l;
}

void run_gammamax(const RunConfig& c, std::ostream& out) {
  const Loaded l = load_files(c);
  out << format_real(gamma_max(build(l.plant, l.candidates, c, 0.0))) << '\n';
}

void run_solve(const RunConfig& c, std::ostream& out) {
  const Loaded l = load_files(c);
  const Problem base = build(l.plant, l.candidates, c, 0.0);
  const auto gammas = single_gamma(c, base);
  if (gammas.size() != 1) throw InvalidInput("solve: --gamma must resolve to one value");
  const Problem problem = base.with_gamma(gammas.front());
  auto [x, s] = solve(problem, default_start(problem), c.solver);
  check_start(s);
  RunReport r = base_report(c, problem, static_cast<int>(l.plant.size()));
  r.gamma = problem.gamma;
  r.solution = nonzero_edges(problem, x, c.zero_tol);
  r.J = s.final_J;
  copy_certificate(r, s);
  r.solve = std::move(s);
  emit(c, r, out);
}

void run_polish(const RunConfig& c, std::ostream& out) {
  const Loaded l = load_files(c);
  if (c.support_path.empty()) throw InvalidInput("polish: --support is required");
  const Problem problem = build(l.plant, l.candidates, c, 0.0);
  const EdgeList sup = read_edge_list_file(c.support_path);
  std::vector<int> support;
  VectorXd warm = VectorXd::Zero(problem.m());
  for (const Edge& e : sup.edges) {
    const int col = problem.candidates.find(e.i, e.j);
    if (col < 0) {
      throw InvalidInput("polish: support edge (" + std::to_string(e.i) + ", " +
                         std::to_string(e.j) + ") is not a candidate");
    }
    support.push_back(col);
    warm(col) = e.w;
  }
  std::sort(support.begin(), support.end());
  Polished p = polish(problem, support, c.solver, warm);
  check_start(p.report);
  RunReport r = base_report(c, problem, static_cast<int>(l.plant.size()));
  r.polished = nonzero_edges(problem, p.x, 0.0);
  r.solution = r.polished;
  r.J = p.J;
  r.J_polished = p.J;
  copy_certificate(r, p.report);
  r.solve = std::move(p.report);
  emit(c, r, out);
}

void run_sweep(const RunConfig& c, std::ostream& out) {
  const Loaded l = load_files(c);
  const Problem problem = build(l.plant, l.candidates, c, 0.0);
  const auto gammas = parse_gamma_spec(c.gamma_spec, problem);
  SweepOptions opts;
  opts.solver = c.solver;
  opts.reweighting = c.reweighting;
  opts.epsilon = c.epsilon;
  opts.reweight_passes = c.reweight_passes;
  opts.zero_tol = c.zero_tol;
  opts.warm_start = c.warm_start;
  opts.jobs = c.jobs;
  const SweepResult res = sweep(problem, gammas, opts);
  RunReport r = base_report(c, problem, static_cast<int>(l.plant.size()));
  r.J_c = res.J_c;
  r.tradeoff = res.points;
  const TradeoffPoint& last = res.points.back();
  r.gamma = last.gamma;
  r.solution = nonzero_edges(problem, last.x, c.zero_tol);
  r.polished = nonzero_edges(problem, last.x_polished, 0.0);
  r.J = last.J_sparse;
  r.J_polished = last.J_polished;
  r.rel_loss = last.rel_performance_loss;
  r.rel_card = last.rel_cardinality;
  r.solve.method = to_string(c.solver.method);
  r.solve.iterations = last.iterations;
  r.solve.final_J = last.J_sparse;
  if (!c.record_timing) {
    for (auto& p : r.tradeoff) p.wall_time = 0.0;
  }
  if (!c.csv_path.empty()) write_tradeoff_csv(res.points, c.csv_path, c.record_timing);
  emit(c, r, out);
}

}  // namespace

Problem load_problem(const RunConfig& config, double gamma) {
  const Loaded l = load_files(config);
  return build(l.plant, l.candidates, config, gamma);
}

void execute(const RunConfig& config, std::ostream& out) {
  config.solver.grad.validate();
  config.solver.newton.validate();
  if (config.solver.method == Method::ProjGrad && !config.resistive &&
      config.command != "gen") {
    throw InvalidInput("method projgrad requires --resistive");
  }
  if (config.command == "gen") return run_gen(config, out);
  if (config.command == "gammamax") return run_gammamax(config, out);
  if (config.command == "solve") return run_solve(config, out);
  if (config.command == "polish") return run_polish(config, out);
  if (config.command == "sweep") return run_sweep(config, out);
  throw InvalidInput("unknown command '" + config.command + "'");
}

namespace {

void add_problem_flags(CLI::App* sub, RunConfig& c, std::string& method) {
  sub->add_option("--plant", c.plant_path, "Plant edge file")->required();
  sub->add_option("--candidates", c.candidates_path,
                  "Candidate edge file (default: complement of the plant)");
  sub->add_flag("--resistive", c.resistive, "Restrict weights to be non-negative");
  sub->add_option("--weights", c.weights_spec, "Weight multipliers, e.g. q=1,r=1");
  sub->add_option("--method", method, "proxbb | proxn | projgrad");
  sub->add_option("--seed", c.seed, "Random seed (recorded only)");
  sub->add_option("--max-iters", c.solver.grad.max_iters, "Proximal gradient iterations");
  sub->add_option("--max-outer", c.solver.newton.max_outer, "Newton outer iterations");
  sub->add_option("--cd-sweeps", c.solver.newton.cd_sweeps_max,
                  "Coordinate descent sweeps per Newton step");
  sub->add_option("--memory", c.solver.grad.nonmonotone_memory,
                  "Non-monotone line search memory");
  sub->add_option("--report-every", c.solver.grad.report_every,
                  "Certificate period of the gradient methods");
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse edge design for consensus networks", "gsp"};
  app.require_subcommand(0, 1);
  bool version = false;
  app.add_flag("--version", version, "Print format and PRNG identifiers");

  RunConfig c;
  std::string method = "proxn";
  double tol_gap = -1.0, tol_rd = -1.0;
  bool no_warm = false;

  auto* gen = app.add_subcommand("gen", "Generate a benchmark plant");
  gen->add_option("kind", c.graph_kind, "er | path | ring | geometric")->required();
  gen->add_option("--n", c.nodes, "Number of nodes")->required();
  gen->add_option("--p", c.probability, "Erdos-Renyi edge probability");
  gen->add_option("--radius", c.radius, "Geometric connection radius");
  gen->add_option("--side", c.side, "Geometric square side");
  gen->add_option("--seed", c.seed, "Random seed");
  gen->add_option("--out", c.output_path, "Output edge file (default: stdout)");

  auto* gmax = app.add_subcommand("gammamax", "Print the smallest gamma giving x = 0");
  add_problem_flags(gmax, c, method);

  std::vector<CLI::App*> solving;
  auto* sol = app.add_subcommand("solve", "Solve at one gamma");
  auto* swp = app.add_subcommand("sweep", "Sweep gamma and polish every point");
  auto* pol = app.add_subcommand("polish", "Re-optimize weights on a fixed support");
  for (auto* sub : {sol, swp, pol}) {
    add_problem_flags(sub, c, method);
    sub->add_option("--out", c.output_path, "Report file (default: stdout)");
    sub->add_option("--tol-gap", tol_gap, "Duality gap tolerance");
    sub->add_option("--tol-rd", tol_rd, "Dual residual tolerance");
    sub->add_option("--zero-tol", c.zero_tol, "Threshold defining the support");
  }
  sol->add_option("--gamma", c.gamma_spec, "Gamma, e.g. 0.5 or 0.8gmax");
  swp->add_option("--gamma", c.gamma_spec, "Gamma list, e.g. log:1e-3:2.5:200");
  swp->add_option("--csv", c.csv_path, "Tradeoff CSV output");
  swp->add_flag("--reweight", c.reweighting, "Path-following reweighted l1");
  swp->add_option("--epsilon", c.epsilon, "Reweighting offset");
  swp->add_option("--passes", c.reweight_passes, "Reweighting passes per gamma");
  swp->add_flag("--cold", no_warm, "Start every gamma from the default point");
  swp->add_option("--jobs", c.jobs, "Worker threads (cold starts only)");
  swp->add_flag("--timing", c.record_timing, "Record wall time in the CSV");
  pol->add_option("--support", c.support_path, "Edge file with the support")->required();

  std::string replay_path;
  auto* rep = app.add_subcommand("replay", "Rerun the configuration echoed in a report");
  rep->add_option("report", replay_path, "Report file")->required();
  rep->add_option("--out", c.output_path, "Report file (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "gsp: " << e.what() << '\n';
    return kExitInvalidInput;
  }

  if (version) {
    out << kReportFormat << ' ' << kPrngId << '\n';
    return kExitOk;
  }
  if (app.get_subcommands().empty()) {
    err << app.help();
    return kExitInvalidInput;
  }

  if (*rep) {
    const std::string out_path = c.output_path;
    RunConfig replayed = read_report_file(replay_path).config;
    replayed.output_path = out_path;
    execute(replayed, out);
    return kExitOk;
  }

  c.command = app.get_subcommands().front()->get_name();
  c.solver.method = parse_method(method);
  c.method = method;
  if (tol_gap > 0.0) c.solver.grad.tol_gap = c.solver.newton.tol_gap = tol_gap;
  if (tol_rd > 0.0) c.solver.grad.tol_rd = c.solver.newton.tol_rd = tol_rd;
  c.warm_start = !no_warm;
  execute(c, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const Infeasible& e) {
    err << "gsp: infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const InvalidInput& e) {
    err << "gsp: invalid input: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const IoError& e) {
    err << "gsp: i/o error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "gsp: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace gsp
