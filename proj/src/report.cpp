#include "gsp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace gsp {

using nlohmann::json;

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIters: return "max_iters";
    case SolveStatus::InfeasibleStart: return "infeasible_start";
    case SolveStatus::Stalled: return "stalled";
  }
  return "unknown";
}

SolveStatus parse_solve_status(const std::string& name) {
  if (name == "converged") return SolveStatus::Converged;
  if (name == "max_iters") return SolveStatus::MaxIters;
  if (name == "infeasible_start") return SolveStatus::InfeasibleStart;
  if (name == "stalled") return SolveStatus::Stalled;
  throw InvalidInput("unknown solve status '" + name + "'");
}

WeightSpec parse_weight_spec(const std::string& spec) {
  WeightSpec w;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidInput("weights: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw InvalidInput("");
    } catch (const std::exception&) {
      throw InvalidInput("weights: bad number in '" + item + "'");
    }
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw InvalidInput("weights: multipliers must be positive");
    }
    if (key == "q") {
      w.q = value;
    } else if (key == "r") {
      w.r = value;
    } else {
      throw InvalidInput("weights: unknown key '" + key + "'");
    }
  }
  return w;
}

namespace {

double parse_gamma_value(std::string token, const Problem& problem) {
  bool relative = false;
  if (token.size() >= 4 && token.compare(token.size() - 4, 4, "gmax") == 0) {
    relative = true;
    token.resize(token.size() - 4);
  }
  double v = 0.0;
  try {
    std::size_t used = 0;
    v = std::stod(token, &used);
    if (used != token.size()) throw InvalidInput("");
  } catch (const std::exception&) {
    throw InvalidInput("gamma: cannot parse '" + token + "'");
  }
  if (!std::isfinite(v) || v < 0.0) throw InvalidInput("gamma must be finite and >= 0");
  if (relative) {
    if (!problem.plant.connected) {
      throw InvalidInput("gamma: gmax-relative values need a connected plant");
    }
    v *= gamma_max(problem);
  }
  return v;
}

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json options_json(const SolverOptions& s) {
  return json{{"method", to_string(s.method)},
              {"max_iters", s.grad.max_iters},
              {"alpha_fallback", s.grad.alpha_fallback},
              {"grad_backtrack_shrink", s.grad.backtrack_shrink},
              {"alpha_min", s.grad.alpha_min},
              {"alpha_max", s.grad.alpha_max},
              {"grad_tol_gap", s.grad.tol_gap},
              {"grad_tol_rd", s.grad.tol_rd},
              {"nonmonotone_memory", s.grad.nonmonotone_memory},
              {"nonmonotone_sigma", s.grad.nonmonotone_sigma},
              {"report_every", s.grad.report_every},
              {"max_outer", s.newton.max_outer},
              {"cd_sweeps_max", s.newton.cd_sweeps_max},
              {"cd_tol", s.newton.cd_tol},
              {"sigma", s.newton.sigma},
              {"newton_backtrack_shrink", s.newton.backtrack_shrink},
              {"active_eps_factor", s.newton.active_eps_factor},
              {"newton_tol_gap", s.newton.tol_gap},
              {"newton_tol_rd", s.newton.tol_rd},
              {"max_backtracks", s.newton.max_backtracks}};
}

SolverOptions options_from_json(const json& j) {
  SolverOptions s;
  s.method = parse_method(j.at("method").get<std::string>());
  s.grad.max_iters = j.at("max_iters");
  s.grad.alpha_fallback = j.at("alpha_fallback");
  s.grad.backtrack_shrink = j.at("grad_backtrack_shrink");
  s.grad.alpha_min = j.at("alpha_min");
  s.grad.alpha_max = j.at("alpha_max");
  s.grad.tol_gap = j.at("grad_tol_gap");
  s.grad.tol_rd = j.at("grad_tol_rd");
  s.grad.nonmonotone_memory = j.at("nonmonotone_memory");
  s.grad.nonmonotone_sigma = j.at("nonmonotone_sigma");
  s.grad.report_every = j.at("report_every");
  s.newton.max_outer = j.at("max_outer");
  s.newton.cd_sweeps_max = j.at("cd_sweeps_max");
  s.newton.cd_tol = j.at("cd_tol");
  s.newton.sigma = j.at("sigma");
  s.newton.backtrack_shrink = j.at("newton_backtrack_shrink");
  s.newton.active_eps_factor = j.at("active_eps_factor");
  s.newton.tol_gap = j.at("newton_tol_gap");
  s.newton.tol_rd = j.at("newton_tol_rd");
  s.newton.max_backtracks = j.at("max_backtracks");
  return s;
}

json config_json(const RunConfig& c) {
  return json{{"command", c.command},
              {"plant", c.plant_path},
              {"candidates", c.candidates_path},
              {"support", c.support_path},
              {"resistive", c.resistive},
              {"gamma", c.gamma_spec},
              {"weights", c.weights_spec},
              {"seed", c.seed},
              {"out", c.output_path},
              {"csv", c.csv_path},
              {"kind", c.graph_kind},
              {"nodes", c.nodes},
              {"probability", c.probability},
              {"radius", c.radius},
              {"side", c.side},
              {"reweight", c.reweighting},
              {"epsilon", c.epsilon},
              {"reweight_passes", c.reweight_passes},
              {"warm_start", c.warm_start},
              {"jobs", c.jobs},
              {"zero_tol", c.zero_tol},
              {"timing", c.record_timing},
              {"solver", options_json(c.solver)}};
}

RunConfig config_from(const json& j) {
  RunConfig c;
  c.command = j.at("command");
  c.plant_path = j.at("plant");
  c.candidates_path = j.at("candidates");
  c.support_path = j.at("support");
  c.resistive = j.at("resistive");
  c.gamma_spec = j.at("gamma");
  c.weights_spec = j.at("weights");
  c.seed = j.at("seed");
  c.output_path = j.at("out");
  c.csv_path = j.at("csv");
  c.graph_kind = j.at("kind");
  c.nodes = j.at("nodes");
  c.probability = j.at("probability");
  c.radius = j.at("radius");
  c.side = j.at("side");
  c.reweighting = j.at("reweight");
  c.epsilon = j.at("epsilon");
  c.reweight_passes = j.at("reweight_passes");
  c.warm_start = j.at("warm_start");
  c.jobs = j.at("jobs");
  c.zero_tol = j.at("zero_tol");
  c.record_timing = j.at("timing");
  c.solver = options_from_json(j.at("solver"));
  c.method = to_string(c.solver.method);
  return c;
}

// Non-finite values are written as null and read back as NaN.
double num(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json edges_json(const std::vector<SolutionEdge>& edges) {
  json out = json::array();
  for (const auto& e : edges) out.push_back(json::array({e.i, e.j, e.w}));
  return out;
}

std::vector<SolutionEdge> edges_from(const json& j) {
  std::vector<SolutionEdge> out;
  for (const auto& e : j) out.push_back({e.at(0), e.at(1), e.at(2)});
  return out;
}

}  // namespace

std::vector<double> parse_gamma_spec(const std::string& spec, const Problem& problem) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    if (item.rfind("log:", 0) == 0) {
      std::vector<std::string> parts;
      std::stringstream ps(item.substr(4));
      std::string p;
      while (std::getline(ps, p, ':')) parts.push_back(p);
      if (parts.size() != 3) throw InvalidInput("gamma: expected log:<lo>:<hi>:<count>");
      const double lo = parse_gamma_value(parts[0], problem);
      const double hi = parse_gamma_value(parts[1], problem);
      int count = 0;
      try {
        std::size_t used = 0;
        count = std::stoi(parts[2], &used);
        if (used != parts[2].size()) throw InvalidInput("");
      } catch (const std::exception&) {
        throw InvalidInput("gamma: bad count '" + parts[2] + "'");
      }
      const auto grid = log_grid(lo, hi, count);
      out.insert(out.end(), grid.begin(), grid.end());
    } else {
      out.push_back(parse_gamma_value(item, problem));
    }
  }
  if (out.empty()) throw InvalidInput("gamma: empty specification");
  std::sort(out.begin(), out.end());
  return out;
}

std::string config_to_json_string(const RunConfig& config) {
  return config_json(config).dump(2);
}

RunConfig config_from_json_string(const std::string& text) {
  try {
    return config_from(json::parse(text));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
}

std::string to_json_string(const RunReport& r) {
  json points = json::array();
  for (const auto& p : r.tradeoff) {
    points.push_back({{"gamma", p.gamma},
                      {"cardinality", p.cardinality},
                      {"J_sparse", p.J_sparse},
                      {"J_polished", p.J_polished},
                      {"rel_loss", p.rel_performance_loss},
                      {"rel_card", p.rel_cardinality},
                      {"iterations", p.iterations},
                      {"wall_time_s", p.wall_time},
                      {"connected", p.closed_loop_connected}});
  }
  const SolveReport& s = r.solve;
  json j{{"format", r.format},
         {"prng", r.prng},
         {"config", config_json(r.config)},
         {"problem",
          {{"n", r.n},
           {"m", r.m},
           {"plant_edges", r.plant_edges},
           {"connected", r.connected},
           {"gamma", r.gamma}}},
         {"solution", edges_json(r.solution)},
         {"polished", edges_json(r.polished)},
         {"objective",
          {{"J", r.J},
           {"J_polished", r.J_polished},
           {"J_c", r.J_c},
           {"rel_loss", r.rel_loss},
           {"rel_card", r.rel_card}}},
         {"certificate",
          {{"available", r.certificate_available},
           {"gap", r.gap},
           {"rd_norm", r.rd_norm},
           {"beta", r.beta}}},
         {"solve",
          {{"method", s.method},
           {"status", to_string(s.status)},
           {"iterations", s.iterations},
           {"objective_trace", s.objective_trace},
           {"step_trace", s.step_trace},
           {"gap_trace", s.gap_trace},
           {"wall_time_s", s.wall_time},
           {"final_J", s.final_J},
           {"final_objective", s.final_objective},
           {"primal_value", s.primal_value},
           {"dual_value", s.dual_value}}},
         {"tradeoff", points}};
  return j.dump(2);
}

RunReport report_from_json_string(const std::string& text) {
  try {
    const json j = json::parse(text);
    RunReport r;
    r.format = j.at("format");
    if (r.format != kReportFormat) {
      throw InvalidInput("report: unsupported format '" + r.format + "'");
    }
    r.prng = j.at("prng");
    r.config = config_from(j.at("config"));
    const json& p = j.at("problem");
    r.n = p.at("n");
    r.m = p.at("m");
    r.plant_edges = p.at("plant_edges");
    r.connected = p.at("connected");
    r.gamma = p.at("gamma");
    r.solution = edges_from(j.at("solution"));
    r.polished = edges_from(j.at("polished"));
    const json& o = j.at("objective");
    r.J = num(o.at("J"));
    r.J_polished = num(o.at("J_polished"));
    r.J_c = num(o.at("J_c"));
    r.rel_loss = num(o.at("rel_loss"));
    r.rel_card = o.at("rel_card");
    const json& c = j.at("certificate");
    r.certificate_available = c.at("available");
    r.gap = c.at("gap");
    r.rd_norm = c.at("rd_norm");
    r.beta = c.at("beta");
    const json& s = j.at("solve");
    r.solve.method = s.at("method");
    r.solve.status = parse_solve_status(s.at("status"));
    r.solve.iterations = s.at("iterations");
    r.solve.objective_trace = s.at("objective_trace").get<std::vector<double>>();
    r.solve.step_trace = s.at("step_trace").get<std::vector<double>>();
    r.solve.gap_trace = s.at("gap_trace").get<std::vector<double>>();
    r.solve.wall_time = s.at("wall_time_s");
    r.solve.final_J = num(s.at("final_J"));
    r.solve.final_objective = num(s.at("final_objective"));
    r.solve.primal_value = s.at("primal_value");
    r.solve.dual_value = s.at("dual_value");
    r.solve.final_gap = r.gap;
    r.solve.final_rd_norm = r.rd_norm;
    r.solve.final_beta = r.beta;
    r.solve.certificate_available = r.certificate_available;
    for (const auto& t : j.at("tradeoff")) {
      TradeoffPoint pt;
      pt.gamma = t.at("gamma");
      pt.cardinality = t.at("cardinality");
      pt.J_sparse = num(t.at("J_sparse"));
      pt.J_polished = num(t.at("J_polished"));
      pt.rel_performance_loss = num(t.at("rel_loss"));
      pt.rel_cardinality = t.at("rel_card");
      pt.iterations = t.at("iterations");
      pt.wall_time = t.at("wall_time_s");
      pt.closed_loop_connected = t.at("connected");
      r.tradeoff.push_back(pt);
    }
    return r;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("report: ") + e.what());
  }
}

void write_report_file(const std::string& path, const RunReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report '" + path + "'");
  out << to_json_string(report) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

RunReport read_report_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return report_from_json_string(ss.str());
}

std::string tradeoff_csv(const std::vector<TradeoffPoint>& points, bool with_timing) {
  if (points.empty()) throw InvalidInput("tradeoff csv: no points");
  std::vector<const TradeoffPoint*> order;
  for (const auto& p : points) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto* a, const auto* b) { return a->gamma < b->gamma; });
  std::string out = "gamma,cardinality,J_sparse,J_polished,rel_loss,rel_card,iterations,wall_time_s\n";
  for (const auto* p : order) {
    out += fmt12(p->gamma) + ',' + std::to_string(p->cardinality) + ',' +
           fmt12(p->J_sparse) + ',' + fmt12(p->J_polished) + ',' +
           fmt12(p->rel_performance_loss) + ',' + fmt12(p->rel_cardinality) + ',' +
           std::to_string(p->iterations) + ',' +
           fmt12(with_timing ? p->wall_time : 0.0) + '\n';
  }
  return out;
}

void write_tradeoff_csv(const std::vector<TradeoffPoint>& points,
                        const std::string& path, bool with_timing) {
  const std::string text = tradeoff_csv(points, with_timing);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write csv '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace gsp
