#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gsp/report.hpp"
#include "instances.hpp"

namespace gsp {
namespace {

TEST_CASE("gamma_max of the path-3 instance") {
  CHECK(std::abs(gamma_max(test::p3()) - 2.0) < 1e-12);
  CHECK_THROWS_AS(gamma_max(test::two_node()), InvalidInput);
}

TEST_CASE("at gamma_max the resistive solution is empty") {
  const Problem base = test::er(12, 31, true);
  const double gmax = gamma_max(base);
  SolverOptions o;
  const auto [x, rep] = solve(base.with_gamma(gmax * 1.0001), VectorXd::Zero(base.m()), o);
  CHECK(x.cwiseAbs().maxCoeff() == 0.0);
  const auto [y, rep2] = solve(base.with_gamma(gmax * 0.95), VectorXd::Zero(base.m()), o);
  CHECK(y.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("method dispatch") {
  CHECK(parse_method("proxbb") == Method::ProxBB);
  CHECK(to_string(Method::ProjGrad) == "projgrad");
  CHECK_THROWS_AS(parse_method("admm"), InvalidInput);
  SolverOptions o;
  o.method = Method::ProjGrad;
  CHECK_THROWS_AS(solve(test::two_node(), VectorXd::Ones(1), o), InvalidInput);
  o.method = Method::ProxBB;
  CHECK(solve(test::p3(1.0), VectorXd::Zero(1), o).second.method == "projgrad");
  CHECK(solve(test::two_node(1.0), VectorXd::Ones(1), o).second.method == "proxbb");
}

TEST_CASE("default start") {
  CHECK(default_start(test::p3()) == VectorXd::Zero(1));
  CHECK(default_start(test::two_node()) == VectorXd::Ones(1));
  const Problem p = make_problem(EdgeList{4, {}}, EdgeList{4, {{0, 1, 1.0}}}, 0.0, false);
  CHECK_THROWS_AS(default_start(p), Infeasible);
}

TEST_CASE("support and reweighting") {
  VectorXd x(4);
  x << 0.0, 1e-7, -0.5, 2.0;
  CHECK(support_of(x, 1e-6) == std::vector<int>{2, 3});
  const VectorXd w = reweight(x, 0.5);
  CHECK(w(0) == 2.0);
  CHECK(w(3) == doctest::Approx(0.4));
  CHECK_THROWS_AS(reweight(x, 0.0), InvalidInput);
}

TEST_CASE("polishing re-optimizes on the support") {
  const Problem p = test::p3(1.5);
  const Polished pol = polish(p, {0}, SolverOptions{});
  CHECK(std::abs(pol.x(0) - test::p3_opt(0.0)) < 1e-5);
  CHECK(pol.J == doctest::Approx(test::p3_J(test::p3_opt(0.0))).epsilon(1e-9));
  const Polished empty = polish(p, {}, SolverOptions{});
  CHECK(empty.J == doctest::Approx(test::p3_J(0.0)));
  CHECK_THROWS_AS(polish(test::two_node(), {}, SolverOptions{}), Infeasible);
}

TEST_CASE("sweep over the path-3 family") {
  const Problem p = test::p3();
  SweepOptions o;
  const auto res = sweep(p, {3.0, 0.0, 1.0, 0.5}, o);
  REQUIRE(res.points.size() == 4);
  CHECK(res.points[0].gamma == 0.0);
  CHECK(res.points[3].gamma == 3.0);
  CHECK(res.points[0].rel_performance_loss == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(res.points[3].cardinality == 0);
  CHECK(res.points[1].cardinality == 1);
  CHECK(std::abs(res.points[2].x(0) - test::p3_opt(1.0)) < 1e-5);
  CHECK(res.J_c == doctest::Approx(test::p3_J(test::p3_opt(0.0))).epsilon(1e-9));
}

TEST_CASE("parallel sweep matches the serial cold-start sweep") {
  const Problem p = test::er(12, 41, true);
  const auto grid = log_grid(0.05, 0.8 * gamma_max(p), 5);
  SweepOptions serial;
  serial.warm_start = false;
  SweepOptions parallel = serial;
  parallel.jobs = 3;
  const auto a = sweep(p, grid, serial);
  const auto b = sweep(p, grid, parallel);
  CHECK_FALSE(a.parallel);
  CHECK(b.parallel);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].x == b.points[i].x);
    CHECK(a.points[i].J_polished == b.points[i].J_polished);
  }
}

TEST_CASE("reweighted path keeps disconnected plants connected") {
  const EdgeList plant{6, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}}};
  const Problem p = make_problem(plant, complement_candidates(plant), 0.0, false);
  SweepOptions o;
  o.reweighting = true;
  const auto res = sweep(p, log_grid(1e-3, 2.5, 8), o);
  for (const auto& pt : res.points) {
    CHECK(pt.closed_loop_connected);
    CHECK(pt.cardinality >= 1);
  }
  CHECK(res.points.back().cardinality <= res.points.front().cardinality);
  CHECK_THROWS_AS(reweighted_path(p, {1.0, 0.5}, 1e-3, SolverOptions{}), InvalidInput);
}

TEST_CASE("log grid") {
  const auto g = log_grid(1e-3, 2.5, 200);
  CHECK(g.size() == 200);
  CHECK(g.front() == 1e-3);
  CHECK(g.back() == 2.5);
  CHECK(g[100] / g[99] == doctest::Approx(g[1] / g[0]));
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), InvalidInput);
}

TEST_CASE("gamma specifications") {
  const Problem p = test::p3();
  const auto a = parse_gamma_spec("0.8gmax", p);
  REQUIRE(a.size() == 1);
  CHECK(a[0] == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(parse_gamma_spec("0", p) == std::vector<double>{0.0});
  const auto b = parse_gamma_spec("log:1e-3:2.5:200", p);
  CHECK(b.size() == 200);
  CHECK(b.front() == 1e-3);
  CHECK(b.back() == 2.5);
  CHECK(parse_gamma_spec("1,0.5,0", p) == std::vector<double>{0.0, 0.5, 1.0});
  const auto c = parse_gamma_spec("log:0.1gmax:1gmax:3", p);
  CHECK(c.back() == doctest::Approx(2.0));
  CHECK_THROWS_AS(parse_gamma_spec("0.5gmax", test::two_node()), InvalidInput);
  CHECK_THROWS_AS(parse_gamma_spec("abc", p), InvalidInput);
  CHECK_THROWS_AS(parse_gamma_spec("-1", p), InvalidInput);
  CHECK_THROWS_AS(parse_gamma_spec("log:1:2", p), InvalidInput);
}

TEST_CASE("weight specifications") {
  const WeightSpec w = parse_weight_spec("q=2,r=0.5");
  CHECK(w.q == 2.0);
  CHECK(w.r == 0.5);
  CHECK_THROWS_AS(parse_weight_spec("q=0"), InvalidInput);
  CHECK_THROWS_AS(parse_weight_spec("s=1"), InvalidInput);
}

TEST_CASE("report round trip") {
  RunReport r;
  r.config.command = "sweep";
  r.config.plant_path = "plant.edges";
  r.config.gamma_spec = "log:1e-3:2.5:200";
  r.config.seed = 18446744073709551615ull;
  r.config.solver.method = Method::ProxBB;
  r.config.solver.grad.report_every = 3;
  r.config.solver.newton.sigma = 0.02;
  r.n = 3;
  r.m = 1;
  r.solution = {{0, 2, 0.0773502691896258}};
  r.J = 1.0 / 3.0;
  r.J_c = 0.1 + 0.2;
  r.solve.status = SolveStatus::Stalled;
  r.solve.objective_trace = {3.0, 2.0, 1.0 / 7.0};
  TradeoffPoint pt;
  pt.gamma = 0.25;
  pt.J_sparse = std::numeric_limits<double>::quiet_NaN();
  pt.cardinality = 4;
  r.tradeoff = {pt};
  const RunReport back = report_from_json_string(to_json_string(r));
  CHECK(to_json_string(back) == to_json_string(r));
  CHECK(back.config.seed == r.config.seed);
  CHECK(back.config.solver.method == Method::ProxBB);
  CHECK(back.config.solver.newton.sigma == 0.02);
  CHECK(back.solution == r.solution);
  CHECK(back.J == r.J);
  CHECK(back.solve.objective_trace == r.solve.objective_trace);
  CHECK(std::isnan(back.tradeoff[0].J_sparse));
  CHECK(back.prng == kPrngId);
  CHECK_THROWS_AS(report_from_json_string("{}"), InvalidInput);
  CHECK_THROWS_AS(report_from_json_string("not json"), InvalidInput);
}

TEST_CASE("tradeoff csv") {
  const auto res = sweep(test::p3(), {0.0, 0.5, 1.0, 3.0}, SweepOptions{});
  const std::string csv = tradeoff_csv(res.points);
  std::istringstream in(csv);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "gamma,cardinality,J_sparse,J_polished,rel_loss,rel_card,iterations,wall_time_s");
  CHECK(lines[1].rfind("0,1,", 0) == 0);
  std::vector<std::string> cols;
  std::stringstream row(lines[1]);
  for (std::string c; std::getline(row, c, ',');) cols.push_back(c);
  CHECK(std::abs(std::stod(cols[4])) < 1e-9);
  CHECK(cols[7] == "0");
  CHECK(tradeoff_csv(sweep(test::p3(), {0.0, 0.5, 1.0, 3.0}, SweepOptions{}).points) == csv);
  CHECK_THROWS_AS(tradeoff_csv({}), InvalidInput);
  CHECK_THROWS_AS(write_tradeoff_csv(res.points, "/nonexistent/dir/t.csv"), IoError);
}

}  // namespace
}  // namespace gsp
