#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "fuzzyflow/error.hpp"
#include "fuzzyflow/solver.hpp"
#include "support.hpp"

using namespace fuzzyflow;

namespace {

FlowGraph fig1() { return parse_flow_problem(fftest::read_data("fig1.json")).graph; }

double out(const GlobalState<TruthValue>& s, const char* node, const char* prop = "Out") {
  return s.at(node).at(prop).value();
}

SolverConfig minmax(double eps = 1e-6) {
  SolverConfig cfg;
  cfg.epsilon = eps;
  return cfg;
}

}  // namespace

TEST(Solver, FirstStepOfFigureOne) {
  const auto s1 = step(fig1(), initial_state(fig1()), LogicFamily::min_max());
  EXPECT_DOUBLE_EQ(out(s1, "B2"), 0.8);
  EXPECT_EQ(out(s1, "B1"), 0.0);
  EXPECT_EQ(out(s1, "B0"), 0.0);
}

TEST(Solver, FigureOneFixedPoint) {
  const auto r = solve(fig1(), minmax());
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(out(r.final, "B1"), 9.0 / 19.0, 1e-5);
  EXPECT_NEAR(out(r.final, "B3"), 9.0 / 19.0, 1e-5);
  EXPECT_NEAR(out(r.final, "B2"), 10.0 / 19.0, 1e-5);
  EXPECT_LT(r.residual_trace.back(), 1e-6);
  EXPECT_EQ(r.residual_trace.size(), r.iterations);
}

TEST(Solver, FigureOneBruteForceCrossCheck) {
  // Plain scalar iteration of the three equations, far past convergence.
  double b1 = 0, b2 = 0, b3 = 0;
  for (int i = 0; i < 2000; ++i) {
    const double n1 = 0.1 * 0.0 + 0.9 * b2;
    const double n2 = std::min(0.8, std::max(1.0 - b1, 0.3));
    const double n3 = b1;
    b1 = n1, b2 = n2, b3 = n3;
  }
  const auto r = solve(fig1(), minmax(1e-12));
  EXPECT_NEAR(out(r.final, "B1"), b1, 1e-10);
  EXPECT_NEAR(out(r.final, "B2"), b2, 1e-10);
  EXPECT_NEAR(out(r.final, "B3"), b3, 1e-10);
}

// The distance to the fixed point falls at every step, while the step-to-step
// residual of the simultaneous update alternates on this graph.
TEST(Solver, FigureOneErrorDecreases) {
  const FlowGraph g = fig1();
  const auto exact = [](const GlobalState<TruthValue>& s) {
    return std::abs(out(s, "B1") - 9.0 / 19) + std::abs(out(s, "B2") - 10.0 / 19) + std::abs(out(s, "B3") - 9.0 / 19);
  };
  auto s = initial_state(g);
  double previous = exact(s);
  for (int k = 1; k <= 250; ++k) {
    s = step(g, s, LogicFamily::min_max());
    const double d = exact(s);
    EXPECT_LT(d, previous) << "iteration " << k;
    previous = d;
  }
  const auto r = solve(g, minmax());
  EXPECT_GT(r.residual_trace[2], r.residual_trace[1]);
}

// The recorded error trace measures against the final iterate instead.
TEST(Solver, ErrorTraceEndsAtZero) {
  SolverConfig cfg = minmax();
  cfg.record_error_trace = true;
  const auto r = solve(fig1(), cfg);
  ASSERT_EQ(r.error_trace.size(), r.iterations);
  EXPECT_EQ(r.error_trace.back(), 0.0);
  EXPECT_NEAR(r.error_trace.front(), 9.0 / 19 + (0.8 - 10.0 / 19) + 9.0 / 19, 1e-5);
  EXPECT_TRUE(solve(fig1(), minmax()).error_trace.empty());
}

TEST(Solver, HugeEpsilonStopsAfterOneStep) {
  const auto r = solve(fig1(), minmax(2.0 * 4));
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1u);
}

TEST(Solver, StartOnlyGraph) {
  const FlowGraph g({FlowNode{"s", {}, std::nullopt}}, {}, "s", {{"p", TruthInterval(TruthValue(0.4))}});
  const auto s0 = initial_state(g);
  EXPECT_EQ(step(g, s0, LogicFamily::min_max()), s0);
  const auto r = solve(g, minmax());
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.final.at("s").at("p").value(), 0.4);
}

TEST(Solver, IdentityChainPropagatesInTwoSteps) {
  const FlowGraph g({FlowNode{"s", {}, std::nullopt}, FlowNode{"a", {}, std::nullopt}, FlowNode{"b", {}, std::nullopt}},
                    {{"s", "a", 1}, {"a", "b", 1}}, "s", {{"p", TruthInterval(TruthValue(0.7))}});
  auto s = initial_state(g);
  s = step(g, s, LogicFamily::min_max());
  EXPECT_EQ(s.at("b").at("p").value(), 0.0);
  s = step(g, s, LogicFamily::min_max());
  EXPECT_EQ(s.at("b").at("p").value(), 0.7);
}

TEST(Solver, ConstantGraphConvergesQuickly) {
  FlowNode a{"a", {{"p", Formula::constant(0.3)}}, std::nullopt};
  FlowNode b{"b", {{"p", Formula::constant(0.9) & Formula::var("In")}}, std::nullopt};
  const FlowGraph g({FlowNode{"s", {}, std::nullopt}, a, b}, {{"s", "a", 1}, {"s", "b", 1}}, "s",
                    {{"p", TruthInterval::top()}});
  const auto r = solve(g, minmax());
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 2u);
  EXPECT_DOUBLE_EQ(r.final.at("a").at("p").value(), 0.3);
  EXPECT_DOUBLE_EQ(r.final.at("b").at("p").value(), 0.9);
}

TEST(Solver, NonConvergenceIsReported) {
  // Negation around a pure 2-cycle oscillates forever.
  FlowNode a{"a", {{"p", !Formula::var("In")}}, std::nullopt};
  FlowNode b{"b", {}, std::nullopt};
  FlowNode s{"s", {}, std::nullopt};
  const FlowGraph g({s, a, b}, {{"b", "a", 1}, {"a", "b", 1}}, "s", {{"p", TruthInterval::bottom()}});
  SolverConfig cfg = minmax();
  cfg.max_iters = 50;
  const auto r = solve(g, cfg, GlobalState<TruthValue>{{"s", {{"p", TruthValue(0)}}},
                                                        {"a", {{"p", TruthValue(1)}}},
                                                        {"b", {{"p", TruthValue(0)}}}});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 50u);
}

TEST(Solver, ConfigChecks) {
  SolverConfig cfg;
  cfg.epsilon = 0;
  EXPECT_THROW(solve(fig1(), cfg), ValueError);
  cfg = SolverConfig{};
  cfg.max_iters = 0;
  EXPECT_THROW(solve(fig1(), cfg), ValueError);
  cfg = SolverConfig{};
  cfg.snap_bits = 0;
  EXPECT_THROW(solve(fig1(), cfg), ValueError);
}

TEST(Solver, InvalidGraphRejected) {
  const FlowGraph g({FlowNode{"s", {}, std::nullopt}}, {{"s", "x", 1}}, "s", {{"p", TruthInterval::bottom()}});
  EXPECT_THROW(solve(g, minmax()), ValidationError);
}

TEST(Solver, SnappingStaysOnGrid) {
  SolverConfig cfg = minmax();
  cfg.snap_bits = 10;
  cfg.max_iters = 2000;
  // On the grid the iteration may end in a short cycle instead of a fixed
  // point; it stays within a few grid steps of the exact solution either way.
  const auto r = solve(fig1(), cfg);
  for (const auto& [node, v] : r.final) {
    const double x = v.at("Out").value() * 1024.0;
    EXPECT_EQ(x, std::round(x)) << node;
  }
  EXPECT_NEAR(out(r.final, "B1"), 9.0 / 19.0, 4.0 / 1024);
  EXPECT_NEAR(out(r.final, "B2"), 10.0 / 19.0, 4.0 / 1024);
  EXPECT_LE(r.residual_trace.back(), 8.0 / 1024);
}

TEST(Solver, IntervalDegenerateMatchesScalar) {
  const auto s = solve(fig1(), minmax());
  const auto i = solve_interval(fig1(), minmax());
  // Both endpoints count towards the interval residual, so it may take a few
  // more steps; the iterates themselves stay degenerate.
  EXPECT_GE(i.iterations, s.iterations);
  for (const auto& [node, v] : s.final) {
    const auto& iv = i.final.at(node).at("Out");
    EXPECT_EQ(iv.lo(), iv.hi());
    EXPECT_NEAR(iv.lo().value(), v.at("Out").value(), 1e-6);
  }
}

TEST(Solver, WideningSeedWidensResult) {
  fftest::Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    const FlowGraph g = fftest::random_flow_graph(rng, 5, {"p"});
    Valuation<TruthInterval> wide;
    for (const auto& [k, v] : g.seed()) {
      wide.emplace(k, TruthInterval(std::max(0.0, v.lo().value() - 0.2), std::min(1.0, v.hi().value() + 0.2)));
    }
    const FlowGraph gw(g.nodes(), g.edges(), g.start(), wide);
    SolverConfig cfg = minmax(1e-12);
    cfg.max_iters = 300;
    const auto narrow = solve_interval(g, cfg);
    const auto broad = solve_interval(gw, cfg);
    // Compare iterates after the same number of steps; containment is
    // preserved at every step by monotonicity of the lifted operations.
    cfg.max_iters = std::min(narrow.iterations, broad.iterations);
    const auto a = solve_interval(g, cfg);
    const auto b = solve_interval(gw, cfg);
    for (const auto& [node, v] : a.final) {
      const auto& x = v.at("p");
      const auto& y = b.final.at(node).at("p");
      EXPECT_LE(y.lo().value(), x.lo().value() + 1e-12);
      EXPECT_GE(y.hi().value(), x.hi().value() - 1e-12);
    }
  }
}

TEST(Solver, L1Distance) {
  GlobalState<TruthValue> a{{"n", {{"p", TruthValue(0.2)}, {"q", TruthValue(0.5)}}}};
  GlobalState<TruthValue> b{{"n", {{"p", TruthValue(0.7)}, {"q", TruthValue(0.25)}}}};
  EXPECT_DOUBLE_EQ(l1_distance(a, b), 0.75);
  GlobalState<TruthValue> c{{"m", {{"p", TruthValue(0.2)}, {"q", TruthValue(0.5)}}}};
  EXPECT_THROW(l1_distance(a, c), ValueError);
  GlobalState<TruthInterval> x{{"n", {{"p", TruthInterval(0.1, 0.4)}}}};
  GlobalState<TruthInterval> y{{"n", {{"p", TruthInterval(0.2, 0.2)}}}};
  EXPECT_DOUBLE_EQ(l1_distance(x, y), 0.3);
}

TEST(Solver, FigureOneIsFast) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = solve(fig1(), minmax());
  const auto elapsed = std::chrono::steady_clock::now() - t0;
  EXPECT_TRUE(r.converged);
  EXPECT_LT(std::chrono::duration<double>(elapsed).count(), 1.0);
}

TEST(Solver, ReportJson) {
  const auto r = solve(fig1(), minmax());
  const auto j = to_json(r);
  EXPECT_EQ(j.at("converged"), true);
  EXPECT_EQ(j.at("iterations"), r.iterations);
  EXPECT_EQ(j.at("residual_trace").size(), r.iterations);
  EXPECT_NEAR(j.at("final").at("B2").at("Out").get<double>(), 10.0 / 19.0, 1e-5);
  EXPECT_FALSE(j.contains("error_trace"));
}
