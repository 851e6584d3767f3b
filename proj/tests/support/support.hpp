#pragma once

// Shared helpers for the test binaries: random generators, independent
// oracles and access to the bundled data files.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fuzzyflow/anfis.hpp"
#include "fuzzyflow/flowgraph.hpp"
#include "fuzzyflow/formula.hpp"
#include "fuzzyflow/lcm.hpp"
#include "fuzzyflow/logic.hpp"

namespace fftest {

using Rng = std::mt19937_64;

std::string data_path(const std::string& name);
std::string read_data(const std::string& name);

double uniform(Rng& rng, double lo = 0.0, double hi = 1.0);

/// The families covered by the non-expansiveness theorem.
std::vector<fuzzyflow::LogicFamily> frank_families();
fuzzyflow::LogicFamily random_frank_family(Rng& rng);

/// Random formula over `vars` with at most `depth` levels of connectives.
fuzzyflow::Formula random_formula(Rng& rng, const std::vector<std::string>& vars, int depth);

/// As random_formula, but every variable occurs at most once. Repeated
/// occurrences can make a Frank-family formula steeper than 1 (b & b under
/// Lukasiewicz has slope 2).
fuzzyflow::Formula random_linear_formula(Rng& rng, const std::vector<std::string>& vars, int depth);

/// Random valid flow graph: node "n0" is the start, every other node has
/// one to three incoming edges with normalized weights, every property has
/// a random transfer formula that may read any property (and "In"). With
/// `linear` the transfers are drawn by random_linear_formula.
fuzzyflow::FlowGraph random_flow_graph(Rng& rng, int nodes, const std::vector<std::string>& props,
                                       bool linear = false);

/// Random CFG for LCM: blocks B0..B{n-1}, entry B0, exit last, a spine
/// B0 -> B1 -> ... so that everything is reachable both ways, plus extra
/// random edges. Predicates are random bits.
fuzzyflow::LcmProblem random_crisp_cfg(Rng& rng, int blocks, int exprs);

/// diffPCM with branch probability p and trip count n.
fuzzyflow::LcmProblem diffpcm(double p, double n);

/// Crisp KRS computed by exhaustive search over (block, bit) states, i.e.
/// the meet-over-all-paths solution of each stage.
struct CrispOracle {
  std::vector<std::vector<bool>> av_in, av_out, an_in, an_out, later_in, del;
  std::vector<std::vector<bool>> earliest, later_out, insert;
};
CrispOracle crisp_oracle(const fuzzyflow::LcmProblem& p);

/// Least squares by the normal equations and Gaussian elimination with
/// partial pivoting. Only for well-conditioned overdetermined systems.
std::vector<double> normal_equations(const std::vector<std::vector<double>>& a, const std::vector<double>& y);

/// Design matrix of the consequent fit (rows: samples; columns: rule-major
/// w_norm_i * [1, x]).
std::vector<std::vector<double>> design_matrix(const fuzzyflow::AnfisModel& m,
                                               const std::vector<std::vector<double>>& xs);

/// The worked two-rule model.
fuzzyflow::AnfisModel paper_model(fuzzyflow::AndOp op = fuzzyflow::AndOp::min);

}  // namespace fftest
