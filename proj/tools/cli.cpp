#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "fuzzyflow/anfis.hpp"
#include "fuzzyflow/error.hpp"
#include "fuzzyflow/flowgraph.hpp"
#include "fuzzyflow/json_writer.hpp"
#include "fuzzyflow/lcm.hpp"
#include "fuzzyflow/solver.hpp"

namespace fuzzyflow::cli {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string fmt_truth(const TruthInterval& v) {
  if (v.degenerate()) return fmt(v.lo().value(), "%.6f");
  return "[" + fmt(v.lo().value(), "%.6f") + ", " + fmt(v.hi().value(), "%.6f") + "]";
}

/// Options shared by the analysis commands; the config file fills in
/// whatever was not given on the command line.
struct Common {
  std::string file;
  std::string config;
  bool pretty = false;
  double epsilon = 1e-6;
  std::size_t max_iters = 100000;
  std::string logic;
  std::string mode;
  std::optional<int> snap_bits;
  std::string trace;
  bool seed_trace = false;
  unsigned jobs = 1;
  double threshold = 0.95;
};

struct TrainOpts {
  std::string samples;
  std::string models;
  std::string save;
  std::size_t per_dim = 3;
  std::string and_op = "min";
  double mu = 0.05;
  double retrain = 0.8;
  std::size_t period = 25;
  bool csv = false;
  bool pretty = false;
};

void apply_config(const std::string& path, const CLI::App& app, Common& c) {
  if (path.empty()) return;
  const json doc = json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ParseError("config is not a JSON object", 0, 0);
  const auto given = [&](const char* flag) { return app.count(flag) > 0; };
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    try {
      if (key == "epsilon") {
        if (!given("--epsilon")) c.epsilon = v.get<double>();
      } else if (key == "max_iters") {
        if (!given("--max-iters")) c.max_iters = v.get<std::size_t>();
      } else if (key == "logic") {
        if (!given("--logic")) c.logic = v.get<std::string>();
      } else if (key == "mode") {
        if (!given("--mode")) c.mode = v.get<std::string>();
      } else if (key == "snap_bits") {
        if (!given("--snap-bits")) c.snap_bits = v.get<int>();
      } else if (key == "jobs") {
        if (!given("--jobs")) c.jobs = v.get<unsigned>();
      } else if (key == "threshold") {
        if (!given("--threshold")) c.threshold = v.get<double>();
      } else if (key == "pretty") {
        if (!given("--pretty")) c.pretty = v.get<bool>();
      } else {
        throw ParseError("config: unknown key '" + key + "'", 0, 0);
      }
    } catch (const json::exception&) {
      throw ParseError("config: bad value for '" + key + "'", 0, 0);
    }
  }
}

SolverConfig solver_config(const Common& c, const LogicFamily& file_logic) {
  SolverConfig cfg;
  cfg.epsilon = c.epsilon;
  cfg.max_iters = c.max_iters;
  cfg.snap_bits = c.snap_bits;
  cfg.family = c.logic.empty() ? file_logic : LogicFamily::parse(c.logic);
  cfg.check();
  return cfg;
}

template <class T>
void emit_trace(const Common& c, const SolveReport<T>& r, std::ostream& err) {
  if (c.trace.empty() && !c.seed_trace) return;
  std::ostringstream csv;
  csv << "iteration,residual,error\n";
  for (std::size_t i = 0; i < r.residual_trace.size(); ++i) {
    csv << i + 1 << ',' << fmt(r.residual_trace[i], "%.17g") << ',' << fmt(r.error_trace.at(i), "%.17g") << '\n';
  }
  if (!c.trace.empty()) write_file(c.trace, csv.str());
  if (c.seed_trace) err << csv.str();
}

template <class T>
void print_solve_pretty(const SolveReport<T>& r, std::ostream& out) {
  out << (r.converged ? "converged" : "NOT converged") << " after " << r.iterations << " iterations";
  if (!r.residual_trace.empty()) out << " (last residual " << fmt(r.residual_trace.back()) << ")";
  out << '\n';
  std::size_t width = 4;
  for (const auto& [node, val] : r.final) width = std::max(width, node.size());
  for (const auto& [node, val] : r.final) {
    for (const auto& [prop, v] : val) {
      out << "  " << node << std::string(width - node.size() + 2, ' ') << prop << " = ";
      if constexpr (std::is_same_v<T, TruthValue>) {
        out << fmt(v.value(), "%.6f");
      } else {
        out << fmt_truth(v);
      }
      out << '\n';
    }
  }
}

int cmd_solve(const Common& c, std::ostream& out, std::ostream& err) {
  const FlowProblem problem = parse_flow_problem(read_file(c.file));
  SolverConfig cfg = solver_config(c, problem.logic);
  cfg.record_error_trace = c.seed_trace || !c.trace.empty();
  const std::string mode = c.mode.empty() ? "scalar" : c.mode;
  for (const auto& v : validate(problem.graph)) {
    if (v.is_warning()) err << "warning: " << v.to_string() << '\n';
  }
  const auto finish = [&](const auto& report) {
    emit_trace(c, report, err);
    if (c.pretty) {
      print_solve_pretty(report, out);
    } else {
      out << dump_json(to_json(report)) << '\n';
    }
    return report.converged ? ok : not_converged;
  };
  if (mode == "scalar" || mode == "fuzzy") {
    cfg.mode = SolveMode::scalar;
    return finish(solve(problem.graph, cfg));
  }
  if (mode == "interval") {
    cfg.mode = SolveMode::interval;
    return finish(solve_interval(problem.graph, cfg));
  }
  throw ValueError("unknown solve mode '" + mode + "' (expected scalar or interval)");
}

int cmd_lcm(const Common& c, std::ostream& out, std::ostream&) {
  const LcmProblem problem = parse_lcm_problem(read_file(c.file));
  const SolverConfig cfg = solver_config(c, problem.logic);
  const LcmMode mode = c.mode.empty() ? problem.mode : parse_lcm_mode(c.mode);
  unsigned jobs = c.jobs;
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const LcmResult r = lcm_pipeline(problem, mode, cfg, jobs);
  if (c.pretty) {
    out << format_report(problem, r, c.threshold);
  } else {
    out << dump_json(to_json(problem, r)) << '\n';
  }
  return r.converged ? ok : not_converged;
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValueError("'" + item + "' is not a number");
    }
  }
  return v;
}

int cmd_predict(const std::string& file, const std::string& input, bool pretty, std::ostream& out) {
  const AnfisModel m = parse_anfis_model(read_file(file));
  const auto x = parse_vector(input);
  const Prediction p = predict(m, x);
  if (pretty) {
    out << "output " << fmt(p.output, "%.6f") << '\n';
    out << "rule  w         w_norm    f\n";
    for (std::size_t i = 0; i < p.firing.size(); ++i) {
      char line[96];
      std::snprintf(line, sizeof line, "%-4zu  %-8.6f  %-8.6f  %.6f\n", i + 1, p.firing[i], p.normalized[i],
                    p.consequents[i]);
      out << line;
    }
  } else {
    out << dump_json({{"output", p.output},
                      {"firing", p.firing},
                      {"normalized", p.normalized},
                      {"consequents", p.consequents}})
        << '\n';
  }
  return ok;
}

int cmd_train(const TrainOpts& o, std::ostream& out) {
  const auto samples = parse_samples_csv(read_file(o.samples));
  if (samples.empty()) throw ValueError("no samples in '" + o.samples + "'");
  const std::size_t dim = samples.front().x.size();
  ModelPair models;
  if (!o.models.empty()) {
    models = parse_model_pair(read_file(o.models));
  } else {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : samples) {
      for (double v : s.x) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (!(lo < hi)) {
      lo -= 0.5;
      hi += 0.5;
    }
    models.update = uniform_partition(dim, o.per_dim, lo, hi, parse_and_op(o.and_op));
    models.leave = models.update;
  }
  TrainConfig tc{o.mu, o.retrain};
  const HarnessResult r = run_harness(models.update, models.leave, split_periods(samples, o.period), tc);
  if (!o.save.empty()) write_file(o.save, dump_json(to_json(ModelPair{r.update, r.leave})) + "\n");
  if (o.csv || o.pretty) {
    out << "period,error_rate\n";
    for (std::size_t i = 0; i < r.error_rates.size(); ++i) {
      out << i + 1 << ',' << fmt(r.error_rates[i], o.pretty ? "%.4f" : "%.17g") << '\n';
    }
  } else {
    json periods = json::array();
    for (std::size_t i = 0; i < r.error_rates.size(); ++i) {
      periods.push_back({{"period", i + 1}, {"error_rate", r.error_rates[i]}});
    }
    out << dump_json({{"periods", periods}, {"error_rates", r.error_rates}}) << '\n';
  }
  return ok;
}

int cmd_validate(const std::string& file, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(file);
  const json doc = json::parse(text, nullptr, false);
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  std::string kind;
  if (doc.is_object() && doc.contains("blocks")) {
    kind = "lcm problem";
    const LcmProblem p = parse_lcm_problem(text);
    errors = validate(p, p.mode);
  } else if (doc.is_object() && doc.contains("rules")) {
    kind = "anfis model";
    parse_anfis_model(text);
  } else if (doc.is_object() && doc.contains("update")) {
    kind = "anfis model pair";
    parse_model_pair(text);
  } else {
    // Also the fallback, so syntax errors are reported with a position.
    kind = "flow problem";
    const FlowProblem p = parse_flow_problem(text);
    for (const auto& v : validate(p.graph)) (v.is_warning() ? warnings : errors).push_back(v.to_string());
  }
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  for (const auto& e : errors) err << "error: " << e << '\n';
  if (!errors.empty()) {
    out << "invalid " << kind << '\n';
    return failure;
  }
  out << "ok (" << kind << ")\n";
  return ok;
}

void add_analysis_options(CLI::App* sub, Common& c) {
  sub->add_option("file", c.file, "problem file (JSON)")->required();
  sub->add_option("--config", c.config, "JSON file with default option values");
  sub->add_option("--epsilon", c.epsilon, "stop when the l1 residual drops below this");
  sub->add_option("--max-iters", c.max_iters, "iteration limit");
  sub->add_option("--logic", c.logic, "minmax, product, lukasiewicz, nilpotent or frank:<s>");
  sub->add_flag("--pretty", c.pretty, "human-readable output instead of JSON");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuzzy data-flow analysis, lazy code motion and ANFIS tools", "fuzzyflow"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  Common solve_opts;
  auto* solve_cmd = app.add_subcommand("solve", "solve a weighted flow graph to its fixed point");
  add_analysis_options(solve_cmd, solve_opts);
  solve_cmd->add_option("--mode", solve_opts.mode, "scalar (default) or interval");
  solve_cmd->add_option("--snap-bits", solve_opts.snap_bits, "snap iterates to multiples of 2^-q");
  solve_cmd->add_option("--trace", solve_opts.trace, "write the residual trace as CSV");
  solve_cmd->add_flag("--seed-trace", solve_opts.seed_trace, "print the residual trace to stderr");

  Common lcm_opts;
  auto* lcm_cmd = app.add_subcommand("lcm", "run lazy code motion on a problem file");
  add_analysis_options(lcm_cmd, lcm_opts);
  lcm_cmd->add_option("--mode", lcm_opts.mode, "crisp, fuzzy or interval (default: from the file)");
  lcm_cmd->add_option("--jobs", lcm_opts.jobs, "analyse expressions in parallel (0 = all cores)");
  lcm_cmd->add_option("--threshold", lcm_opts.threshold, "degree listed as a plausible motion in --pretty output");

  std::string predict_file, predict_input;
  bool predict_pretty = false;
  auto* predict_cmd = app.add_subcommand("anfis-predict", "evaluate an ANFIS model");
  predict_cmd->add_option("model", predict_file, "model file (JSON)")->required();
  predict_cmd->add_option("--input", predict_input, "comma separated input vector")->required();
  predict_cmd->add_flag("--pretty", predict_pretty, "human-readable output");

  TrainOpts train;
  auto* train_cmd = app.add_subcommand("anfis-train", "run the periodic decision harness");
  train_cmd->add_option("samples", train.samples, "CSV with input columns and a 0/1 label column")->required();
  train_cmd->add_option("--models", train.models, "JSON with \"update\" and \"leave\" models");
  train_cmd->add_option("--per-dim", train.per_dim, "membership functions per input without --models");
  train_cmd->add_option("--and-op", train.and_op, "min or product, without --models");
  train_cmd->add_option("--mu", train.mu, "LMS step size");
  train_cmd->add_option("--retrain-threshold", train.retrain, "period error rate that triggers a LS refit");
  train_cmd->add_option("--period", train.period, "samples per period");
  train_cmd->add_option("--save", train.save, "write the trained model pair here");
  train_cmd->add_flag("--csv", train.csv, "CSV output");
  train_cmd->add_flag("--pretty", train.pretty, "rounded CSV output");

  std::string validate_file;
  auto* validate_cmd = app.add_subcommand("validate", "check a problem or model file");
  validate_cmd->add_option("file", validate_file, "file to check")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : failure;
  }

  try {
    if (solve_cmd->parsed()) {
      apply_config(solve_opts.config, *solve_cmd, solve_opts);
      return cmd_solve(solve_opts, out, err);
    }
    if (lcm_cmd->parsed()) {
      apply_config(lcm_opts.config, *lcm_cmd, lcm_opts);
      return cmd_lcm(lcm_opts, out, err);
    }
    if (predict_cmd->parsed()) return cmd_predict(predict_file, predict_input, predict_pretty, out);
    if (train_cmd->parsed()) return cmd_train(train, out);
    if (validate_cmd->parsed()) return cmd_validate(validate_file, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return failure;
  }
  return failure;
}

}  // namespace fuzzyflow::cli
