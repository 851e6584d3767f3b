#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace fuzzyflow {

/// Triangle with feet at a and c and its peak at b.
struct TriangularMf {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  /// Throws ValueError unless a <= b <= c and all are finite.
  void check() const;
  double operator()(double x) const noexcept;

  friend bool operator==(const TriangularMf&, const TriangularMf&) = default;
};

enum class AndOp { min, product };

AndOp parse_and_op(std::string_view text);
std::string_view to_string(AndOp op);

/// IF x_1 is A_1 and ... and x_n is A_n THEN f = c_0 + c_1 x_1 + ... + c_n x_n
struct Rule {
  std::vector<TriangularMf> antecedents;
  /// n + 1 coefficients, constant term first.
  std::vector<double> consequent;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// First-order Takagi-Sugeno model.
struct AnfisModel {
  std::vector<Rule> rules;
  std::size_t dim = 0;
  AndOp and_op = AndOp::min;

  /// Throws ValueError or DimensionMismatch on an inconsistent model.
  void check() const;
  std::size_t coefficient_count() const noexcept { return rules.size() * (dim + 1); }

  friend bool operator==(const AnfisModel&, const AnfisModel&) = default;
};

struct Prediction {
  double output = 0.0;
  /// Per rule: firing strength, normalized strength, consequent value.
  std::vector<double> firing;
  std::vector<double> normalized;
  std::vector<double> consequents;
};

/// Throws DimensionMismatch if x has the wrong size and NoRuleFires when no
/// rule has positive firing strength.
Prediction predict(const AnfisModel& m, const std::vector<double>& x);

/// One gradient step on the squared error of a single sample; only the
/// consequents change.
AnfisModel lms_update(const AnfisModel& m, const std::vector<double>& x, double target, double mu);

/// d(target - f(x))^2 / dc, laid out rule-major like the consequents.
std::vector<double> consequent_gradient(const AnfisModel& m, const std::vector<double>& x, double target);

/// Joint least-squares fit of all consequents (minimum-norm solution when
/// the design matrix is rank deficient). Antecedents are kept.
AnfisModel ls_fit(const AnfisModel& m, const std::vector<std::vector<double>>& xs, const std::vector<double>& ys);

/// Sum of squared errors of the model over a sample set.
double squared_error(const AnfisModel& m, const std::vector<std::vector<double>>& xs,
                     const std::vector<double>& ys);

/// Grid of `per_dim` overlapping triangles on [lo, hi] in every dimension,
/// one rule per grid cell, all consequents zero.
AnfisModel uniform_partition(std::size_t dim, std::size_t per_dim = 3, double lo = 0.0, double hi = 1.0,
                             AndOp and_op = AndOp::min);

struct TrainConfig {
  double mu = 0.05;
  double retrain_error_threshold = 0.8;

  void check() const;
};

struct Sample {
  std::vector<double> x;
  /// True when updating is the right decision.
  bool update = false;
};

using Period = std::vector<Sample>;

struct HarnessResult {
  /// One entry per nonempty period.
  std::vector<double> error_rates;
  AnfisModel update;
  AnfisModel leave;
};

/// Streams the periods through two scoring models. The larger score wins
/// and a tie is an error. After each error both models take an LMS step
/// (target 1 for the correct decision's model, 0 for the other); a period
/// whose error rate reaches the threshold refits both models on that
/// period with least squares.
HarnessResult run_harness(AnfisModel update, AnfisModel leave, const std::vector<Period>& periods,
                          const TrainConfig& tc);

nlohmann::json to_json(const AnfisModel& m);
AnfisModel anfis_model_from_json(const nlohmann::json& doc);
AnfisModel parse_anfis_model(std::string_view json_text);

struct ModelPair {
  AnfisModel update;
  AnfisModel leave;
};

/// {"update": model, "leave": model}
ModelPair parse_model_pair(std::string_view json_text);
nlohmann::json to_json(const ModelPair& pair);

/// CSV with a header row; the last column is named `label` and holds 0/1
/// (1 = update). Every other column is an input. Blank lines are skipped.
std::vector<Sample> parse_samples_csv(std::string_view text);
/// Consecutive chunks of `period` samples; the last one may be shorter.
std::vector<Period> split_periods(const std::vector<Sample>& samples, std::size_t period);

}  // namespace fuzzyflow
