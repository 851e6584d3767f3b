#include "fuzzyflow/anfis.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "fuzzyflow/error.hpp"

namespace fuzzyflow {

void TriangularMf::check() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
    throw ValueError("triangular membership function parameters must be finite");
  }
  if (!(a <= b && b <= c)) throw ValueError("triangular membership function needs a <= b <= c");
}

double TriangularMf::operator()(double x) const noexcept {
  if (x == b) return 1.0;
  if (x <= a || x >= c) return 0.0;
  return x < b ? (x - a) / (b - a) : (c - x) / (c - b);
}

AndOp parse_and_op(std::string_view text) {
  if (text == "min") return AndOp::min;
  if (text == "product" || text == "prod") return AndOp::product;
  throw ValueError("unknown AND operator '" + std::string(text) + "' (expected min or product)");
}

std::string_view to_string(AndOp op) { return op == AndOp::min ? "min" : "product"; }

void AnfisModel::check() const {
  if (rules.empty()) throw ValueError("model has no rules");
  if (dim == 0) throw ValueError("model dimension must be positive");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const Rule& r = rules[i];
    if (r.antecedents.size() != dim) {
      throw DimensionMismatch("rule " + std::to_string(i) + " has " + std::to_string(r.antecedents.size()) +
                              " antecedents, model dimension is " + std::to_string(dim));
    }
    if (r.consequent.size() != dim + 1) {
      throw DimensionMismatch("rule " + std::to_string(i) + " needs " + std::to_string(dim + 1) +
                              " consequent coefficients");
    }
    for (const auto& mf : r.antecedents) mf.check();
    for (double c : r.consequent) {
      if (!std::isfinite(c)) throw ValueError("consequent coefficients must be finite");
    }
  }
}

namespace {

void check_input(const AnfisModel& m, const std::vector<double>& x) {
  if (x.size() != m.dim) {
    throw DimensionMismatch("input has " + std::to_string(x.size()) + " components, model expects " +
                            std::to_string(m.dim));
  }
}

}  // namespace

Prediction predict(const AnfisModel& m, const std::vector<double>& x) {
  check_input(m, x);
  Prediction p;
  double total = 0.0;
  for (const Rule& r : m.rules) {
    double w = 1.0;
    for (std::size_t k = 0; k < m.dim; ++k) {
      const double mu = r.antecedents[k](x[k]);
      w = m.and_op == AndOp::min ? std::min(w, mu) : w * mu;
    }
    double f = r.consequent[0];
    for (std::size_t k = 0; k < m.dim; ++k) f += r.consequent[k + 1] * x[k];
    p.firing.push_back(w);
    p.consequents.push_back(f);
    total += w;
  }
  if (!(total > 0.0)) throw NoRuleFires("no rule fires for this input");
  for (std::size_t i = 0; i < m.rules.size(); ++i) {
    p.normalized.push_back(p.firing[i] / total);
    p.output += p.normalized.back() * p.consequents[i];
  }
  return p;
}

AnfisModel lms_update(const AnfisModel& m, const std::vector<double>& x, double target, double mu) {
  const Prediction p = predict(m, x);
  const double e = target - p.output;
  AnfisModel out = m;
  for (std::size_t i = 0; i < out.rules.size(); ++i) {
    auto& c = out.rules[i].consequent;
    const double g = mu * e * p.normalized[i];
    c[0] += g;
    for (std::size_t k = 0; k < m.dim; ++k) c[k + 1] += g * x[k];
  }
  return out;
}

std::vector<double> consequent_gradient(const AnfisModel& m, const std::vector<double>& x, double target) {
  const Prediction p = predict(m, x);
  const double e = target - p.output;
  std::vector<double> grad;
  grad.reserve(m.coefficient_count());
  for (std::size_t i = 0; i < m.rules.size(); ++i) {
    const double g = -2.0 * e * p.normalized[i];
    grad.push_back(g);
    for (std::size_t k = 0; k < m.dim; ++k) grad.push_back(g * x[k]);
  }
  return grad;
}

AnfisModel ls_fit(const AnfisModel& m, const std::vector<std::vector<double>>& xs, const std::vector<double>& ys) {
  if (xs.empty()) throw DimensionMismatch("ls_fit needs at least one sample");
  if (xs.size() != ys.size()) throw DimensionMismatch("ls_fit: sample and target counts differ");
  const auto rows = static_cast<Eigen::Index>(xs.size());
  const auto cols = static_cast<Eigen::Index>(m.coefficient_count());
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd y(rows);
  for (Eigen::Index s = 0; s < rows; ++s) {
    const auto& x = xs[static_cast<std::size_t>(s)];
    const Prediction p = predict(m, x);
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < m.rules.size(); ++i) {
      a(s, col++) = p.normalized[i];
      for (std::size_t k = 0; k < m.dim; ++k) a(s, col++) = p.normalized[i] * x[k];
    }
    y(s) = ys[static_cast<std::size_t>(s)];
  }
  const Eigen::VectorXd c = a.completeOrthogonalDecomposition().solve(y);
  AnfisModel out = m;
  Eigen::Index col = 0;
  for (auto& rule : out.rules) {
    for (double& coeff : rule.consequent) coeff = c(col++);
  }
  return out;
}

double squared_error(const AnfisModel& m, const std::vector<std::vector<double>>& xs,
                     const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw DimensionMismatch("sample and target counts differ");
  double sum = 0.0;
  for (std::size_t s = 0; s < xs.size(); ++s) {
    const double e = ys[s] - predict(m, xs[s]).output;
    sum += e * e;
  }
  return sum;
}

AnfisModel uniform_partition(std::size_t dim, std::size_t per_dim, double lo, double hi, AndOp and_op) {
  if (dim == 0) throw ValueError("dimension must be positive");
  if (per_dim < 2) throw ValueError("need at least two membership functions per dimension");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw ValueError("need a finite range lo < hi");
  const double h = (hi - lo) / static_cast<double>(per_dim - 1);
  std::vector<TriangularMf> mfs;
  for (std::size_t k = 0; k < per_dim; ++k) {
    const double center = lo + h * static_cast<double>(k);
    mfs.push_back({center - h, center, center + h});
  }
  AnfisModel m;
  m.dim = dim;
  m.and_op = and_op;
  std::vector<std::size_t> idx(dim, 0);
  for (;;) {
    Rule r;
    for (std::size_t d = 0; d < dim; ++d) r.antecedents.push_back(mfs[idx[d]]);
    r.consequent.assign(dim + 1, 0.0);
    m.rules.push_back(std::move(r));
    std::size_t d = 0;
    while (d < dim && ++idx[d] == per_dim) idx[d++] = 0;
    if (d == dim) break;
  }
  return m;
}

void TrainConfig::check() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ValueError("mu must be positive");
  if (!(retrain_error_threshold >= 0.0 && retrain_error_threshold <= 1.0)) {
    throw ValueError("retrain_error_threshold must lie in [0,1]");
  }
}

HarnessResult run_harness(AnfisModel update, AnfisModel leave, const std::vector<Period>& periods,
                          const TrainConfig& tc) {
  tc.check();
  update.check();
  leave.check();
  if (update.dim != leave.dim) throw DimensionMismatch("update and leave models differ in dimension");

  HarnessResult result;
  for (const Period& period : periods) {
    if (period.empty()) continue;
    std::size_t errors = 0;
    for (const Sample& s : period) {
      const double su = predict(update, s.x).output;
      const double sl = predict(leave, s.x).output;
      const bool correct = s.update ? su > sl : sl > su;
      if (correct) continue;
      ++errors;
      update = lms_update(update, s.x, s.update ? 1.0 : 0.0, tc.mu);
      leave = lms_update(leave, s.x, s.update ? 0.0 : 1.0, tc.mu);
    }
    const double rate = static_cast<double>(errors) / static_cast<double>(period.size());
    result.error_rates.push_back(rate);
    if (rate >= tc.retrain_error_threshold) {
      std::vector<std::vector<double>> xs;
      std::vector<double> yu, yl;
      for (const Sample& s : period) {
        xs.push_back(s.x);
        yu.push_back(s.update ? 1.0 : 0.0);
        yl.push_back(s.update ? 0.0 : 1.0);
      }
      update = ls_fit(update, xs, yu);
      leave = ls_fit(leave, xs, yl);
    }
  }
  result.update = std::move(update);
  result.leave = std::move(leave);
  return result;
}

}  // namespace fuzzyflow
