#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "imbal/core.hpp"

namespace imbal {

enum class Penalty { None, L1, L2 };

std::string_view penalty_name(Penalty p);
Penalty parse_penalty(std::string_view name);

/// Per-class multipliers on the log-loss terms.
struct ClassWeights {
  double majority = 1.0;
  double minority = 1.0;

  double of(ClassLabel c) const { return c == ClassLabel::Minority ? minority : majority; }
  bool operator==(const ClassWeights&) const = default;
};

/// w_j = n / (2 n_j). Throws ParameterError if either class is empty.
ClassWeights balanced_weights(const Dataset& data);

/// Logistic regression parameters in standardized feature space.
/// theta has d + 1 entries with the bias last; features are mapped through
/// (x - mean) / scale before the dot product.
struct LinearModel {
  std::vector<double> theta;
  Penalty penalty = Penalty::L2;
  double strength = 1.0;
  ClassWeights class_weights;
  std::vector<double> mean;
  std::vector<double> scale;

  std::size_t dims() const { return theta.empty() ? 0 : theta.size() - 1; }

  /// Model with theta = 0 and identity standardization.
  static LinearModel zeros(std::size_t dims, Penalty penalty = Penalty::L2, double strength = 1.0);
};

/// Row-major design matrix (features already standardized) plus labels and
/// per-row loss weights. The objective works on this directly.
struct LogisticProblem {
  std::span<const double> x;
  std::size_t rows = 0;
  std::size_t dims = 0;
  std::span<const ClassLabel> y;
  std::span<const double> row_weights;
};

/// Weighted negative log-likelihood plus the penalty on non-bias
/// coordinates: ||w||_1 / C for L1, ||w||^2 / (2C) for L2.
double logistic_objective(const LogisticProblem& prob, std::span<const double> theta, Penalty penalty,
                          double strength, std::vector<double>* gradient = nullptr);

/// Data term only; the penalty's gradient is added when requested. For L1 the
/// returned gradient covers the smooth part only.
double logistic_data_loss(const LogisticProblem& prob, std::span<const double> theta,
                          std::vector<double>* gradient = nullptr);

double weighted_log_loss(const LinearModel& model, const Dataset& data, const ClassWeights& weights);

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FitOptions {
  Penalty penalty = Penalty::L2;
  double strength = 1.0;
  ClassWeights class_weights;
  double tol = 1e-8;
  std::size_t max_iters = 1000;
  std::uint64_t seed = 0;
  bool standardize = true;
};

struct FitTrace {
  std::vector<double> losses;
  std::size_t iterations = 0;
};

LinearModel fit_logistic(const Dataset& data, const FitOptions& options, FitTrace* trace = nullptr);

struct LogisticPrediction {
  std::vector<ClassLabel> labels;
  /// P(minority | x).
  std::vector<double> scores;
};

/// Minority iff score >= 0.5.
LogisticPrediction predict_logistic(const LinearModel& model, const Dataset& points);
double logistic_score(const LinearModel& model, std::span<const double> x);

// ---- boosting ------------------------------------------------------------

/// +1 (minority) when polarity * (x[feature] - threshold) > 0, else -1.
struct Stump {
  std::size_t feature_index = 0;
  double threshold = 0.0;
  int polarity = 1;

  int predict(std::span<const double> x) const {
    return polarity * (x[feature_index] - threshold) > 0.0 ? 1 : -1;
  }
  bool operator==(const Stump&) const = default;
};

struct BoostedModel {
  std::vector<Stump> stumps;
  std::vector<double> alphas;
  double threshold_b = 0.0;

  bool operator==(const BoostedModel&) const = default;
};

struct BoostTrace {
  std::vector<double> errors;        // weighted error per accepted round
  std::vector<double> normalizers;   // Z_t per accepted round
  double training_error = 0.0;
};

/// Discrete AdaBoost over axis-aligned stumps.
BoostedModel fit_adaboost(const Dataset& data, std::size_t rounds, std::uint64_t seed,
                          BoostTrace* trace = nullptr);

/// Minimum weighted-error stump over all features, sorted-value midpoints and
/// both polarities; ties go to the lexicographically smallest
/// (feature, threshold, polarity). Returns false when no split exists.
bool best_stump(const Dataset& data, std::span<const double> weights, Stump& out, double& error);

double boosted_score(const BoostedModel& model, std::span<const double> x);
ClassLabel boosted_predict(const BoostedModel& model, std::span<const double> x);

}  // namespace imbal
