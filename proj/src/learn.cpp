#include "imbal/learn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace imbal {

std::string_view penalty_name(Penalty p) {
  switch (p) {
    case Penalty::None: return "none";
    case Penalty::L1: return "l1";
    case Penalty::L2: return "l2";
  }
  return "?";
}

Penalty parse_penalty(std::string_view name) {
  if (name == "l1") return Penalty::L1;
  if (name == "l2") return Penalty::L2;
  if (name == "none") return Penalty::None;
  throw ParameterError("unknown penalty '" + std::string(name) + "'; valid: l1|l2|none");
}

ClassWeights balanced_weights(const Dataset& data) {
  const std::size_t n_min = data.count(ClassLabel::Minority);
  const std::size_t n_maj = data.size() - n_min;
  if (n_min == 0 || n_maj == 0) throw ParameterError("balanced weights need both classes present");
  const double n = static_cast<double>(data.size());
  return {n / (2.0 * static_cast<double>(n_maj)), n / (2.0 * static_cast<double>(n_min))};
}

LinearModel LinearModel::zeros(std::size_t dims, Penalty penalty, double strength) {
  LinearModel m;
  m.theta.assign(dims + 1, 0.0);
  m.penalty = penalty;
  m.strength = strength;
  m.mean.assign(dims, 0.0);
  m.scale.assign(dims, 1.0);
  return m;
}

namespace {

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double linear(std::span<const double> x, std::span<const double> theta) {
  double z = theta.back();
  for (std::size_t j = 0; j < x.size(); ++j) z += theta[j] * x[j];
  return z;
}

double penalty_value(std::span<const double> theta, Penalty penalty, double strength) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < theta.size(); ++j)
    s += penalty == Penalty::L1 ? std::abs(theta[j]) : theta[j] * theta[j];
  switch (penalty) {
    case Penalty::None: return 0.0;
    case Penalty::L1: return s / strength;
    case Penalty::L2: return 0.5 * s / strength;
  }
  return 0.0;
}

void check_strength(double strength) {
  if (!(strength > 0.0) || !std::isfinite(strength)) throw ParameterError("strength must be positive and finite");
}

struct Standardized {
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> scale;
};

Standardized standardize(const Dataset& data, bool enabled) {
  const std::size_t n = data.size();
  const std::size_t d = data.dims();
  Standardized s{data.features(), std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
  if (!enabled || n == 0) return s;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += s.x[i * d + j];
  for (double& m : s.mean) m /= static_cast<double>(n);
  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double t = s.x[i * d + j] - s.mean[j];
      var[j] += t * t;
    }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / static_cast<double>(n));
    s.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) s.x[i * d + j] = (s.x[i * d + j] - s.mean[j]) / s.scale[j];
  return s;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

std::string trace_summary(const std::vector<double>& losses, double last_step_norm) {
  std::ostringstream os;
  os << "after " << losses.size() << " iterations: loss " << (losses.empty() ? 0.0 : losses.front())
     << " -> " << (losses.empty() ? 0.0 : losses.back()) << ", last step norm " << last_step_norm;
  return os.str();
}

}  // namespace

double logistic_data_loss(const LogisticProblem& prob, std::span<const double> theta,
                          std::vector<double>* gradient) {
  if (theta.size() != prob.dims + 1) throw ParameterError("theta has the wrong dimension");
  if (gradient) gradient->assign(theta.size(), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < prob.rows; ++i) {
    const auto x = prob.x.subspan(i * prob.dims, prob.dims);
    const double z = linear(x, theta);
    const bool pos = prob.y[i] == ClassLabel::Minority;
    const double w = prob.row_weights[i];
    loss += w * softplus(pos ? -z : z);
    if (gradient) {
      const double r = w * (sigmoid(z) - (pos ? 1.0 : 0.0));
      for (std::size_t j = 0; j < prob.dims; ++j) (*gradient)[j] += r * x[j];
      (*gradient)[prob.dims] += r;
    }
  }
  return loss;
}

double logistic_objective(const LogisticProblem& prob, std::span<const double> theta, Penalty penalty,
                          double strength, std::vector<double>* gradient) {
  if (penalty != Penalty::None) check_strength(strength);
  double f = logistic_data_loss(prob, theta, gradient) + penalty_value(theta, penalty, strength);
  if (gradient && penalty == Penalty::L2)
    for (std::size_t j = 0; j + 1 < theta.size(); ++j) (*gradient)[j] += theta[j] / strength;
  if (gradient && penalty == Penalty::L1)
    for (std::size_t j = 0; j + 1 < theta.size(); ++j)
      (*gradient)[j] += (theta[j] > 0.0 ? 1.0 : theta[j] < 0.0 ? -1.0 : 0.0) / strength;
  return f;
}

double weighted_log_loss(const LinearModel& model, const Dataset& data, const ClassWeights& weights) {
  if (model.dims() != data.dims()) throw ParameterError("model dimension does not match the dataset");
  const std::size_t n = data.size();
  const std::size_t d = data.dims();
  std::vector<double> x(data.features());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) x[i * d + j] = (x[i * d + j] - model.mean[j]) / model.scale[j];
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = weights.of(data.label(i));
  const LogisticProblem prob{x, n, d, data.labels(), w};
  return logistic_objective(prob, model.theta, model.penalty, model.strength);
}

LinearModel fit_logistic(const Dataset& data, const FitOptions& opt, FitTrace* trace) {
  if (!(opt.tol > 0.0)) throw ParameterError("tol must be positive");
  if (opt.penalty != Penalty::None) check_strength(opt.strength);
  if (data.empty()) throw ParameterError("cannot fit on an empty dataset");

  const std::size_t n = data.size();
  const std::size_t d = data.dims();
  auto st = standardize(data, opt.standardize);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = opt.class_weights.of(data.label(i));
  const LogisticProblem prob{st.x, n, d, data.labels(), w};

  LinearModel model;
  model.penalty = opt.penalty;
  model.strength = opt.strength;
  model.class_weights = opt.class_weights;
  model.mean = st.mean;
  model.scale = st.scale;
  std::vector<double> theta(d + 1, 0.0);

  const bool proximal = opt.penalty == Penalty::L1;
  // Smooth part: data term, plus the L2 penalty when present.
  const Penalty smooth_penalty = proximal ? Penalty::None : opt.penalty;
  auto smooth = [&](std::span<const double> t, std::vector<double>* g) {
    return logistic_objective(prob, t, smooth_penalty, opt.strength, g);
  };
  auto full = [&](std::span<const double> t, double smooth_value) {
    return proximal ? smooth_value + penalty_value(t, Penalty::L1, opt.strength) : smooth_value;
  };

  std::vector<double> grad;
  double f_smooth = smooth(theta, &grad);
  double f = full(theta, f_smooth);
  std::vector<double> losses{f};
  double step = 1.0 / std::max(1.0, norm2(grad));
  std::vector<double> cand(d + 1), cand_grad;
  double last_step_norm = 0.0;

  for (std::size_t it = 1; it <= opt.max_iters; ++it) {
    double cand_smooth = 0.0;
    double cand_f = 0.0;
    double t = step;
    bool accepted = false;
    for (int backtrack = 0; backtrack < 200; ++backtrack) {
      for (std::size_t j = 0; j <= d; ++j) cand[j] = theta[j] - t * grad[j];
      if (proximal)
        for (std::size_t j = 0; j < d; ++j) cand[j] = soft_threshold(cand[j], t / opt.strength);
      cand_smooth = smooth(cand, nullptr);
      cand_f = full(cand, cand_smooth);
      if (proximal) {
        double lin = 0.0;
        double sq = 0.0;
        for (std::size_t j = 0; j <= d; ++j) {
          const double dj = cand[j] - theta[j];
          lin += grad[j] * dj;
          sq += dj * dj;
        }
        accepted = cand_smooth <= f_smooth + lin + sq / (2.0 * t) + 1e-12 * std::abs(f_smooth);
      } else {
        double gg = 0.0;
        for (double g : grad) gg += g * g;
        accepted = cand_f <= f - 1e-4 * t * gg;
      }
      if (accepted) break;
      t *= 0.5;
    }

    std::vector<double> diff(d + 1);
    for (std::size_t j = 0; j <= d; ++j) diff[j] = cand[j] - theta[j];
    last_step_norm = norm2(diff);
    const double mapping_norm = last_step_norm / t;

    if (!accepted || cand_f > f) {
      // No representable descent left along this direction.
      if (trace) *trace = {losses, it};
      model.theta = theta;
      return model;
    }

    smooth(cand, &cand_grad);
    // Barzilai-Borwein step for the next trial.
    double sy = 0.0;
    double ss = 0.0;
    for (std::size_t j = 0; j <= d; ++j) {
      const double yj = cand_grad[j] - grad[j];
      sy += diff[j] * yj;
      ss += diff[j] * diff[j];
    }
    step = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e12) : std::min(2.0 * t, 1e12);

    const double decrease = f - cand_f;
    theta = cand;
    grad = cand_grad;
    f_smooth = cand_smooth;
    f = cand_f;
    losses.push_back(f);

    const double gnorm = proximal ? mapping_norm : norm2(grad);
    if (decrease / std::max(1.0, std::abs(losses[losses.size() - 2])) < opt.tol || gnorm < 1e-6) {
      if (trace) *trace = {losses, it};
      model.theta = theta;
      return model;
    }
  }
  throw FitError("logistic regression did not converge " + trace_summary(losses, last_step_norm));
}

double logistic_score(const LinearModel& model, std::span<const double> x) {
  if (x.size() != model.dims()) throw ParameterError("point dimension does not match the model");
  double z = model.theta.back();
  for (std::size_t j = 0; j < x.size(); ++j) z += model.theta[j] * (x[j] - model.mean[j]) / model.scale[j];
  return sigmoid(z);
}

LogisticPrediction predict_logistic(const LinearModel& model, const Dataset& points) {
  if (points.dims() != model.dims()) throw ParameterError("point dimension does not match the model");
  LogisticPrediction out;
  out.labels.reserve(points.size());
  out.scores.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double s = logistic_score(model, points.row(i));
    out.scores.push_back(s);
    out.labels.push_back(s >= 0.5 ? ClassLabel::Minority : ClassLabel::Majority);
  }
  return out;
}

// ---- boosting ------------------------------------------------------------

bool best_stump(const Dataset& data, std::span<const double> weights, Stump& out, double& error) {
  const std::size_t n = data.size();
  bool found = false;
  std::vector<std::size_t> order(n);
  double total_pos = 0.0;
  double total_neg = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    (data.label(i) == ClassLabel::Minority ? total_pos : total_neg) += weights[i];

  for (std::size_t f = 0; f < data.dims(); ++f) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return data.row(a)[f] < data.row(b)[f]; });
    double left_pos = 0.0;
    double left_neg = 0.0;
    for (std::size_t a = 0; a + 1 < n; ++a) {
      const std::size_t i = order[a];
      (data.label(i) == ClassLabel::Minority ? left_pos : left_neg) += weights[i];
      const double v = data.row(i)[f];
      const double next = data.row(order[a + 1])[f];
      if (!(next > v)) continue;
      const double thr = v + (next - v) / 2.0;
      // polarity -1: minority on the left; +1: minority on the right.
      const double err_minus = left_neg + (total_pos - left_pos);
      const double err_plus = left_pos + (total_neg - left_neg);
      if (!found || err_minus < error) {
        out = {f, thr, -1};
        error = err_minus;
        found = true;
      }
      if (err_plus < error) {
        out = {f, thr, 1};
        error = err_plus;
      }
    }
  }
  return found;
}

BoostedModel fit_adaboost(const Dataset& data, std::size_t rounds, std::uint64_t /*seed*/, BoostTrace* trace) {
  if (rounds == 0) throw ParameterError("adaboost needs at least one round");
  const std::size_t n = data.size();
  const std::size_t n_min = data.count(ClassLabel::Minority);
  if (n_min == 0 || n_min == n) throw ParameterError("adaboost needs both classes present");

  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = data.label(i) == ClassLabel::Minority ? 1 : -1;

  BoostedModel model;
  BoostTrace local;
  std::vector<int> h(n);
  for (std::size_t r = 0; r < rounds; ++r) {
    Stump stump;
    double approx_error = 0.0;
    if (!best_stump(data, w, stump, approx_error)) break;
    double eps = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = stump.predict(data.row(i));
      if (h[i] != y[i]) eps += w[i];
    }
    if (eps >= 0.5) break;
    const double alpha = 0.5 * std::log((1.0 - eps) / std::max(eps, 1e-10));
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] *= std::exp(-alpha * y[i] * h[i]);
      z += w[i];
    }
    for (double& wi : w) wi /= z;
    model.stumps.push_back(stump);
    model.alphas.push_back(alpha);
    local.errors.push_back(eps);
    local.normalizers.push_back(z);
    if (eps == 0.0) break;
  }

  std::size_t wrong = 0;
  for (std::size_t i = 0; i < n; ++i) wrong += boosted_predict(model, data.row(i)) != data.label(i);
  local.training_error = static_cast<double>(wrong) / static_cast<double>(n);
  double bound = 1.0;
  for (double z : local.normalizers) bound *= z;
  if (local.training_error > bound + 1e-12)
    throw std::logic_error("adaboost training error exceeds the exponential-loss bound");
  if (trace) *trace = std::move(local);
  return model;
}

double boosted_score(const BoostedModel& model, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t j = 0; j < model.stumps.size(); ++j) s += model.alphas[j] * model.stumps[j].predict(x);
  return s;
}

ClassLabel boosted_predict(const BoostedModel& model, std::span<const double> x) {
  return boosted_score(model, x) - model.threshold_b >= 0.0 ? ClassLabel::Minority : ClassLabel::Majority;
}

}  // namespace imbal
