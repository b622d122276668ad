#include "imbal/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "imbal/rng.hpp"

namespace imbal {

namespace {

ClassPartition ensemble_partition(const Dataset& data, const EnsembleOptions& opt) {
  if (opt.n_members == 0) throw ParameterError("ensemble needs at least one member");
  auto p = class_partition(data);
  if (p.minority.empty()) throw ParameterError("ensemble needs minority points");
  if (p.majority_label != ClassLabel::Majority)
    throw ParameterError("ensemble expects label 0 to be the majority class");
  if (p.minority.size() > p.majority.size()) throw ParameterError("minority class larger than majority");
  return p;
}

/// |S| rows drawn without replacement from `pool`, followed by all of S.
std::vector<std::size_t> balanced_rows(const std::vector<std::size_t>& pool, const std::vector<std::size_t>& minority,
                                       RandomStream& rng) {
  auto order = permutation(pool.size(), rng);
  std::vector<std::size_t> rows;
  rows.reserve(2 * minority.size());
  for (std::size_t i = 0; i < minority.size(); ++i) rows.push_back(pool[order[i]]);
  std::sort(rows.begin(), rows.end());
  rows.insert(rows.end(), minority.begin(), minority.end());
  return rows;
}

}  // namespace

MetaEnsemble easy_ensemble(const Dataset& data, const EnsembleOptions& opt) {
  const auto p = ensemble_partition(data, opt);
  MetaEnsemble ens;
  for (std::size_t i = 0; i < opt.n_members; ++i) {
    RandomStream rng(opt.seed, "easy-ensemble", i);
    const auto rows = balanced_rows(p.majority, p.minority, rng);
    ens.members.push_back(fit_adaboost(data.subset(rows), opt.rounds, derive_seed(opt.seed, "easy-fit", i)));
  }
  return ens;
}

double cascade_fpr_target(double ratio, std::size_t n_members) {
  if (n_members < 2) throw ParameterError("cascade needs at least two members");
  return std::pow(ratio, 1.0 / static_cast<double>(n_members - 1));
}

double tune_threshold(std::span<const double> scores, double target) {
  if (scores.empty()) throw ParameterError("tune_threshold: no scores");
  std::vector<double> s(scores.begin(), scores.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (a > 0 && s[a] == s[a - 1]) continue;
    if (static_cast<double>(s.size() - a) / n <= target) return s[a];
  }
  return std::nextafter(s.back(), std::numeric_limits<double>::infinity());
}

MetaEnsemble balance_cascade(const Dataset& data, const EnsembleOptions& opt, CascadeTrace* trace) {
  const auto p = ensemble_partition(data, opt);
  const double t = cascade_fpr_target(imbalance_ratio(data), opt.n_members);
  CascadeTrace local;
  local.target_fpr = t;

  MetaEnsemble ens;
  std::vector<std::size_t> pool = p.majority;
  for (std::size_t i = 0; i < opt.n_members; ++i) {
    if (pool.size() < p.minority.size()) break;
    RandomStream rng(opt.seed, "balance-cascade", i);
    const auto rows = balanced_rows(pool, p.minority, rng);
    auto member = fit_adaboost(data.subset(rows), opt.rounds, derive_seed(opt.seed, "cascade-fit", i));

    std::vector<double> scores(pool.size());
    for (std::size_t j = 0; j < pool.size(); ++j) scores[j] = boosted_score(member, data.row(pool[j]));
    member.threshold_b = tune_threshold(scores, t);

    // Drop the majority points this member already gets right.
    std::vector<std::size_t> next;
    for (std::size_t j = 0; j < pool.size(); ++j)
      if (scores[j] >= member.threshold_b) next.push_back(pool[j]);
    local.pool_sizes.push_back(pool.size());
    local.achieved_fpr.push_back(static_cast<double>(next.size()) / static_cast<double>(pool.size()));
    pool = std::move(next);
    ens.members.push_back(std::move(member));
  }
  if (trace) *trace = std::move(local);
  return ens;
}

double meta_score(const MetaEnsemble& ensemble, std::span<const double> x) {
  double s = 0.0;
  for (const auto& m : ensemble.members) s += boosted_score(m, x) - m.threshold_b;
  return s;
}

ClassLabel meta_predict(const MetaEnsemble& ensemble, std::span<const double> x) {
  return meta_score(ensemble, x) >= 0.0 ? ClassLabel::Minority : ClassLabel::Majority;
}

}  // namespace imbal
