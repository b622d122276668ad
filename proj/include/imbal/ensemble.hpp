#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "imbal/core.hpp"
#include "imbal/learn.hpp"

namespace imbal {

/// Sum of boosted members, each shifted by its own threshold b_i:
/// minority iff sum_i (score_i(x) - b_i) >= 0.
struct MetaEnsemble {
  std::vector<BoostedModel> members;

  bool operator==(const MetaEnsemble&) const = default;
};

struct EnsembleOptions {
  std::size_t n_members = 10;
  std::size_t rounds = 10;
  std::uint64_t seed = 0;
};

MetaEnsemble easy_ensemble(const Dataset& data, const EnsembleOptions& options);

/// Per-member bookkeeping from a cascade run.
struct CascadeTrace {
  double target_fpr = 0.0;
  std::vector<std::size_t> pool_sizes;  // majority pool before each member
  std::vector<double> achieved_fpr;     // on that pool, at the tuned b_i
};

MetaEnsemble balance_cascade(const Dataset& data, const EnsembleOptions& options, CascadeTrace* trace = nullptr);

/// False-positive target for a cascade of n members at imbalance ratio r.
double cascade_fpr_target(double ratio, std::size_t n_members);

/// Smallest score s drawn from `scores` such that the fraction of scores >= s
/// is at most `target`. When no score qualifies, returns just above the max.
double tune_threshold(std::span<const double> scores, double target);

double meta_score(const MetaEnsemble& ensemble, std::span<const double> x);
ClassLabel meta_predict(const MetaEnsemble& ensemble, std::span<const double> x);

}  // namespace imbal
