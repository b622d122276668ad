#include "imbal/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "imbal/log.hpp"
#include "imbal/neighbors.hpp"
#include "imbal/rng.hpp"

namespace imbal {

RatioTarget::RatioTarget(double r) : r_(r) {
  if (!(r > 0.0 && r <= 1.0)) throw ParameterError("ratio target must lie in (0, 1], got " + format_double(r));
}

namespace {

constexpr double kRatioSlack = 1e-12;

ClassPartition checked_partition(const Dataset& data) {
  auto p = class_partition(data);
  if (p.majority.empty() || p.minority.empty())
    throw ParameterError("resampling needs at least one point of each class");
  return p;
}

void require_ratio_not_below_current(const ClassPartition& p, RatioTarget r) {
  const double current = static_cast<double>(p.minority.size()) / static_cast<double>(p.majority.size());
  if (r.value() < current * (1.0 - kRatioSlack))
    throw ParameterError("ratio target " + format_double(r.value()) + " is below the current ratio " +
                         format_double(current));
}

ResampleReport make_report(const ClassPartition& before, const Dataset& out) {
  ResampleReport rep;
  rep.n_majority_before = before.majority.size();
  rep.n_minority_before = before.minority.size();
  rep.n_majority_after = out.count(before.majority_label);
  rep.n_minority_after = out.size() - rep.n_majority_after;
  return rep;
}

/// Output made of input rows (ascending) and nothing else.
ResampleResult keep_rows(const Dataset& data, const ClassPartition& p, std::vector<std::size_t> rows) {
  std::sort(rows.begin(), rows.end());
  ResampleResult res{data.subset(rows), {}, std::move(rows), 1};
  res.report = make_report(p, res.data);
  return res;
}

ResampleResult keep_all_but(const Dataset& data, const ClassPartition& p, const std::vector<std::size_t>& removed) {
  std::vector<bool> drop(data.size(), false);
  for (std::size_t r : removed) drop[r] = true;
  std::vector<std::size_t> rows;
  rows.reserve(data.size() - removed.size());
  for (std::size_t i = 0; i < data.size(); ++i)
    if (!drop[i]) rows.push_back(i);
  return keep_rows(data, p, std::move(rows));
}

/// The second stage's rows refer to the first stage's output.
ResampleResult chain(const ClassPartition& p, const ResampleResult& first, ResampleResult second) {
  for (std::size_t& s : second.source_rows)
    if (s != kSynthetic) s = first.source_rows[s];
  second.report = make_report(p, second.data);
  return second;
}

Dataset points_of(const Dataset& data, const std::vector<std::size_t>& rows) { return data.subset(rows); }

void check_k(std::size_t k, std::size_t available, const char* what) {
  if (k == 0 || k > available)
    throw ParameterError(std::string(what) + ": k=" + std::to_string(k) + " but only " +
                         std::to_string(available) + " candidates");
}

}  // namespace

std::size_t majority_keep_count(std::size_t n_minority, std::size_t n_majority, RatioTarget r) {
  const double target = static_cast<double>(n_minority) / r.value();
  const auto keep = static_cast<std::size_t>(std::ceil(target * (1.0 - kRatioSlack)));
  return std::min(keep, n_majority);
}

std::size_t minority_add_count(std::size_t n_minority, std::size_t n_majority, RatioTarget r) {
  const auto target = static_cast<std::size_t>(std::llround(r.value() * static_cast<double>(n_majority)));
  return target > n_minority ? target - n_minority : 0;
}

// ---- undersampling -------------------------------------------------------

ResampleResult random_undersample(const Dataset& data, RatioTarget r, std::uint64_t seed) {
  const auto p = checked_partition(data);
  require_ratio_not_below_current(p, r);
  const std::size_t keep = majority_keep_count(p.minority.size(), p.majority.size(), r);
  RandomStream rng(seed, "random-under");
  auto order = permutation(p.majority.size(), rng);
  std::vector<std::size_t> rows = p.minority;
  for (std::size_t i = 0; i < keep; ++i) rows.push_back(p.majority[order[i]]);
  return keep_rows(data, p, std::move(rows));
}

std::vector<std::size_t> nearmiss_select(const Dataset& data, NearMissVariant variant, std::size_t k,
                                         RatioTarget r) {
  const auto p = checked_partition(data);
  const Dataset minority = points_of(data, p.minority);
  const Dataset majority = points_of(data, p.majority);

  if (variant == NearMissVariant::Three) {
    check_k(k, majority.size(), "nearmiss3");
    const auto nn = knn_cross(PointsView::of(minority), PointsView::of(majority), k);
    std::vector<bool> chosen(majority.size(), false);
    for (std::size_t idx : nn) chosen[idx] = true;
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < majority.size(); ++i)
      if (chosen[i]) rows.push_back(p.majority[i]);
    return rows;
  }

  require_ratio_not_below_current(p, r);
  check_k(k, minority.size(), "nearmiss");
  const std::size_t keep = majority_keep_count(p.minority.size(), p.majority.size(), r);
  const NeighborQuery q{PointsView::of(minority), k, kNoExclusion};

  std::vector<std::pair<double, std::size_t>> scored(majority.size());
  for (std::size_t i = 0; i < majority.size(); ++i) {
    const auto x = majority.row(i);
    const auto nbrs = variant == NearMissVariant::One ? knn(x, q) : kfarthest(x, q);
    double sum = 0.0;
    for (std::size_t j : nbrs) sum += std::sqrt(squared_distance(x, minority.row(j)));
    scored[i] = {sum / static_cast<double>(k), i};
  }
  std::sort(scored.begin(), scored.end());
  std::vector<std::size_t> rows(keep);
  for (std::size_t i = 0; i < keep; ++i) rows[i] = p.majority[scored[i].second];
  std::sort(rows.begin(), rows.end());
  return rows;
}

ResampleResult nearmiss(const Dataset& data, NearMissVariant variant, std::size_t k, RatioTarget r,
                        std::uint64_t /*seed*/) {
  const auto p = checked_partition(data);
  auto rows = nearmiss_select(data, variant, k, r);
  rows.insert(rows.end(), p.minority.begin(), p.minority.end());
  return keep_rows(data, p, std::move(rows));
}

std::vector<std::size_t> cnn_select_from(const Dataset& data, std::size_t first, std::uint64_t seed) {
  if (first >= data.size()) throw ParameterError("cnn: first point out of range");
  std::vector<bool> member(data.size(), false);
  std::vector<std::size_t> u{first};
  member[first] = true;

  for (std::uint64_t pass = 0;; ++pass) {
    std::vector<std::size_t> outside;
    outside.reserve(data.size() - u.size());
    for (std::size_t i = 0; i < data.size(); ++i)
      if (!member[i]) outside.push_back(i);
    RandomStream rng(seed, "cnn-pass", pass);
    rng.shuffle(outside);

    bool grew = false;
    for (std::size_t i : outside) {
      const auto x = data.row(i);
      std::size_t best = u.front();
      double best_d = squared_distance(x, data.row(best));
      for (std::size_t m : u) {
        const double d = squared_distance(x, data.row(m));
        if (d < best_d || (d == best_d && m < best)) {
          best = m;
          best_d = d;
        }
      }
      if (data.label(best) != data.label(i)) {
        u.push_back(i);
        member[i] = true;
        grew = true;
      }
    }
    if (!grew) break;
  }
  std::sort(u.begin(), u.end());
  return u;
}

std::vector<std::size_t> cnn_select(const Dataset& data, std::uint64_t seed) {
  const auto p = checked_partition(data);
  RandomStream rng(seed, "cnn-start");
  const std::size_t first = p.minority[rng.below(p.minority.size())];
  return cnn_select_from(data, first, seed);
}

ResampleResult cnn_undersample(const Dataset& data, std::uint64_t seed) {
  const auto p = checked_partition(data);
  std::vector<std::size_t> rows = p.minority;
  for (std::size_t i : cnn_select(data, seed))
    if (data.label(i) == p.majority_label) rows.push_back(i);
  return keep_rows(data, p, std::move(rows));
}

namespace {

std::vector<std::size_t> enn_removals_for(const Dataset& data, std::size_t k, ClassLabel majority_label) {
  if (k % 2 == 0) throw ParameterError("enn: k must be odd, got " + std::to_string(k));
  if (k >= data.size())
    throw ParameterError("enn: k=" + std::to_string(k) + " must be below the dataset size " +
                         std::to_string(data.size()));
  const auto nn = knn_self(PointsView::of(data), k);
  std::vector<std::size_t> removed;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.label(i) != majority_label) continue;
    std::size_t minority_votes = 0;
    for (std::size_t j = 0; j < k; ++j) minority_votes += data.label(nn[i * k + j]) != majority_label;
    if (2 * minority_votes > k) removed.push_back(i);
  }
  return removed;
}

}  // namespace

std::vector<std::size_t> enn_removals(const Dataset& data, std::size_t k) {
  return enn_removals_for(data, k, class_partition(data).majority_label);
}

ResampleResult enn_undersample(const Dataset& data, std::size_t k) {
  const auto p = checked_partition(data);
  return keep_all_but(data, p, enn_removals(data, k));
}

ResampleResult renn_undersample(const Dataset& data, std::size_t k, std::size_t max_iters) {
  if (max_iters == 0) throw ParameterError("renn: max_iters must be at least 1");
  const auto p = checked_partition(data);
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Dataset current = data;

  for (std::size_t pass = 1; pass <= max_iters; ++pass) {
    const auto removed = enn_removals_for(current, k, p.majority_label);
    if (removed.empty()) {
      ResampleResult res{std::move(current), {}, std::move(rows), pass};
      res.report = make_report(p, res.data);
      return res;
    }
    std::vector<bool> drop(current.size(), false);
    for (std::size_t r : removed) drop[r] = true;
    std::vector<std::size_t> keep_local;
    std::vector<std::size_t> keep_rows_global;
    for (std::size_t i = 0; i < current.size(); ++i)
      if (!drop[i]) {
        keep_local.push_back(i);
        keep_rows_global.push_back(rows[i]);
      }
    current = current.subset(keep_local);
    rows = std::move(keep_rows_global);
  }
  throw ConvergenceError("renn: no fixpoint after " + std::to_string(max_iters) + " passes");
}

ResampleResult tomek_removal(const Dataset& data, TomekMode mode) {
  const auto p = checked_partition(data);
  std::vector<std::size_t> removed;
  for (const auto& [i, j] : mutual_nearest_cross_pairs(data)) {
    if (mode == TomekMode::Both) {
      removed.push_back(i);
      removed.push_back(j);
    } else {
      removed.push_back(data.label(i) == p.majority_label ? i : j);
    }
  }
  return keep_all_but(data, p, removed);
}

// ---- oversampling --------------------------------------------------------

ResampleResult random_oversample(const Dataset& data, RatioTarget r, std::uint64_t seed) {
  const auto p = checked_partition(data);
  require_ratio_not_below_current(p, r);
  const std::size_t add = minority_add_count(p.minority.size(), p.majority.size(), r);
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  RandomStream rng(seed, "random-over");
  for (std::size_t i = 0; i < add; ++i) rows.push_back(p.minority[rng.below(p.minority.size())]);
  ResampleResult res{data.subset(rows), {}, std::move(rows), 1};
  res.report = make_report(p, res.data);
  return res;
}

namespace {

SmoteResult interpolate(const Dataset& data, const ClassPartition& p, std::vector<SyntheticDraw> draws) {
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Dataset out = data;
  out.reserve(data.size() + draws.size());
  std::vector<double> x(data.dims());
  for (const auto& d : draws) {
    const auto a = data.row(d.base);
    const auto b = data.row(d.neighbor);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = a[j] + d.gap * (b[j] - a[j]);
    out.append(x, p.minority_label());
    rows.push_back(kSynthetic);
  }
  SmoteResult res{{std::move(out), {}, std::move(rows), 1}, std::move(draws)};
  res.result.report = make_report(p, res.result.data);
  return res;
}

void check_smote_inputs(const ClassPartition& p, std::size_t k) {
  if (p.minority.size() < 2) throw ParameterError("smote: need at least 2 minority points to interpolate");
  check_k(k, p.minority.size() - 1, "smote");
}

/// k nearest minority rows of each minority row (self excluded), as input row indices.
std::vector<std::size_t> minority_neighbors(const Dataset& data, const ClassPartition& p, std::size_t k) {
  auto nn = knn_self(PointsView::of(points_of(data, p.minority)), k);
  for (std::size_t& j : nn) j = p.minority[j];
  return nn;
}

}  // namespace

SmoteResult smote_detailed(const Dataset& data, std::size_t k, RatioTarget r, std::uint64_t seed) {
  const auto p = checked_partition(data);
  check_smote_inputs(p, k);
  require_ratio_not_below_current(p, r);
  const std::size_t n_syn = minority_add_count(p.minority.size(), p.majority.size(), r);
  const auto nn = minority_neighbors(data, p, k);

  std::vector<SyntheticDraw> draws(n_syn);
  for (std::size_t s = 0; s < n_syn; ++s) {
    RandomStream rng(seed, "smote", s);
    const std::size_t b = rng.below(p.minority.size());
    const std::size_t pick = rng.below(k);
    draws[s] = {p.minority[b], nn[b * k + pick], rng.uniform_open()};
  }
  return interpolate(data, p, std::move(draws));
}

ResampleResult smote(const Dataset& data, std::size_t k, RatioTarget r, std::uint64_t seed) {
  return smote_detailed(data, k, r, seed).result;
}

BorderlineSets borderline_classify(const Dataset& data, std::size_t m) {
  const auto p = checked_partition(data);
  check_k(m, data.size() - 1, "borderline");
  BorderlineSets sets;
  const auto all = PointsView::of(data);
  for (std::size_t i : p.minority) {
    const auto nbrs = knn(data.row(i), NeighborQuery{all, m, i});
    std::size_t m_major = 0;
    for (std::size_t j : nbrs) m_major += data.label(j) == p.majority_label;
    if (m_major == m)
      sets.noise.push_back(i);
    else if (2 * m_major < m)
      sets.safe.push_back(i);
    else
      sets.danger.push_back(i);
  }
  return sets;
}

SmoteResult borderline_smote_detailed(const Dataset& data, BorderlineVariant variant, std::size_t m,
                                      std::size_t k, RatioTarget r, std::uint64_t seed) {
  const auto p = checked_partition(data);
  check_smote_inputs(p, k);
  require_ratio_not_below_current(p, r);
  if (variant == BorderlineVariant::Two) check_k(k, p.majority.size(), "bsmote2");
  const auto sets = borderline_classify(data, m);
  if (sets.danger.empty()) {
    notice("borderline-smote: DANGER set is empty, falling back to plain SMOTE");
    return smote_detailed(data, k, r, seed);
  }

  const std::size_t n_syn = minority_add_count(p.minority.size(), p.majority.size(), r);
  // Position of each minority row within p.minority.
  std::vector<std::size_t> slot(data.size(), kSynthetic);
  for (std::size_t i = 0; i < p.minority.size(); ++i) slot[p.minority[i]] = i;
  const auto nn_min = minority_neighbors(data, p, k);
  std::vector<std::size_t> nn_maj;
  if (variant == BorderlineVariant::Two) {
    nn_maj = knn_cross(PointsView::of(points_of(data, sets.danger)), PointsView::of(points_of(data, p.majority)), k);
    for (std::size_t& j : nn_maj) j = p.majority[j];
  }

  const char* tag = variant == BorderlineVariant::One ? "bsmote1" : "bsmote2";
  std::vector<SyntheticDraw> draws(n_syn);
  for (std::size_t s = 0; s < n_syn; ++s) {
    RandomStream rng(seed, tag, s);
    const std::size_t d = rng.below(sets.danger.size());
    const std::size_t base = sets.danger[d];
    if (variant == BorderlineVariant::One) {
      draws[s] = {base, nn_min[slot[base] * k + rng.below(k)], rng.uniform_open()};
    } else {
      const std::size_t pick = rng.below(2 * k);
      if (pick < k)
        draws[s] = {base, nn_min[slot[base] * k + pick], rng.uniform_open()};
      else
        draws[s] = {base, nn_maj[d * k + (pick - k)], 0.5 * rng.uniform_open()};
    }
  }
  return interpolate(data, p, std::move(draws));
}

ResampleResult borderline_smote(const Dataset& data, BorderlineVariant variant, std::size_t m, std::size_t k,
                                RatioTarget r, std::uint64_t seed) {
  return borderline_smote_detailed(data, variant, m, k, r, seed).result;
}

// ---- combinations --------------------------------------------------------

ResampleResult smote_tomek(const Dataset& data, std::size_t k, RatioTarget r, std::uint64_t seed) {
  const auto p = checked_partition(data);
  auto first = smote(data, k, r, seed);
  return chain(p, first, tomek_removal(first.data, TomekMode::MajorityOnly));
}

ResampleResult smote_enn(const Dataset& data, std::size_t k_smote, std::size_t k_enn, RatioTarget r,
                         std::uint64_t seed) {
  const auto p = checked_partition(data);
  auto first = smote(data, k_smote, r, seed);
  // ENN sees the oversampled set; its removals are majority-only.
  return chain(p, first, keep_all_but(first.data, p, enn_removals_for(first.data, k_enn, p.majority_label)));
}

// ---- by name -------------------------------------------------------------

namespace {

struct MethodEntry {
  Method method;
  std::string_view name;
};

constexpr MethodEntry kMethods[] = {
    {Method::RandomUnder, "random-under"},
    {Method::NearMiss1, "nearmiss1"},
    {Method::NearMiss2, "nearmiss2"},
    {Method::NearMiss3, "nearmiss3"},
    {Method::Cnn, "cnn"},
    {Method::Enn, "enn"},
    {Method::Renn, "renn"},
    {Method::Tomek, "tomek"},
    {Method::RandomOver, "random-over"},
    {Method::Smote, "smote"},
    {Method::BorderlineSmote1, "bsmote1"},
    {Method::BorderlineSmote2, "bsmote2"},
    {Method::SmoteTomek, "smote-tomek"},
    {Method::SmoteEnn, "smote-enn"},
};

}  // namespace

std::string_view method_name(Method m) {
  for (const auto& e : kMethods)
    if (e.method == m) return e.name;
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (const auto& e : kMethods)
    if (e.name == name) return e.method;
  std::string valid;
  for (const auto& e : kMethods) {
    if (!valid.empty()) valid += '|';
    valid += e.name;
  }
  throw ParameterError("unknown method '" + std::string(name) + "'; valid: " + valid);
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = [] {
    std::vector<Method> v;
    for (const auto& e : kMethods) v.push_back(e.method);
    return v;
  }();
  return methods;
}

std::size_t default_k(Method m) {
  switch (m) {
    case Method::NearMiss1:
    case Method::NearMiss2:
    case Method::NearMiss3:
      return 3;
    default:
      return 5;
  }
}

ResampleResult resample(const Dataset& data, Method method, const ResampleParams& params) {
  const std::size_t k = params.k == 0 ? default_k(method) : params.k;
  const RatioTarget r(params.ratio);
  const auto seed = params.seed;
  switch (method) {
    case Method::RandomUnder: return random_undersample(data, r, seed);
    case Method::NearMiss1: return nearmiss(data, NearMissVariant::One, k, r, seed);
    case Method::NearMiss2: return nearmiss(data, NearMissVariant::Two, k, r, seed);
    case Method::NearMiss3: return nearmiss(data, NearMissVariant::Three, k, r, seed);
    case Method::Cnn: return cnn_undersample(data, seed);
    case Method::Enn: return enn_undersample(data, k);
    case Method::Renn: return renn_undersample(data, k, params.max_iters);
    case Method::Tomek: return tomek_removal(data, TomekMode::MajorityOnly);
    case Method::RandomOver: return random_oversample(data, r, seed);
    case Method::Smote: return smote(data, k, r, seed);
    case Method::BorderlineSmote1: return borderline_smote(data, BorderlineVariant::One, params.m, k, r, seed);
    case Method::BorderlineSmote2: return borderline_smote(data, BorderlineVariant::Two, params.m, k, r, seed);
    case Method::SmoteTomek: return smote_tomek(data, k, r, seed);
    case Method::SmoteEnn: return smote_enn(data, k, params.k_enn, r, seed);
  }
  throw ParameterError("unhandled method");
}

}  // namespace imbal
