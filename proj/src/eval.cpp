#include "imbal/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "imbal/ensemble.hpp"
#include "imbal/resample.hpp"
#include "imbal/rng.hpp"

namespace imbal {

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ParameterError("train_fraction must lie in (0, 1)");
  if (folds < 2) throw ParameterError("folds must be at least 2");
}

TrainTest stratified_split(const Dataset& data, const SplitSpec& spec) {
  spec.validate();
  TrainTest out{Dataset(data.dims()), Dataset(data.dims()), {}, {}};
  for (ClassLabel c : {ClassLabel::Majority, ClassLabel::Minority}) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < data.size(); ++i)
      if (data.label(i) == c) rows.push_back(i);
    if (rows.size() < 2)
      throw ParameterError("stratified split needs at least 2 points of class " +
                           std::to_string(static_cast<int>(c)));
    RandomStream rng(spec.seed, "split", static_cast<std::uint64_t>(c));
    rng.shuffle(rows);
    auto n_train = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(rows.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, rows.size() - 1);
    out.train_rows.insert(out.train_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test_rows.insert(out.test_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_train), rows.end());
  }
  std::sort(out.train_rows.begin(), out.train_rows.end());
  std::sort(out.test_rows.begin(), out.test_rows.end());
  out.train = data.subset(out.train_rows);
  out.test = data.subset(out.test_rows);
  return out;
}

std::vector<Fold> kfold_indices(const Dataset& data, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw ParameterError("folds must be at least 2");
  const auto p = class_partition(data);
  if (folds > p.minority.size())
    throw ParameterError("folds (" + std::to_string(folds) + ") exceed the minority count (" +
                         std::to_string(p.minority.size()) + ")");
  std::vector<std::size_t> fold_of(data.size());
  for (const auto* cls : {&p.majority, &p.minority}) {
    std::vector<std::size_t> rows = *cls;
    RandomStream rng(seed, "kfold", cls == &p.majority ? 0 : 1);
    rng.shuffle(rows);
    for (std::size_t i = 0; i < rows.size(); ++i) fold_of[rows[i]] = i % folds;
  }
  std::vector<Fold> out(folds);
  for (std::size_t i = 0; i < data.size(); ++i)
    for (std::size_t f = 0; f < folds; ++f) (f == fold_of[i] ? out[f].validation : out[f].train).push_back(i);
  return out;
}

double macro_f1(std::span<const ClassLabel> truth, std::span<const ClassLabel> predicted) {
  const auto cm = confusion(truth, predicted);
  auto f1 = [](double tp, double fp, double fn) {
    const double den = 2.0 * tp + fp + fn;
    return den > 0.0 ? 2.0 * tp / den : 0.0;
  };
  const double f_min = f1(static_cast<double>(cm.tp_minority), static_cast<double>(cm.fn_majority),
                          static_cast<double>(cm.fn_minority));
  const double f_maj = f1(static_cast<double>(cm.tp_majority), static_cast<double>(cm.fn_minority),
                          static_cast<double>(cm.fn_majority));
  return 0.5 * (f_min + f_maj);
}

std::vector<GridCandidate> default_grid() {
  std::vector<GridCandidate> g;
  for (double c : {0.01, 0.1, 1.0, 10.0, 100.0})
    for (Penalty p : {Penalty::L2, Penalty::L1}) g.push_back({p, c});
  return g;
}

namespace {

bool prefer(const GridCandidate& a, const GridCandidate& b) {
  // Earlier wins a tie: smaller strength, then L2.
  if (a.strength != b.strength) return a.strength < b.strength;
  return a.penalty == Penalty::L2 && b.penalty != Penalty::L2;
}

FitOptions fit_options(const GridCandidate& c, const Dataset& train, bool balanced, std::uint64_t seed) {
  FitOptions o;
  o.penalty = c.penalty;
  o.strength = c.strength;
  o.seed = seed;
  if (balanced) o.class_weights = balanced_weights(train);
  return o;
}

}  // namespace

GridChoice grid_search_logistic(const Dataset& train, const SplitSpec& spec, const GridOptions& options) {
  if (options.grid.empty()) throw ParameterError("empty parameter grid");
  const auto folds = kfold_indices(train, spec.folds, derive_seed(spec.seed, "grid-folds"));
  std::vector<Dataset> fold_train;
  std::vector<Dataset> fold_valid;
  for (const auto& f : folds) {
    fold_train.push_back(train.subset(f.train));
    fold_valid.push_back(train.subset(f.validation));
  }

  GridChoice choice;
  bool found = false;
  for (std::size_t c = 0; c < options.grid.size(); ++c) {
    const auto& cand = options.grid[c];
    std::optional<double> mean = 0.0;
    for (std::size_t f = 0; f < folds.size() && mean; ++f) {
      try {
        const auto model = fit_logistic(fold_train[f], fit_options(cand, fold_train[f], options.balanced, spec.seed));
        const auto pred = predict_logistic(model, fold_valid[f]);
        *mean += macro_f1(fold_valid[f].labels(), pred.labels);
      } catch (const FitError&) {
        mean.reset();
      }
    }
    if (mean) *mean /= static_cast<double>(folds.size());
    choice.scores.push_back(mean);
    if (!mean) continue;
    if (!found || *mean > choice.score || (*mean == choice.score && prefer(cand, choice.best))) {
      choice.best = cand;
      choice.score = *mean;
      found = true;
    }
  }
  if (!found) throw FitError("every grid candidate failed to fit");
  return choice;
}

const std::vector<std::string>& benchmark_methods() {
  static const std::vector<std::string> methods = [] {
    std::vector<std::string> v{"baseline", "weighted"};
    for (Method m : all_methods()) v.emplace_back(method_name(m));
    v.emplace_back("easy-ensemble");
    v.emplace_back("balance-cascade");
    return v;
  }();
  return methods;
}

std::vector<std::string> parse_method_list(const std::string& spec) {
  if (spec == "all") return benchmark_methods();
  std::vector<std::string> out;
  std::istringstream is(spec);
  for (std::string name; std::getline(is, name, ',');) {
    if (name.empty()) continue;
    const auto& known = benchmark_methods();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      std::string valid;
      for (const auto& k : known) valid += (valid.empty() ? "" : "|") + k;
      throw ParameterError("unknown method '" + name + "'; valid: all|" + valid);
    }
    out.push_back(name);
  }
  if (out.empty()) throw ParameterError("empty method list");
  return out;
}

BenchmarkData benchmark_data(const GenParams& gen, const SplitSpec& spec, std::uint64_t seed) {
  GenParams g = gen;
  g.seed = derive_seed(seed, "generate");
  SplitSpec s = spec;
  s.seed = derive_seed(seed, "split");
  auto projected = pca_project(generate(g), 2);
  auto split = stratified_split(projected, s);
  return {std::move(projected), std::move(split)};
}

namespace {

BenchmarkRow run_method(const std::string& method, const Dataset& train, const Dataset& test,
                        const SplitSpec& spec, std::uint64_t seed) {
  BenchmarkRow row;
  row.method = method;
  row.seed = seed;
  row.test_hash = content_hash(test);
  const auto p = class_partition(train);
  row.n_majority_after = p.majority.size();
  row.n_minority_after = p.minority.size();

  std::vector<ClassLabel> predicted(test.size());
  if (method == "easy-ensemble" || method == "balance-cascade") {
    EnsembleOptions opt;
    opt.seed = derive_seed(seed, "ensemble:" + method);
    MetaEnsemble ens;
    if (method == "easy-ensemble") {
      opt.n_members = 10;
      ens = easy_ensemble(train, opt);
    } else {
      opt.n_members = 4;
      ens = balance_cascade(train, opt);
    }
    for (std::size_t i = 0; i < test.size(); ++i) predicted[i] = meta_predict(ens, test.row(i));
  } else {
    const bool balanced = method == "weighted";
    Dataset fit_set = train;
    if (method != "baseline" && method != "weighted") {
      ResampleParams params;
      params.seed = derive_seed(seed, "sampler:" + method);
      auto res = resample(train, parse_method(method), params);
      row.n_majority_after = res.report.n_majority_after;
      row.n_minority_after = res.report.n_minority_after;
      fit_set = std::move(res.data);
    }
    SplitSpec cv = spec;
    cv.seed = derive_seed(seed, "cv:" + method);
    const auto choice = grid_search_logistic(fit_set, cv, GridOptions{default_grid(), balanced});
    const auto model =
        fit_logistic(fit_set, fit_options(choice.best, fit_set, balanced, derive_seed(seed, "fit:" + method)));
    predicted = predict_logistic(model, test).labels;
  }
  const auto m = metrics(confusion(test.labels(), predicted));
  row.precision_majority = m.precision_majority;
  row.recall_minority = m.recall_minority;
  return row;
}

}  // namespace

std::vector<BenchmarkRow> run_benchmark(const GenParams& gen, const SplitSpec& spec,
                                        const std::vector<std::string>& methods, std::uint64_t seed) {
  spec.validate();
  const auto data = benchmark_data(gen, spec, seed);
  const Dataset& train = data.split.train;
  const Dataset& test = data.split.test;
  const auto test_hash = content_hash(test);

  std::vector<BenchmarkRow> rows;
  for (const auto& method : methods) {
    try {
      rows.push_back(run_method(method, train, test, spec, seed));
    } catch (const std::exception& e) {
      BenchmarkRow row;
      row.method = method;
      row.seed = seed;
      row.test_hash = test_hash;
      row.error = e.what();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string benchmark_csv(const std::vector<BenchmarkRow>& rows) {
  std::string out = "method,precision_L,recall_S,n_L_after,n_S_after,seed\n";
  for (const auto& r : rows) {
    out += r.method;
    out += ',';
    if (r.precision_majority) out += format_double(*r.precision_majority);
    out += ',';
    if (r.recall_minority) out += format_double(*r.recall_minority);
    out += ',' + std::to_string(r.n_majority_after) + ',' + std::to_string(r.n_minority_after) + ',' +
           std::to_string(r.seed) + '\n';
  }
  return out;
}

std::vector<BenchmarkRow> parse_benchmark_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "method,precision_L,recall_S,n_L_after,n_S_after,seed")
    throw ParameterError("benchmark CSV header mismatch");
  std::vector<BenchmarkRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() != 6) throw ParameterError("benchmark CSV row needs 6 fields: " + line);
    BenchmarkRow r;
    r.method = cells[0];
    if (!cells[1].empty()) r.precision_majority = parse_double(cells[1]);
    if (!cells[2].empty()) r.recall_minority = parse_double(cells[2]);
    r.n_majority_after = std::stoull(cells[3]);
    r.n_minority_after = std::stoull(cells[4]);
    r.seed = std::stoull(cells[5]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string benchmark_table(const std::vector<BenchmarkRow>& rows) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-16s %12s %10s %8s %8s %6s\n", "method", "precision_L", "recall_S", "|L|",
                "|S|", "seed");
  out += buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-16s %12s %10s %8zu %8zu %6llu", r.method.c_str(),
                  format_metric(r.precision_majority).c_str(), format_metric(r.recall_minority).c_str(),
                  r.n_majority_after, r.n_minority_after, static_cast<unsigned long long>(r.seed));
    out += buf;
    if (!r.error.empty()) out += "  error: " + r.error;
    out += '\n';
  }
  return out;
}

}  // namespace imbal
