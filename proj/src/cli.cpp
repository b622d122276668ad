#include "imbal/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "imbal/core.hpp"
#include "imbal/datagen.hpp"
#include "imbal/ensemble.hpp"
#include "imbal/eval.hpp"
#include "imbal/plot.hpp"
#include "imbal/resample.hpp"
#include "imbal/rng.hpp"
#include "imbal/serialize.hpp"

namespace imbal {

namespace {

/// Raised for flag values that parse but name nothing valid.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Name lookups that fail are usage errors, not runtime failures.
template <class F>
auto as_usage(F&& lookup) {
  try {
    return lookup();
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
}

void add_gen_flags(CLI::App* cmd, GenParams& g) {
  cmd->add_option("--n-samples", g.n_samples, "number of points")->capture_default_str();
  cmd->add_option("--weights", g.weights, "minority,majority class shares")
      ->delimiter(',')
      ->expected(2)
      ->capture_default_str();
  cmd->add_option("--class-sep", g.class_sep, "hypercube half-side")->capture_default_str();
  cmd->add_option("--n-features", g.n_features)->capture_default_str();
  cmd->add_option("--n-informative", g.n_informative)->capture_default_str();
  cmd->add_option("--n-redundant", g.n_redundant)->capture_default_str();
  cmd->add_option("--n-clusters-per-class", g.n_clusters_per_class)->capture_default_str();
  cmd->add_option("--label-noise", g.label_noise, "fraction of labels flipped")->capture_default_str();
}

struct GenArgs {
  GenParams gen;
  std::uint64_t seed = 0;
  std::size_t pca = 2;
  double train_fraction = 0.7;
  std::string out;
  std::string train_out;
  std::string test_out;
};

struct ResampleArgs {
  std::string in;
  std::string method;
  ResampleParams params;
  std::string out;
  std::string report;
};

struct TrainArgs {
  std::string in;
  std::string learner = "logistic";
  std::string penalty = "l2";
  double strength = 1.0;
  bool balanced = false;
  std::size_t members = 0;
  std::size_t rounds = 10;
  std::uint64_t seed = 0;
  std::string out_model;
};

struct BenchArgs {
  GenParams gen;
  std::string methods = "all";
  std::uint64_t seed = 0;
  std::size_t sweep = 1;
  std::string out;
};

struct PlotArgs {
  std::string data;
  std::string model;
  std::size_t grid_res = 100;
  std::string out;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  GenParams g = a.gen;
  g.seed = derive_seed(a.seed, "generate");
  Dataset data = generate(g);
  if (a.pca > 0) data = pca_project(data, a.pca);
  save_csv(a.out, data);
  out << "wrote " << data.size() << " points (" << data.count(ClassLabel::Majority) << " majority, "
      << data.count(ClassLabel::Minority) << " minority) to " << a.out << '\n';
  if (!a.train_out.empty() || !a.test_out.empty()) {
    SplitSpec spec;
    spec.train_fraction = a.train_fraction;
    spec.seed = derive_seed(a.seed, "split");
    const auto split = stratified_split(data, spec);
    if (!a.train_out.empty()) {
      save_csv(a.train_out, split.train);
      out << "train split: " << split.train.count(ClassLabel::Majority) << " majority, "
          << split.train.count(ClassLabel::Minority) << " minority -> " << a.train_out << '\n';
    }
    if (!a.test_out.empty()) {
      save_csv(a.test_out, split.test);
      out << "test split: " << split.test.count(ClassLabel::Majority) << " majority, "
          << split.test.count(ClassLabel::Minority) << " minority -> " << a.test_out << '\n';
    }
  }
  return 0;
}

int cmd_resample(const ResampleArgs& a, std::ostream& out) {
  const Method method = parse_method(a.method);
  const Dataset data = load_csv(a.in);
  const auto res = resample(data, method, a.params);
  const std::string report = to_text(res.report);
  if (!a.out.empty()) save_csv(a.out, res.data);
  if (!a.report.empty())
    write_file_atomic(a.report, report);
  out << report;
  return 0;
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const Dataset data = load_csv(a.in);
  AnyModel model;
  if (a.learner == "logistic") {
    FitOptions opt;
    if (a.penalty == "cv") {
      SplitSpec spec;
      spec.seed = derive_seed(a.seed, "cv");
      const auto choice = grid_search_logistic(data, spec, GridOptions{default_grid(), a.balanced});
      opt.penalty = choice.best.penalty;
      opt.strength = choice.best.strength;
      out << "cv selected penalty " << penalty_name(opt.penalty) << ", strength " << format_double(opt.strength)
          << " (macro-F1 " << format_double(choice.score) << ")\n";
    } else {
      opt.penalty = parse_penalty(a.penalty);
      opt.strength = a.strength;
    }
    if (a.balanced) opt.class_weights = balanced_weights(data);
    opt.seed = a.seed;
    model = fit_logistic(data, opt);
  } else if (a.learner == "adaboost") {
    model = fit_adaboost(data, a.rounds, a.seed);
  } else if (a.learner == "easy-ensemble" || a.learner == "balance-cascade") {
    EnsembleOptions opt;
    opt.rounds = a.rounds;
    opt.seed = a.seed;
    const bool easy = a.learner == "easy-ensemble";
    opt.n_members = a.members > 0 ? a.members : (easy ? 10 : 4);
    model = easy ? easy_ensemble(data, opt) : balance_cascade(data, opt);
  } else {
    throw UsageError("unknown learner '" + a.learner + "'; valid: logistic|adaboost|easy-ensemble|balance-cascade");
  }

  std::vector<ClassLabel> pred(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) pred[i] = predict(model, data.row(i));
  const auto m = metrics(confusion(data.labels(), pred));
  out << "training precision_L " << format_metric(m.precision_majority) << ", recall_S "
      << format_metric(m.recall_minority) << '\n';
  if (!a.out_model.empty()) save_model(a.out_model, model);
  return 0;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  const auto methods = parse_method_list(a.methods);
  if (a.sweep == 0) throw UsageError("--sweep-seeds must be at least 1");
  std::vector<BenchmarkRow> rows;
  for (std::size_t s = 0; s < a.sweep; ++s) {
    auto part = run_benchmark(a.gen, SplitSpec{}, methods, a.seed + s);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  out << benchmark_table(rows);
  if (!a.out.empty()) write_file_atomic(a.out, benchmark_csv(rows));
  return 0;
}

int cmd_plot(const PlotArgs& a, std::ostream& out) {
  const Dataset data = load_csv(a.data);
  std::optional<AnyModel> model;
  if (!a.model.empty()) model = load_model(a.model);
  const auto svg = render_plot(data, model, a.grid_res);
  write_file_atomic(a.out, svg);
  out << "wrote " << a.out << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Resampling methods and benchmarks for imbalanced binary classification", "imbal"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate the synthetic dataset as CSV");
  add_gen_flags(gen_cmd, gen.gen);
  gen_cmd->add_option("--seed", gen.seed, "master seed (same derivation as bench)")->capture_default_str();
  gen_cmd->add_option("--pca", gen.pca, "principal components to keep (0 keeps raw features)")->capture_default_str();
  gen_cmd->add_option("--train-fraction", gen.train_fraction)->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "output CSV")->required();
  gen_cmd->add_option("--train-out", gen.train_out, "also write the benchmark train split");
  gen_cmd->add_option("--test-out", gen.test_out, "also write the benchmark test split");

  ResampleArgs rs;
  auto* rs_cmd = app.add_subcommand("resample", "resample a CSV dataset");
  rs_cmd->add_option("--in", rs.in, "input CSV")->required();
  rs_cmd->add_option("--method", rs.method,
                     "random-under|nearmiss1|nearmiss2|nearmiss3|cnn|enn|renn|tomek|random-over|smote|bsmote1|"
                     "bsmote2|smote-tomek|smote-enn")
      ->required();
  rs_cmd->add_option("--k", rs.params.k, "neighbours (0: method default)")->capture_default_str();
  rs_cmd->add_option("--m", rs.params.m, "borderline neighbourhood size")->capture_default_str();
  rs_cmd->add_option("--k-enn", rs.params.k_enn, "ENN neighbours for smote-enn")->capture_default_str();
  rs_cmd->add_option("--ratio", rs.params.ratio, "target |S|/|L|")->capture_default_str();
  rs_cmd->add_option("--max-iters", rs.params.max_iters, "RENN pass limit")->capture_default_str();
  rs_cmd->add_option("--seed", rs.params.seed)->capture_default_str();
  rs_cmd->add_option("--out", rs.out, "resampled CSV");
  rs_cmd->add_option("--report", rs.report, "write the count report here");

  TrainArgs tr;
  auto* tr_cmd = app.add_subcommand("train", "fit a model on a CSV dataset");
  tr_cmd->add_option("--in", tr.in, "training CSV")->required();
  tr_cmd->add_option("--learner", tr.learner, "logistic|adaboost|easy-ensemble|balance-cascade")
      ->capture_default_str();
  tr_cmd->add_option("--penalty", tr.penalty, "l1|l2|none|cv")->capture_default_str();
  tr_cmd->add_option("--strength", tr.strength, "inverse regularization C")->capture_default_str();
  tr_cmd->add_flag("--balanced", tr.balanced, "weight classes inversely to their sizes");
  tr_cmd->add_option("--members", tr.members, "ensemble size (0: learner default)");
  tr_cmd->add_option("--rounds", tr.rounds, "boosting rounds per member")->capture_default_str();
  tr_cmd->add_option("--seed", tr.seed)->capture_default_str();
  tr_cmd->add_option("--out-model", tr.out_model, "model record output");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "run the full benchmark protocol");
  add_gen_flags(bench_cmd, bench.gen);
  bench_cmd->add_option("--methods", bench.methods, "all or a comma list")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed)->capture_default_str();
  bench_cmd->add_option("--sweep-seeds", bench.sweep, "run seeds seed..seed+n-1")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "benchmark CSV");

  PlotArgs plot;
  auto* plot_cmd = app.add_subcommand("plot", "render a 2-D dataset (and model regions) as SVG");
  plot_cmd->add_option("--data", plot.data, "2-D CSV")->required();
  plot_cmd->add_option("--model", plot.model, "model record");
  plot_cmd->add_option("--grid-res", plot.grid_res, "lattice resolution")->capture_default_str();
  plot_cmd->add_option("--out", plot.out, "SVG output")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, out);
    if (rs_cmd->parsed()) {
      as_usage([&] { return parse_method(rs.method); });
      return cmd_resample(rs, out);
    }
    if (tr_cmd->parsed()) {
      if (tr.penalty != "cv") as_usage([&] { return parse_penalty(tr.penalty); });
      return cmd_train(tr, out);
    }
    if (bench_cmd->parsed()) {
      as_usage([&] { return parse_method_list(bench.methods); });
      return cmd_bench(bench, out);
    }
    if (plot_cmd->parsed()) return cmd_plot(plot, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace imbal
