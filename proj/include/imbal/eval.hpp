#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imbal/core.hpp"
#include "imbal/datagen.hpp"
#include "imbal/learn.hpp"

namespace imbal {

struct SplitSpec {
  double train_fraction = 0.7;
  std::size_t folds = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainTest {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

/// Per-class shuffled split; each class puts round(f * n_c) rows in train,
/// clamped so both sides keep at least one row of every class.
TrainTest stratified_split(const Dataset& data, const SplitSpec& spec);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

/// Stratified folds: per class, shuffled rows are dealt round-robin.
std::vector<Fold> kfold_indices(const Dataset& data, std::size_t folds, std::uint64_t seed);

/// Unweighted mean of the two per-class F1 scores; an undefined F1 counts as 0.
double macro_f1(std::span<const ClassLabel> truth, std::span<const ClassLabel> predicted);

struct GridCandidate {
  Penalty penalty = Penalty::L2;
  double strength = 1.0;
};

/// strength in {0.01, 0.1, 1, 10, 100} x {L2, L1}, ordered by strength then L2 first.
std::vector<GridCandidate> default_grid();

struct GridOptions {
  std::vector<GridCandidate> grid = default_grid();
  bool balanced = false;
};

struct GridChoice {
  GridCandidate best;
  double score = 0.0;
  /// Mean validation macro-F1 per candidate; nullopt when a fold failed.
  std::vector<std::optional<double>> scores;
};

/// Cross-validated argmax of macro-F1. Ties go to the smaller strength, then L2.
GridChoice grid_search_logistic(const Dataset& train, const SplitSpec& spec, const GridOptions& options = {});

struct BenchmarkRow {
  std::string method;
  std::optional<double> precision_majority;
  std::optional<double> recall_minority;
  std::size_t n_majority_after = 0;
  std::size_t n_minority_after = 0;
  std::uint64_t seed = 0;
  /// Not part of the CSV; lets callers check every row saw the same test set.
  std::uint64_t test_hash = 0;
  std::string error;
};

/// The eighteen configurations in report order.
const std::vector<std::string>& benchmark_methods();

/// Expands "all" and comma lists, validating every name.
std::vector<std::string> parse_method_list(const std::string& spec);

struct BenchmarkData {
  Dataset projected;
  TrainTest split;
};

/// Generation, PCA to two components and the train/test split, with the
/// generator and split seeds derived from `seed`.
BenchmarkData benchmark_data(const GenParams& gen, const SplitSpec& spec, std::uint64_t seed);

std::vector<BenchmarkRow> run_benchmark(const GenParams& gen, const SplitSpec& spec,
                                        const std::vector<std::string>& methods, std::uint64_t seed);

/// Header method,precision_L,recall_S,n_L_after,n_S_after,seed; absent metrics are empty.
std::string benchmark_csv(const std::vector<BenchmarkRow>& rows);
std::vector<BenchmarkRow> parse_benchmark_csv(const std::string& text);

/// Aligned two-decimal table for terminals.
std::string benchmark_table(const std::vector<BenchmarkRow>& rows);

}  // namespace imbal
