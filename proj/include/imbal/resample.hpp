#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "imbal/core.hpp"

namespace imbal {

/// Desired |S|/|L| after resampling, in (0, 1].
class RatioTarget {
 public:
  explicit RatioTarget(double r);
  double value() const { return r_; }

 private:
  double r_;
};

inline constexpr std::size_t kSynthetic = std::numeric_limits<std::size_t>::max();

struct ResampleResult {
  Dataset data;
  ResampleReport report;
  /// For each output row, the input row it copies, or kSynthetic.
  std::vector<std::size_t> source_rows;
  /// Edit passes run (RENN); 1 for single-pass samplers.
  std::size_t iterations = 1;
};

// Count arithmetic shared by the ratio-controlled samplers.
std::size_t majority_keep_count(std::size_t n_minority, std::size_t n_majority, RatioTarget r);
std::size_t minority_add_count(std::size_t n_minority, std::size_t n_majority, RatioTarget r);

// ---- undersampling -------------------------------------------------------

ResampleResult random_undersample(const Dataset& data, RatioTarget r, std::uint64_t seed);

enum class NearMissVariant { One = 1, Two = 2, Three = 3 };

/// Majority rows NearMiss keeps, ascending.
std::vector<std::size_t> nearmiss_select(const Dataset& data, NearMissVariant variant, std::size_t k,
                                         RatioTarget r);

ResampleResult nearmiss(const Dataset& data, NearMissVariant variant, std::size_t k, RatioTarget r,
                        std::uint64_t seed);

/// Condensed set U grown from a random minority seed point. Returned
/// ascending.
std::vector<std::size_t> cnn_select(const Dataset& data, std::uint64_t seed);
/// Same, with an explicit first member of U.
std::vector<std::size_t> cnn_select_from(const Dataset& data, std::size_t first, std::uint64_t seed);

/// All minority rows plus the majority rows of the condensed set.
ResampleResult cnn_undersample(const Dataset& data, std::uint64_t seed);

/// Majority rows whose k-NN vote (self excluded, whole dataset) is
/// minority-dominated. Ascending.
std::vector<std::size_t> enn_removals(const Dataset& data, std::size_t k);

ResampleResult enn_undersample(const Dataset& data, std::size_t k);

/// Thrown when repeated editing has not reached a fixpoint in max_iters passes.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ResampleResult renn_undersample(const Dataset& data, std::size_t k, std::size_t max_iters = 100);

enum class TomekMode { MajorityOnly, Both };

ResampleResult tomek_removal(const Dataset& data, TomekMode mode);

// ---- oversampling --------------------------------------------------------

ResampleResult random_oversample(const Dataset& data, RatioTarget r, std::uint64_t seed);

/// One interpolation: output = base + gap * (neighbor - base).
struct SyntheticDraw {
  std::size_t base = 0;
  std::size_t neighbor = 0;
  double gap = 0.0;
};

struct SmoteResult {
  ResampleResult result;
  /// Row indices into the input dataset, one per synthetic row, in output order.
  std::vector<SyntheticDraw> draws;
};

SmoteResult smote_detailed(const Dataset& data, std::size_t k, RatioTarget r, std::uint64_t seed);
ResampleResult smote(const Dataset& data, std::size_t k, RatioTarget r, std::uint64_t seed);

/// Minority rows classified by the majority share m' of their m nearest
/// neighbours in the whole dataset.
struct BorderlineSets {
  std::vector<std::size_t> danger;
  std::vector<std::size_t> safe;
  std::vector<std::size_t> noise;
};

BorderlineSets borderline_classify(const Dataset& data, std::size_t m);

enum class BorderlineVariant { One = 1, Two = 2 };

SmoteResult borderline_smote_detailed(const Dataset& data, BorderlineVariant variant, std::size_t m,
                                      std::size_t k, RatioTarget r, std::uint64_t seed);
ResampleResult borderline_smote(const Dataset& data, BorderlineVariant variant, std::size_t m,
                                std::size_t k, RatioTarget r, std::uint64_t seed);

// ---- combinations --------------------------------------------------------

ResampleResult smote_tomek(const Dataset& data, std::size_t k, RatioTarget r, std::uint64_t seed);
ResampleResult smote_enn(const Dataset& data, std::size_t k_smote, std::size_t k_enn, RatioTarget r,
                         std::uint64_t seed);

// ---- by name -------------------------------------------------------------

enum class Method {
  RandomUnder,
  NearMiss1,
  NearMiss2,
  NearMiss3,
  Cnn,
  Enn,
  Renn,
  Tomek,
  RandomOver,
  Smote,
  BorderlineSmote1,
  BorderlineSmote2,
  SmoteTomek,
  SmoteEnn,
};

/// Knobs for name-based dispatch. Defaults are the benchmark settings:
/// k=3 for NearMiss, k=5 elsewhere, r=0.5.
struct ResampleParams {
  double ratio = 0.5;
  /// 0 selects the per-method default.
  std::size_t k = 0;
  std::size_t k_enn = 5;
  std::size_t m = 10;
  std::size_t max_iters = 100;
  std::uint64_t seed = 0;
};

std::string_view method_name(Method m);
Method parse_method(std::string_view name);
const std::vector<Method>& all_methods();
std::size_t default_k(Method m);

ResampleResult resample(const Dataset& data, Method method, const ResampleParams& params);

}  // namespace imbal
