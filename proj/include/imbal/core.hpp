#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace imbal {

/// Raised for invalid arguments: bad shapes, out-of-range knobs, empty classes.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Serialized as 0 (majority) and 1 (minority).
enum class ClassLabel : std::uint8_t { Majority = 0, Minority = 1 };

inline ClassLabel other(ClassLabel c) {
  return c == ClassLabel::Majority ? ClassLabel::Minority : ClassLabel::Majority;
}

/// Dense row-major feature matrix with one binary label per row.
class Dataset {
 public:
  explicit Dataset(std::size_t dims);
  Dataset(std::vector<double> features, std::vector<ClassLabel> labels, std::size_t dims);

  std::size_t size() const { return labels_.size(); }
  std::size_t dims() const { return dims_; }
  bool empty() const { return labels_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * dims_, dims_};
  }
  ClassLabel label(std::size_t i) const { return labels_[i]; }

  const std::vector<double>& features() const { return features_; }
  const std::vector<ClassLabel>& labels() const { return labels_; }

  std::size_t count(ClassLabel c) const;

  /// Rows in the order given; indices may repeat.
  Dataset subset(std::span<const std::size_t> rows) const;

  void append(std::span<const double> x, ClassLabel c);
  void reserve(std::size_t rows);

  bool operator==(const Dataset&) const = default;

 private:
  std::size_t dims_;
  std::vector<double> features_;
  std::vector<ClassLabel> labels_;
};

/// Index lists for the two classes. The majority is the label with strictly
/// more rows; an exact tie makes label 0 the majority.
struct ClassPartition {
  ClassLabel majority_label = ClassLabel::Majority;
  std::vector<std::size_t> majority;
  std::vector<std::size_t> minority;

  ClassLabel minority_label() const { return other(majority_label); }
};

ClassPartition class_partition(const Dataset& data);

/// |S| / |L|. Throws ParameterError when the majority class is empty.
double imbalance_ratio(const Dataset& data);

struct ResampleReport {
  std::size_t n_majority_before = 0;
  std::size_t n_minority_before = 0;
  std::size_t n_majority_after = 0;
  std::size_t n_minority_after = 0;

  bool operator==(const ResampleReport&) const = default;
};

std::string to_text(const ResampleReport& report);
ResampleReport report_from_text(const std::string& text);

/// Binary confusion counts. A majority point predicted minority is
/// fn_majority; a minority point predicted majority is fn_minority.
struct ConfusionMatrix {
  std::size_t tp_minority = 0;
  std::size_t fn_minority = 0;
  std::size_t tp_majority = 0;
  std::size_t fn_majority = 0;

  std::size_t total() const { return tp_minority + fn_minority + tp_majority + fn_majority; }
};

ConfusionMatrix confusion(std::span<const ClassLabel> truth, std::span<const ClassLabel> predicted);

struct EvalMetrics {
  std::optional<double> precision_majority;
  std::optional<double> recall_minority;
};

EvalMetrics metrics(const ConfusionMatrix& cm);

/// Two-decimal rendering, half away from zero; empty optional renders as "-".
std::string format_metric(std::optional<double> v);

// Shortest round-trip decimal form.
std::string format_double(double v);
double parse_double(std::string_view text);

void write_csv(std::ostream& out, const Dataset& data);
Dataset read_csv(std::istream& in);

void save_csv(const std::string& path, const Dataset& data);
Dataset load_csv(const std::string& path);

/// Writes `contents` to `path` through a temp file and rename.
void write_file_atomic(const std::string& path, const std::string& contents);

/// FNV-1a over features and labels; used to prove the test split never changes.
std::uint64_t content_hash(const Dataset& data);

}  // namespace imbal
