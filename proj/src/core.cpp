#include "imbal/core.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace imbal {

Dataset::Dataset(std::size_t dims) : dims_(dims) {
  if (dims_ == 0) throw ParameterError("dataset needs at least one feature column");
}

Dataset::Dataset(std::vector<double> features, std::vector<ClassLabel> labels, std::size_t dims)
    : dims_(dims), features_(std::move(features)), labels_(std::move(labels)) {
  if (dims_ == 0) throw ParameterError("dataset needs at least one feature column");
  if (features_.size() != labels_.size() * dims_)
    throw ParameterError("feature matrix has " + std::to_string(features_.size()) +
                         " values, expected " + std::to_string(labels_.size() * dims_));
  for (double v : features_)
    if (!std::isfinite(v)) throw ParameterError("non-finite feature value");
  for (ClassLabel c : labels_)
    if (c != ClassLabel::Majority && c != ClassLabel::Minority)
      throw ParameterError("label out of range");
}

std::size_t Dataset::count(ClassLabel c) const {
  std::size_t n = 0;
  for (ClassLabel l : labels_) n += (l == c);
  return n;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out(dims_);
  out.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= size()) throw ParameterError("subset row out of range");
    out.append(row(r), labels_[r]);
  }
  return out;
}

void Dataset::append(std::span<const double> x, ClassLabel c) {
  if (x.size() != dims_) throw ParameterError("row dimension mismatch");
  for (double v : x)
    if (!std::isfinite(v)) throw ParameterError("non-finite feature value");
  features_.insert(features_.end(), x.begin(), x.end());
  labels_.push_back(c);
}

void Dataset::reserve(std::size_t rows) {
  features_.reserve(rows * dims_);
  labels_.reserve(rows);
}

ClassPartition class_partition(const Dataset& data) {
  const std::size_t n1 = data.count(ClassLabel::Minority);
  const std::size_t n0 = data.size() - n1;
  ClassPartition p;
  p.majority_label = n1 > n0 ? ClassLabel::Minority : ClassLabel::Majority;
  p.majority.reserve(std::max(n0, n1));
  p.minority.reserve(std::min(n0, n1));
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.label(i) == p.majority_label)
      p.majority.push_back(i);
    else
      p.minority.push_back(i);
  }
  return p;
}

double imbalance_ratio(const Dataset& data) {
  const auto p = class_partition(data);
  if (p.majority.empty()) throw ParameterError("imbalance ratio undefined: no majority points");
  return static_cast<double>(p.minority.size()) / static_cast<double>(p.majority.size());
}

std::string to_text(const ResampleReport& r) {
  std::ostringstream os;
  os << "n_majority_before=" << r.n_majority_before << '\n'
     << "n_minority_before=" << r.n_minority_before << '\n'
     << "n_majority_after=" << r.n_majority_after << '\n'
     << "n_minority_after=" << r.n_minority_after << '\n';
  return os.str();
}

ResampleReport report_from_text(const std::string& text) {
  std::map<std::string, std::size_t> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParameterError("malformed report line: " + line);
    kv[line.substr(0, eq)] = std::stoull(line.substr(eq + 1));
  }
  auto get = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParameterError(std::string("report missing ") + key);
    return it->second;
  };
  return {get("n_majority_before"), get("n_minority_before"), get("n_majority_after"),
          get("n_minority_after")};
}

ConfusionMatrix confusion(std::span<const ClassLabel> truth, std::span<const ClassLabel> predicted) {
  if (truth.size() != predicted.size()) throw ParameterError("confusion: length mismatch");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t_min = truth[i] == ClassLabel::Minority;
    const bool p_min = predicted[i] == ClassLabel::Minority;
    if (t_min)
      (p_min ? cm.tp_minority : cm.fn_minority)++;
    else
      (p_min ? cm.fn_majority : cm.tp_majority)++;
  }
  return cm;
}

EvalMetrics metrics(const ConfusionMatrix& cm) {
  EvalMetrics m;
  // Points predicted majority: true majority plus missed minority.
  if (const auto den = cm.tp_majority + cm.fn_minority; den > 0)
    m.precision_majority = static_cast<double>(cm.tp_majority) / static_cast<double>(den);
  if (const auto den = cm.tp_minority + cm.fn_minority; den > 0)
    m.recall_minority = static_cast<double>(cm.tp_minority) / static_cast<double>(den);
  return m;
}

std::string format_metric(std::optional<double> v) {
  if (!v) return "-";
  const double r = std::round(*v * 100.0) / 100.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", r);
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return {buf, end};
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParameterError("not a number: '" + std::string(text) + "'");
  return v;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const Dataset& data) {
  std::string buf;
  for (std::size_t j = 0; j < data.dims(); ++j) {
    buf += 'f';
    buf += std::to_string(j + 1);
    buf += ',';
  }
  buf += "label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.row(i)) {
      buf += format_double(v);
      buf += ',';
    }
    buf += data.label(i) == ClassLabel::Minority ? '1' : '0';
    buf += '\n';
  }
  out << buf;
}

Dataset read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParameterError("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_commas(line);
  if (header.size() < 2 || header.back() != "label")
    throw ParameterError("CSV header must be f1,...,fd,label");
  const std::size_t d = header.size() - 1;
  for (std::size_t j = 0; j < d; ++j)
    if (header[j] != "f" + std::to_string(j + 1))
      throw ParameterError("unexpected CSV column '" + std::string(header[j]) + "'");

  std::vector<double> features;
  std::vector<ClassLabel> labels;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != d + 1)
      throw ParameterError("CSV line " + std::to_string(lineno) + ": expected " +
                           std::to_string(d + 1) + " fields");
    for (std::size_t j = 0; j < d; ++j) features.push_back(parse_double(cells[j]));
    if (cells[d] == "0")
      labels.push_back(ClassLabel::Majority);
    else if (cells[d] == "1")
      labels.push_back(ClassLabel::Minority);
    else
      throw ParameterError("CSV line " + std::to_string(lineno) + ": label must be 0 or 1");
  }
  return Dataset(std::move(features), std::move(labels), d);
}

void save_csv(const std::string& path, const Dataset& data) {
  std::ostringstream os;
  write_csv(os, data);
  write_file_atomic(path, os.str());
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_csv(in);
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << contents;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::uint64_t content_hash(const Dataset& data) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  };
  const std::uint64_t dims = data.dims();
  mix(&dims, sizeof dims);
  mix(data.features().data(), data.features().size() * sizeof(double));
  mix(data.labels().data(), data.labels().size() * sizeof(ClassLabel));
  return h;
}

}  // namespace imbal
