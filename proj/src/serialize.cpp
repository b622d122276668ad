#include "imbal/serialize.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace imbal {

namespace {

std::string join(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += format_double(v[i]);
  }
  return s;
}

void write_boosted(std::ostringstream& os, const BoostedModel& m) {
  os << "model boosted\n"
     << "threshold_b " << format_double(m.threshold_b) << '\n'
     << "stumps " << m.stumps.size() << '\n';
  for (std::size_t j = 0; j < m.stumps.size(); ++j) {
    const auto& s = m.stumps[j];
    os << "stump " << s.feature_index << ' ' << format_double(s.threshold) << ' ' << s.polarity << ' '
       << format_double(m.alphas[j]) << '\n';
  }
  os << "end\n";
}

class Reader {
 public:
  explicit Reader(const std::string& text) : in_(text) {}

  /// Next non-empty line split into tokens; the first token must equal `key`.
  std::vector<std::string> expect(const std::string& key) {
    std::string line;
    while (std::getline(in_, line)) {
      ++lineno_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::vector<std::string> tok;
      for (std::string t; ls >> t;) tok.push_back(t);
      if (tok.front() != key) fail("expected '" + key + "', found '" + tok.front() + "'");
      return tok;
    }
    fail("unexpected end of model record, expected '" + key + "'");
  }

  std::vector<double> reals(const std::string& key, std::size_t count) {
    const auto tok = expect(key);
    if (tok.size() != count + 1) fail("'" + key + "' expects " + std::to_string(count) + " values");
    std::vector<double> v;
    for (std::size_t i = 1; i < tok.size(); ++i) v.push_back(parse_double(tok[i]));
    return v;
  }

  double real(const std::string& key) { return reals(key, 1)[0]; }

  std::size_t count(const std::string& key) {
    const auto tok = expect(key);
    if (tok.size() != 2) fail("'" + key + "' expects one integer");
    return std::stoull(tok[1]);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParameterError("model record line " + std::to_string(lineno_) + ": " + what);
  }

 private:
  std::istringstream in_;
  std::size_t lineno_ = 0;
};

LinearModel read_linear(Reader& r) {
  LinearModel m;
  const auto pen = r.expect("penalty");
  if (pen.size() != 2) r.fail("'penalty' expects one value");
  m.penalty = parse_penalty(pen[1]);
  m.strength = r.real("strength");
  const auto w = r.reals("class_weights", 2);
  m.class_weights = {w[0], w[1]};
  const std::size_t d = r.count("dims");
  m.mean = r.reals("mean", d);
  m.scale = r.reals("scale", d);
  m.theta = r.reals("theta", d + 1);
  r.expect("end");
  return m;
}

BoostedModel read_boosted(Reader& r) {
  BoostedModel m;
  m.threshold_b = r.real("threshold_b");
  const std::size_t n = r.count("stumps");
  for (std::size_t j = 0; j < n; ++j) {
    const auto tok = r.expect("stump");
    if (tok.size() != 5) r.fail("'stump' expects feature threshold polarity alpha");
    Stump s;
    s.feature_index = std::stoull(tok[1]);
    s.threshold = parse_double(tok[2]);
    s.polarity = std::stoi(tok[3]);
    if (s.polarity != 1 && s.polarity != -1) r.fail("stump polarity must be 1 or -1");
    m.stumps.push_back(s);
    m.alphas.push_back(parse_double(tok[4]));
  }
  r.expect("end");
  return m;
}

std::string model_kind(Reader& r) {
  const auto tok = r.expect("model");
  if (tok.size() != 2) r.fail("'model' expects a kind");
  return tok[1];
}

}  // namespace

std::string to_text(const LinearModel& m) {
  std::ostringstream os;
  os << "model logistic\n"
     << "penalty " << penalty_name(m.penalty) << '\n'
     << "strength " << format_double(m.strength) << '\n'
     << "class_weights " << format_double(m.class_weights.majority) << ' '
     << format_double(m.class_weights.minority) << '\n'
     << "dims " << m.dims() << '\n'
     << "mean " << join(m.mean) << '\n'
     << "scale " << join(m.scale) << '\n'
     << "theta " << join(m.theta) << '\n'
     << "end\n";
  return os.str();
}

std::string to_text(const BoostedModel& m) {
  std::ostringstream os;
  write_boosted(os, m);
  return os.str();
}

std::string to_text(const MetaEnsemble& e) {
  std::ostringstream os;
  os << "model meta\n"
     << "members " << e.members.size() << '\n';
  for (const auto& m : e.members) write_boosted(os, m);
  os << "end\n";
  return os.str();
}

std::string to_text(const AnyModel& model) {
  return std::visit([](const auto& m) { return to_text(m); }, model);
}

AnyModel model_from_text(const std::string& text) {
  Reader r(text);
  const auto kind = model_kind(r);
  if (kind == "logistic") return read_linear(r);
  if (kind == "boosted") return read_boosted(r);
  if (kind == "meta") {
    MetaEnsemble e;
    const std::size_t n = r.count("members");
    for (std::size_t i = 0; i < n; ++i) {
      if (model_kind(r) != "boosted") r.fail("meta members must be boosted models");
      e.members.push_back(read_boosted(r));
    }
    r.expect("end");
    return e;
  }
  r.fail("unknown model kind '" + kind + "'");
}

AnyModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_text(ss.str());
}

void save_model(const std::string& path, const AnyModel& model) { write_file_atomic(path, to_text(model)); }

ClassLabel predict(const AnyModel& model, std::span<const double> x) {
  struct Visitor {
    std::span<const double> x;
    ClassLabel operator()(const LinearModel& m) const {
      return logistic_score(m, x) >= 0.5 ? ClassLabel::Minority : ClassLabel::Majority;
    }
    ClassLabel operator()(const BoostedModel& m) const { return boosted_predict(m, x); }
    ClassLabel operator()(const MetaEnsemble& m) const { return meta_predict(m, x); }
  };
  return std::visit(Visitor{x}, model);
}

}  // namespace imbal
