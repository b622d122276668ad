#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "imbal/core.hpp"
#include "imbal/rng.hpp"

using namespace imbal;
using fixtures::L;
using fixtures::S;

TEST_CASE("dataset rejects bad shapes and values") {
  CHECK_THROWS_AS(Dataset(0), ParameterError);
  CHECK_THROWS_AS(Dataset({1.0, 2.0, 3.0}, {L, S}, 2), ParameterError);
  CHECK_THROWS_AS(Dataset({1.0, std::nan("")}, {L}, 2), ParameterError);
  CHECK_THROWS_AS(Dataset({1.0}, {static_cast<ClassLabel>(2)}, 1), ParameterError);
  Dataset d(2);
  CHECK_THROWS_AS(d.append(std::vector<double>{1.0}, L), ParameterError);
  CHECK_THROWS_AS(d.append(std::vector<double>{1.0, INFINITY}, L), ParameterError);
  d.append(std::vector<double>{1.0, 2.0}, S);
  CHECK(d.size() == 1);
  CHECK_THROWS_AS(d.subset(std::vector<std::size_t>{1}), ParameterError);
}

TEST_CASE("class partition is disjoint and exhaustive, tie goes to label 0") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto d = fixtures::random_small(rng);
    const auto p = class_partition(d);
    std::vector<int> seen(d.size(), 0);
    for (auto i : p.majority) {
      ++seen[i];
      CHECK(d.label(i) == p.majority_label);
    }
    for (auto i : p.minority) {
      ++seen[i];
      CHECK(d.label(i) == p.minority_label());
    }
    for (int s : seen) CHECK(s == 1);
    CHECK(p.majority.size() >= p.minority.size());
  }
  const auto tie = fixtures::line({{0.0, S}, {1.0, L}});
  CHECK(class_partition(tie).majority_label == ClassLabel::Majority);
  const auto flipped = fixtures::line({{0.0, S}, {1.0, S}, {2.0, L}});
  CHECK(class_partition(flipped).majority_label == ClassLabel::Minority);
}

TEST_CASE("imbalance ratio") {
  const auto d = fixtures::line({{0, L}, {1, L}, {2, L}, {3, L}, {4, S}});
  CHECK(imbalance_ratio(d) == doctest::Approx(0.25));
  Dataset empty(1);
  CHECK_THROWS_AS(imbalance_ratio(empty), ParameterError);
}

TEST_CASE("confusion and metrics") {
  const std::vector<ClassLabel> truth{S, S, S, L, L, L, L};
  const std::vector<ClassLabel> pred{S, L, S, L, S, L, L};
  const auto cm = confusion(truth, pred);
  CHECK(cm.tp_minority == 2);
  CHECK(cm.fn_minority == 1);
  CHECK(cm.tp_majority == 3);
  CHECK(cm.fn_majority == 1);
  CHECK(cm.total() == truth.size());
  const auto m = metrics(cm);
  // Majority precision: predicted-majority rows that are majority.
  CHECK(*m.precision_majority == doctest::Approx(3.0 / 4.0));
  CHECK(*m.recall_minority == doctest::Approx(2.0 / 3.0));

  const std::vector<ClassLabel> only_major{L, L};
  const auto none = metrics(confusion(only_major, std::vector<ClassLabel>{S, S}));
  CHECK_FALSE(none.precision_majority.has_value());
  CHECK_FALSE(none.recall_minority.has_value());
  CHECK(format_metric(none.recall_minority) == "-");
  CHECK_THROWS_AS(confusion(truth, only_major), ParameterError);
}

TEST_CASE("recall equals tp_minority over minority count for random predictors") {
  std::mt19937_64 rng(7);
  std::bernoulli_distribution coin(0.3);
  for (int t = 0; t < 100; ++t) {
    std::vector<ClassLabel> truth, pred;
    std::size_t n_minor = 0;
    for (int i = 0; i < 40; ++i) {
      truth.push_back(coin(rng) ? S : L);
      pred.push_back(coin(rng) ? S : L);
      n_minor += truth.back() == S;
    }
    const auto cm = confusion(truth, pred);
    const auto m = metrics(cm);
    if (n_minor == 0) {
      CHECK_FALSE(m.recall_minority.has_value());
    } else {
      CHECK(*m.recall_minority == static_cast<double>(cm.tp_minority) / static_cast<double>(n_minor));
    }
    if (m.precision_majority) CHECK((*m.precision_majority >= 0.0 && *m.precision_majority <= 1.0));
  }
}

TEST_CASE("format_metric rounds half away from zero") {
  CHECK(format_metric(0.125) == "0.13");
  CHECK(format_metric(0.5) == "0.50");
  CHECK(format_metric(1.0) == "1.00");
  CHECK(format_metric(0.0) == "0.00");
}

TEST_CASE("doubles round-trip through text") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK_THROWS_AS(parse_double("1.5x"), ParameterError);
  CHECK_THROWS_AS(parse_double(""), ParameterError);
}

TEST_CASE("csv round trip is exact") {
  std::mt19937_64 rng(11);
  const auto d = fixtures::random_blobs(rng, 30, 7, 1.3, 3);
  std::ostringstream out;
  write_csv(out, d);
  CHECK(out.str().rfind("f1,f2,f3,label\n", 0) == 0);
  std::istringstream in(out.str());
  CHECK(read_csv(in) == d);
}

TEST_CASE("csv rejects malformed input") {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_csv(in);
  };
  CHECK_THROWS_AS(parse(""), ParameterError);
  CHECK_THROWS_AS(parse("a,b,label\n1,2,0\n"), ParameterError);
  CHECK_THROWS_AS(parse("f1,label\n1,2\n"), ParameterError);
  CHECK_THROWS_AS(parse("f1,f2,label\n1,0\n"), ParameterError);
  CHECK(parse("f1,label\n1.5,1\n").label(0) == S);
}

TEST_CASE("report text round trip") {
  ResampleReport r{6320, 680, 1360, 680};
  CHECK(report_from_text(to_text(r)) == r);
  CHECK_THROWS_AS(report_from_text("n_majority_before=3\n"), ParameterError);
}

TEST_CASE("content hash separates datasets") {
  const auto a = fixtures::line({{0.0, L}, {1.0, S}});
  const auto b = fixtures::line({{0.0, L}, {1.0, L}});
  const auto c = fixtures::line({{0.0, L}, {1.5, S}});
  CHECK(content_hash(a) == content_hash(fixtures::line({{0.0, L}, {1.0, S}})));
  CHECK(content_hash(a) != content_hash(b));
  CHECK(content_hash(a) != content_hash(c));
}

TEST_CASE("random stream") {
  RandomStream a(5, "x"), b(5, "x"), c(5, "y");
  CHECK(a.next_u64() == b.next_u64());
  CHECK(RandomStream(5, "x").next_u64() != c.next_u64());
  RandomStream r(9);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = r.below(7);
    REQUIRE(v < 7);
    ++hits[v];
  }
  for (int h : hits) CHECK(std::abs(h - 10000) < 500);
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / 1e5) < 0.02);
  CHECK(std::abs(sq / 1e5 - 1.0) < 0.02);
  auto p = permutation(20, r);
  std::sort(p.begin(), p.end());
  for (std::size_t i = 0; i < 20; ++i) CHECK(p[i] == i);
}
