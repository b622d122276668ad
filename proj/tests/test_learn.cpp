#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>

#include "doctest.h"
#include "fixtures.hpp"
#include "imbal/learn.hpp"

using namespace imbal;
using fixtures::L;
using fixtures::S;

namespace {

struct Problem {
  std::vector<double> x;
  std::vector<ClassLabel> y;
  std::vector<double> w;
  std::size_t n, d;
  LogisticProblem view() const { return {x, n, d, y, w}; }
};

Problem random_problem(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  Problem p{{}, {}, {}, n, d};
  for (std::size_t i = 0; i < n * d; ++i) p.x.push_back(g(rng));
  for (std::size_t i = 0; i < n; ++i) {
    p.y.push_back(rng() % 3 == 0 ? S : L);
    p.w.push_back(u(rng));
  }
  return p;
}

// Stable reference: log(1 + exp(z)) written out per row.
double reference_loss(const Problem& p, const std::vector<double>& theta) {
  double f = 0.0;
  for (std::size_t i = 0; i < p.n; ++i) {
    double z = theta[p.d];
    for (std::size_t j = 0; j < p.d; ++j) z += theta[j] * p.x[i * p.d + j];
    const double m = p.y[i] == S ? -z : z;
    f += p.w[i] * (m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m)));
  }
  return f;
}

// Exhaustive stump search: every midpoint, both polarities, direct error sums.
std::tuple<Stump, double> brute_stump(const Dataset& d, const std::vector<double>& w) {
  bool found = false;
  Stump best;
  double best_err = 0.0;
  for (std::size_t f = 0; f < d.dims(); ++f) {
    std::vector<double> vals;
    for (std::size_t i = 0; i < d.size(); ++i) vals.push_back(d.row(i)[f]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t a = 0; a + 1 < vals.size(); ++a)
      for (int pol : {-1, 1}) {
        const Stump s{f, vals[a] + (vals[a + 1] - vals[a]) / 2.0, pol};
        double err = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i)
          if ((s.predict(d.row(i)) == 1) != (d.label(i) == S)) err += w[i];
        if (!found || err < best_err) {
          best = s;
          best_err = err;
          found = true;
        }
      }
  }
  return {best, best_err};
}

}  // namespace

TEST_CASE("penalty names") {
  CHECK(parse_penalty("l1") == Penalty::L1);
  CHECK(parse_penalty(penalty_name(Penalty::L2)) == Penalty::L2);
  CHECK(parse_penalty("none") == Penalty::None);
  CHECK_THROWS_AS(parse_penalty("l3"), ParameterError);
}

TEST_CASE("balanced weights") {
  Dataset d(1);
  for (int i = 0; i < 6320; ++i) d.append(std::vector<double>{0.0}, L);
  for (int i = 0; i < 680; ++i) d.append(std::vector<double>{1.0}, S);
  const auto w = balanced_weights(d);
  CHECK(w.majority == doctest::Approx(7000.0 / 12640.0));
  CHECK(w.minority == doctest::Approx(7000.0 / 1360.0));
  const auto even = balanced_weights(fixtures::line({{0, L}, {1, S}}));
  CHECK(even.majority == 1.0);
  CHECK(even.minority == 1.0);
  CHECK_THROWS_AS(balanced_weights(fixtures::line({{0, L}})), ParameterError);
}

TEST_CASE("objective matches a direct evaluation and its gradient matches finite differences") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    const auto p = random_problem(rng, 40, 3);
    std::vector<double> theta(4);
    for (double& v : theta) v = g(rng);
    std::vector<double> grad;
    const double f = logistic_objective(p.view(), theta, Penalty::L2, 2.0, &grad);
    double pen = 0.0;
    for (std::size_t j = 0; j < 3; ++j) pen += theta[j] * theta[j];
    CHECK(f == doctest::Approx(reference_loss(p, theta) + pen / 4.0).epsilon(1e-12));
    for (std::size_t j = 0; j < theta.size(); ++j) {
      auto hi = theta, lo = theta;
      hi[j] += 1e-5;
      lo[j] -= 1e-5;
      const double fd = (logistic_objective(p.view(), hi, Penalty::L2, 2.0) -
                         logistic_objective(p.view(), lo, Penalty::L2, 2.0)) /
                        2e-5;
      CHECK(std::fabs(fd - grad[j]) <= 1e-6 * std::max(1.0, std::fabs(grad[j])));
    }
  }
}

TEST_CASE("weighted loss is convex along random chords") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int t = 0; t < 100; ++t) {
    const auto p = random_problem(rng, 30, 2);
    std::vector<double> a(3), b(3), mid(3);
    for (std::size_t j = 0; j < 3; ++j) {
      a[j] = g(rng);
      b[j] = g(rng);
      mid[j] = 0.5 * (a[j] + b[j]);
    }
    for (Penalty pen : {Penalty::None, Penalty::L1, Penalty::L2}) {
      const double fm = logistic_objective(p.view(), mid, pen, 0.5);
      const double fa = logistic_objective(p.view(), a, pen, 0.5);
      const double fb = logistic_objective(p.view(), b, pen, 0.5);
      CHECK(fm <= 0.5 * (fa + fb) + 1e-12);
    }
  }
}

TEST_CASE("1-D separable data is fitted perfectly for strength >= 1") {
  const auto d = fixtures::line({{-3, L}, {-2, L}, {-1.5, L}, {-1, L}, {1, S}, {2, S}});
  // Grid oracle: some theta on a coarse grid separates the data.
  bool grid_separates = false;
  for (double a = -5; a <= 5 && !grid_separates; a += 0.5)
    for (double b = -5; b <= 5 && !grid_separates; b += 0.5) {
      bool ok = true;
      for (std::size_t i = 0; i < d.size(); ++i) ok = ok && ((a * d.row(i)[0] + b >= 0) == (d.label(i) == S));
      grid_separates = ok;
    }
  REQUIRE(grid_separates);
  for (double c : {1.0, 10.0, 100.0}) {
    FitOptions o;
    o.strength = c;
    const auto m = fit_logistic(d, o);
    CHECK(predict_logistic(m, d).labels == d.labels());
  }
}

TEST_CASE("fit loss sequence never increases") {
  std::mt19937_64 rng(12);
  for (Penalty pen : {Penalty::L1, Penalty::L2}) {
    const auto d = fixtures::random_blobs(rng, 120, 30, 1.0, 3);
    FitOptions o;
    o.penalty = pen;
    o.strength = 0.5;
    o.class_weights = balanced_weights(d);
    FitTrace tr;
    const auto m = fit_logistic(d, o, &tr);
    REQUIRE(tr.losses.size() >= 2);
    for (std::size_t i = 1; i < tr.losses.size(); ++i) CHECK(tr.losses[i] <= tr.losses[i - 1]);
    CHECK(weighted_log_loss(m, d, o.class_weights) >= 0.0);
    for (double v : m.theta) CHECK(std::isfinite(v));
  }
}

TEST_CASE("L1 at small strength zeroes coordinates exactly") {
  std::mt19937_64 rng(13);
  const auto d = fixtures::random_blobs(rng, 100, 40, 0.8, 4);
  FitOptions o;
  o.penalty = Penalty::L1;
  o.strength = 1e-3;
  const auto m = fit_logistic(d, o);
  for (std::size_t j = 0; j < 4; ++j) CHECK(m.theta[j] == 0.0);
  o.strength = 1e-2;
  const auto m2 = fit_logistic(d, o);
  CHECK(std::count(m2.theta.begin(), m2.theta.end() - 1, 0.0) >= 1);
}

TEST_CASE("unpenalized minimiser is unchanged by scaling both class weights") {
  std::mt19937_64 rng(14);
  const auto d = fixtures::random_blobs(rng, 80, 40, 0.7);
  FitOptions o;
  o.penalty = Penalty::None;
  o.tol = 1e-14;
  o.max_iters = 20000;
  o.class_weights = {1.0, 3.0};
  const auto a = fit_logistic(d, o);
  o.class_weights = {7.0, 21.0};
  const auto b = fit_logistic(d, o);
  for (std::size_t j = 0; j < a.theta.size(); ++j) CHECK(a.theta[j] == doctest::Approx(b.theta[j]).epsilon(1e-4));
}

TEST_CASE("fit reports non-convergence") {
  std::mt19937_64 rng(15);
  const auto d = fixtures::random_blobs(rng, 80, 40, 0.7);
  FitOptions o;
  o.max_iters = 1;
  o.tol = 1e-15;
  CHECK_THROWS_AS(fit_logistic(d, o), FitError);
  o.tol = 0.0;
  CHECK_THROWS_AS(fit_logistic(d, o), ParameterError);
}

TEST_CASE("prediction conventions") {
  const auto d = fixtures::make({{{1, 2}, L}, {{-1, 0.5}, S}, {{3, -2}, L}});
  const auto zero = LinearModel::zeros(2);
  const auto p = predict_logistic(zero, d);
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(p.scores[i] == 0.5);
    CHECK(p.labels[i] == S);
  }
  auto m = LinearModel::zeros(2);
  m.theta = {0.7, -1.2, 0.3};
  auto neg = m;
  for (double& v : neg.theta) v = -v;
  const auto a = predict_logistic(m, d), b = predict_logistic(neg, d);
  for (std::size_t i = 0; i < d.size(); ++i)
    if (a.scores[i] != 0.5) CHECK(a.labels[i] != b.labels[i]);
  // Raising the bias never flips a minority prediction to majority.
  auto up = m;
  up.theta[2] += 0.5;
  const auto c = predict_logistic(up, d);
  for (std::size_t i = 0; i < d.size(); ++i)
    if (a.labels[i] == S) CHECK(c.labels[i] == S);
  CHECK_THROWS_AS(predict_logistic(LinearModel::zeros(3), d), ParameterError);
}

TEST_CASE("best stump matches exhaustive search") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    auto d = fixtures::random_small(rng, 6, 30);
    // Coarse values force threshold ties; dyadic weights keep sums exact.
    std::vector<double> f = d.features();
    for (double& v : f) v = std::round(v * 2.0);
    d = Dataset(f, d.labels(), d.dims());
    std::vector<double> w(d.size());
    double total = 0.0;
    for (double& x : w) total += (x = static_cast<double>(1 + rng() % 8));
    for (double& x : w) x /= 64.0;
    Stump got;
    double err = 0.0;
    const bool ok = best_stump(d, w, got, err);
    const auto [want, want_err] = brute_stump(d, w);
    if (!ok) continue;
    CHECK(got == want);
    CHECK(err == want_err);
  }
}

TEST_CASE("adaboost on threshold-separable data stops after one perfect stump") {
  const auto d = fixtures::line({{0, L}, {1, L}, {2, L}, {3, S}, {4, S}});
  BoostTrace tr;
  const auto m = fit_adaboost(d, 10, 0, &tr);
  REQUIRE(m.stumps.size() == 1);
  CHECK(m.stumps[0] == Stump{0, 2.5, 1});
  CHECK(tr.training_error == 0.0);
  for (std::size_t i = 0; i < d.size(); ++i)
    CHECK(boosted_predict(m, d.row(i)) == (m.stumps[0].predict(d.row(i)) == 1 ? S : L));
}

TEST_CASE("adaboost on four-point xor accepts no round") {
  // Every midpoint stump errs on exactly half the weight, so round one is discarded.
  const auto d = fixtures::make({{{0, 0}, S}, {{1, 1}, S}, {{0, 1}, L}, {{1, 0}, L}});
  BoostTrace tr;
  const auto m = fit_adaboost(d, 10, 0, &tr);
  CHECK(m.stumps.empty());
  CHECK(tr.training_error == 0.5);
}

TEST_CASE("adaboost on a noisy xor lowers error over rounds and respects the bound") {
  // XOR quadrants with uneven occupancy so single stumps beat chance.
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dataset d(2);
  for (int i = 0; i < 80; ++i) {
    const double x = u(rng), y = u(rng);
    const bool q = (x > 0.6) != (y > 0.3);
    d.append(std::vector<double>{x, y}, q ? S : L);
  }
  double prev = 1.0;
  for (std::size_t rounds : {1u, 3u, 10u}) {
    BoostTrace tr;
    const auto m = fit_adaboost(d, rounds, 0, &tr);
    double bound = 1.0;
    for (std::size_t r = 0; r < tr.errors.size(); ++r) {
      CHECK(tr.errors[r] < 0.5);
      CHECK(tr.normalizers[r] == doctest::Approx(2.0 * std::sqrt(tr.errors[r] * (1.0 - tr.errors[r]))));
      bound *= tr.normalizers[r];
    }
    CHECK(tr.training_error <= bound + 1e-12);
    if (rounds == 10) CHECK(tr.training_error < prev);
    if (rounds == 1) prev = tr.training_error;
    CHECK(m.stumps.size() == m.alphas.size());
  }
  CHECK_THROWS_AS(fit_adaboost(d, 0, 0), ParameterError);
  CHECK_THROWS_AS(fit_adaboost(fixtures::line({{0, L}, {1, L}}), 3, 0), ParameterError);
}

TEST_CASE("boosted score is additive and monotone in the threshold") {
  std::mt19937_64 rng(43);
  const auto d = fixtures::random_blobs(rng, 60, 30, 1.0);
  const auto a = fit_adaboost(d, 4, 0);
  const auto b = fit_adaboost(fixtures::random_blobs(rng, 30, 30, 0.5), 3, 0);
  BoostedModel ab = a;
  ab.stumps.insert(ab.stumps.end(), b.stumps.begin(), b.stumps.end());
  ab.alphas.insert(ab.alphas.end(), b.alphas.begin(), b.alphas.end());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(boosted_score(ab, d.row(i)) == doctest::Approx(boosted_score(a, d.row(i)) + boosted_score(b, d.row(i))));
    auto hi = a;
    hi.threshold_b = 0.3;
    if (boosted_predict(a, d.row(i)) == L) CHECK(boosted_predict(hi, d.row(i)) == L);
  }
}
