#include <cmath>

#include "doctest.h"
#include "imbal/datagen.hpp"

using namespace imbal;

namespace {

GenParams small_params(std::uint64_t seed) {
  GenParams p;
  p.n_samples = 2000;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("generate is a pure function of its parameters") {
  const auto a = generate(small_params(3));
  CHECK(a == generate(small_params(3)));
  CHECK_FALSE(a == generate(small_params(4)));
  CHECK(a.size() == 2000);
  CHECK(a.dims() == 5);
}

TEST_CASE("class shares and label noise") {
  auto p = small_params(1);
  p.label_noise = 0.0;
  const auto clean = generate(p);
  CHECK(clean.count(ClassLabel::Minority) == 200);
  p.label_noise = 0.01;
  const auto noisy = generate(p);
  // 20 flipped labels shift the counts by at most 20.
  const auto diff = static_cast<long>(noisy.count(ClassLabel::Minority)) - 200;
  CHECK(std::labs(diff) <= 20);
  CHECK((diff % 2 == 0));
}

TEST_CASE("redundant column is a linear combination of the informative ones") {
  auto p = small_params(2);
  p.n_features = 4;
  p.n_informative = 2;
  p.n_redundant = 1;
  const auto d = generate(p);
  // Solve x2 = a*x0 + b*x1 by least squares and check the residual is tiny.
  double s00 = 0, s01 = 0, s11 = 0, t0 = 0, t1 = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto x = d.row(i);
    s00 += x[0] * x[0];
    s01 += x[0] * x[1];
    s11 += x[1] * x[1];
    t0 += x[0] * x[2];
    t1 += x[1] * x[2];
  }
  const double det = s00 * s11 - s01 * s01;
  const double a = (t0 * s11 - t1 * s01) / det;
  const double b = (s00 * t1 - s01 * t0) / det;
  double res = 0.0, tot = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto x = d.row(i);
    const double e = x[2] - a * x[0] - b * x[1];
    res += e * e;
    tot += x[2] * x[2];
  }
  CHECK(res <= 1e-18 * tot + 1e-20);
}

TEST_CASE("parameter validation") {
  GenParams p;
  p.n_clusters_per_class = 2;
  CHECK_THROWS_AS(generate(p), ParameterError);
  p = GenParams{};
  p.n_informative = 5;
  p.n_redundant = 1;
  CHECK_THROWS_AS(generate(p), ParameterError);
  p = GenParams{};
  p.weights = {0.5, 0.6};
  CHECK_THROWS_AS(generate(p), ParameterError);
}

TEST_CASE("jacobi recovers a known spectrum") {
  // Q diag(5, 2, 1) Q^T with Q a rotation about z by 30 degrees.
  const double c = std::cos(M_PI / 6), s = std::sin(M_PI / 6);
  const std::vector<double> m{5 * c * c + 2 * s * s, (5 - 2) * c * s, 0, (5 - 2) * c * s, 5 * s * s + 2 * c * c, 0,
                              0, 0, 1};
  const auto e = jacobi_eigen(m, 3);
  CHECK(e.values[0] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(e.values[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(e.values[2] == doctest::Approx(1.0).epsilon(1e-12));
  // A v = lambda v for each column.
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < 3; ++i) {
      double av = 0.0;
      for (std::size_t j = 0; j < 3; ++j) av += m[i * 3 + j] * e.vectors[j * 3 + k];
      CHECK(av == doctest::Approx(e.values[k] * e.vectors[i * 3 + k]).epsilon(1e-10));
    }
}

TEST_CASE("pca output columns are uncorrelated and keep the leading variance") {
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const auto d = generate(small_params(seed));
    const auto full = jacobi_eigen(sample_covariance(d), d.dims());
    const auto pr = pca_fit_project(d, 2);
    CHECK(pr.projected.labels() == d.labels());
    const auto cov = sample_covariance(pr.projected);
    const double scale = std::sqrt(cov[0] * cov[3]);
    CHECK(std::fabs(cov[1]) < 1e-9 * scale);
    const double lead = full.values[0] + full.values[1];
    CHECK(std::fabs(cov[0] + cov[3] - lead) < 1e-9 * lead);
    // Orientation: largest-magnitude loading of each axis is positive.
    for (std::size_t k = 0; k < 2; ++k) {
      double best = 0.0;
      for (std::size_t j = 0; j < d.dims(); ++j) {
        const double v = pr.components[k * d.dims() + j];
        if (std::fabs(v) > std::fabs(best)) best = v;
      }
      CHECK(best > 0.0);
    }
    CHECK(pca_project(d, 2) == pr.projected);
  }
  const auto d = generate(small_params(0));
  CHECK_THROWS_AS(pca_project(d, 6), ParameterError);
}

TEST_CASE("default generator sizes") {
  GenParams p;
  const auto d = generate(p);
  CHECK(d.size() == 10000);
  const auto minority = d.count(ClassLabel::Minority);
  CHECK(minority >= 900);
  CHECK(minority <= 1100);
  p.weights = {0.5, 0.5};
  p.label_noise = 0.0;
  const auto even = generate(p);
  CHECK(even.count(ClassLabel::Minority) == 5000);
  CHECK(even.count(ClassLabel::Majority) == 5000);
}

TEST_CASE("full-rank pca gives a diagonal, non-increasing covariance") {
  const auto d = generate(small_params(5));
  const auto full = pca_project(d, d.dims());
  const auto cov = sample_covariance(full);
  const std::size_t k = d.dims();
  for (std::size_t i = 0; i < k; ++i) {
    if (i + 1 < k) CHECK(cov[i * k + i] >= cov[(i + 1) * k + i + 1]);
    for (std::size_t j = 0; j < k; ++j)
      if (i != j) CHECK(std::fabs(cov[i * k + j]) < 1e-9 * cov[0]);
  }
}

TEST_CASE("points on y = x project onto one axis carrying all the variance") {
  Dataset d(2);
  for (double t : {-2.0, -0.5, 0.0, 1.0, 3.5}) d.append(std::vector<double>{t, t}, ClassLabel::Majority);
  const auto cov = sample_covariance(d);
  const auto p = pca_project(d, 1);
  const auto out = sample_covariance(p);
  CHECK(out[0] == doctest::Approx(cov[0] + cov[3]).epsilon(1e-12));
}
