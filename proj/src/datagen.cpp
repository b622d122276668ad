#include "imbal/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "imbal/rng.hpp"

namespace imbal {

void GenParams::validate() const {
  if (n_samples < 2) throw ParameterError("n_samples must be at least 2");
  if (weights[0] < 0.0 || weights[1] < 0.0 || std::abs(weights[0] + weights[1] - 1.0) > 1e-9)
    throw ParameterError("weights must be non-negative and sum to 1");
  if (!(class_sep > 0.0) || !std::isfinite(class_sep))
    throw ParameterError("class_sep must be positive");
  if (n_features == 0 || n_informative == 0)
    throw ParameterError("n_features and n_informative must be positive");
  if (n_informative + n_redundant > n_features)
    throw ParameterError("n_informative + n_redundant (" +
                         std::to_string(n_informative + n_redundant) + ") exceeds n_features (" +
                         std::to_string(n_features) + ")");
  if (n_clusters_per_class != 1)
    throw ParameterError("only n_clusters_per_class = 1 is supported");
  if (!(label_noise >= 0.0 && label_noise < 1.0))
    throw ParameterError("label_noise must lie in [0, 1)");
}

namespace {

double determinant(std::vector<double> a, std::size_t n) {
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    if (a[piv * n + c] == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
      det = -det;
    }
    det *= a[c * n + c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
    }
  }
  return det;
}

std::vector<double> uniform_matrix(RandomStream& rng, std::size_t rows, std::size_t cols) {
  std::vector<double> m(rows * cols);
  for (double& v : m) v = 2.0 * rng.uniform_open() - 1.0;
  return m;
}

}  // namespace

Dataset generate(const GenParams& p) {
  p.validate();
  const std::size_t ni = p.n_informative;
  const std::size_t nr = p.n_redundant;
  const std::size_t nn = p.n_features - ni - nr;

  // Two distinct hypercube vertices at +-class_sep.
  RandomStream vrng(p.seed, "centroids");
  std::vector<double> centroid(2 * ni);
  for (std::size_t j = 0; j < ni; ++j) centroid[j] = (vrng.below(2) ? 1.0 : -1.0) * p.class_sep;
  do {
    for (std::size_t j = 0; j < ni; ++j)
      centroid[ni + j] = (vrng.below(2) ? 1.0 : -1.0) * p.class_sep;
  } while (std::equal(centroid.begin(), centroid.begin() + ni, centroid.begin() + ni));

  std::vector<double> mixing;
  for (std::uint64_t attempt = 0;; ++attempt) {
    RandomStream mrng(p.seed, "mixing", attempt);
    mixing = uniform_matrix(mrng, ni, ni);
    if (std::abs(determinant(mixing, ni)) > 1e-6) break;
  }
  RandomStream rrng(p.seed, "redundant");
  const auto redundant = uniform_matrix(rrng, ni, nr);

  const auto n_minority = static_cast<std::size_t>(std::llround(p.weights[0] * static_cast<double>(p.n_samples)));
  const std::size_t n = p.n_samples;

  // Row order is a seeded permutation so the classes are interleaved.
  RandomStream orng(p.seed, "order");
  const auto order = permutation(n, orng);

  std::vector<double> features(n * p.n_features);
  std::vector<ClassLabel> labels(n);
  std::vector<double> shifted(ni);
  for (std::size_t i = 0; i < n; ++i) {
    const bool minority = i < n_minority;
    const double* c = centroid.data() + (minority ? 0 : ni);
    RandomStream prng(p.seed, "point", i);
    for (std::size_t j = 0; j < ni; ++j) shifted[j] = c[j] + prng.normal();

    double* out = features.data() + order[i] * p.n_features;
    for (std::size_t j = 0; j < ni; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < ni; ++k) s += shifted[k] * mixing[k * ni + j];
      out[j] = s;
    }
    for (std::size_t r = 0; r < nr; ++r) {
      double s = 0.0;
      for (std::size_t k = 0; k < ni; ++k) s += out[k] * redundant[k * nr + r];
      out[ni + r] = s;
    }
    for (std::size_t z = 0; z < nn; ++z) out[ni + nr + z] = prng.normal();
    labels[order[i]] = minority ? ClassLabel::Minority : ClassLabel::Majority;
  }

  const auto n_flip = static_cast<std::size_t>(std::llround(p.label_noise * static_cast<double>(n)));
  RandomStream frng(p.seed, "flip");
  const auto flip_order = permutation(n, frng);
  for (std::size_t f = 0; f < n_flip; ++f) labels[flip_order[f]] = other(labels[flip_order[f]]);

  return Dataset(std::move(features), std::move(labels), p.n_features);
}

SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n, double tol, std::size_t max_sweeps) {
  if (a.size() != n * n) throw ParameterError("jacobi_eigen: matrix is not n x n");
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a[i * n + j] * a[i * n + j];
    return std::sqrt(s);
  };
  double scale = 0.0;
  for (double x : a) scale += x * x;
  scale = std::sqrt(scale);

  for (std::size_t sweep = 0; sweep < max_sweeps && off_norm() > tol * std::max(scale, 1e-300); ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * n + x] > a[y * n + y]; });
  SymmetricEigen out;
  out.n = n;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a[idx[c] * n + idx[c]];
    for (std::size_t r = 0; r < n; ++r) out.vectors[r * n + c] = v[r * n + idx[c]];
  }
  return out;
}

std::vector<double> sample_covariance(const Dataset& data) {
  const std::size_t n = data.size();
  const std::size_t d = data.dims();
  if (n < 2) throw ParameterError("covariance needs at least 2 points");
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += data.row(i)[j];
  for (double& m : mean) m /= static_cast<double>(n);
  std::vector<double> cov(d * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = data.row(i);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b) cov[a * d + b] += (x[a] - mean[a]) * (x[b] - mean[b]);
  }
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      cov[a * d + b] /= static_cast<double>(n - 1);
      cov[b * d + a] = cov[a * d + b];
    }
  return cov;
}

PcaResult pca_fit_project(const Dataset& data, std::size_t k) {
  const std::size_t d = data.dims();
  const std::size_t n = data.size();
  if (k == 0 || k > d)
    throw ParameterError("pca: k=" + std::to_string(k) + " must lie in [1, " + std::to_string(d) + "]");
  if (n < 2) throw ParameterError("pca needs at least 2 points");

  const auto eig = jacobi_eigen(sample_covariance(data), d);

  PcaResult res{Dataset(k), std::vector<double>(d, 0.0), std::vector<double>(k * d), {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) res.mean[j] += data.row(i)[j];
  for (double& m : res.mean) m /= static_cast<double>(n);

  for (std::size_t c = 0; c < k; ++c) {
    std::size_t argmax = 0;
    for (std::size_t r = 1; r < d; ++r)
      if (std::abs(eig.vectors[r * d + c]) > std::abs(eig.vectors[argmax * d + c])) argmax = r;
    const double sign = eig.vectors[argmax * d + c] < 0.0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < d; ++r) res.components[c * d + r] = sign * eig.vectors[r * d + c];
    res.explained_variance.push_back(eig.values[c]);
  }

  std::vector<double> features(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = data.row(i);
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += (x[j] - res.mean[j]) * res.components[c * d + j];
      features[i * k + c] = s;
    }
  }
  res.projected = Dataset(std::move(features), data.labels(), k);
  return res;
}

Dataset pca_project(const Dataset& data, std::size_t k) { return pca_fit_project(data, k).projected; }

}  // namespace imbal
