#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "imbal/core.hpp"

namespace imbal {

/// Synthetic two-class problem: one Gaussian blob per class centred on a
/// hypercube vertex, mixed by a random linear map, plus redundant and noise
/// columns and a small label-flip fraction.
struct GenParams {
  std::size_t n_samples = 10000;
  /// {minority share, majority share}; label 1 gets the first entry.
  std::array<double, 2> weights{0.1, 0.9};
  double class_sep = 1.2;
  std::size_t n_features = 5;
  std::size_t n_informative = 3;
  std::size_t n_redundant = 1;
  std::size_t n_clusters_per_class = 1;
  double label_noise = 0.01;
  std::uint64_t seed = 0;

  void validate() const;
};

Dataset generate(const GenParams& params);

/// Eigen-decomposition of a symmetric matrix (row-major, n x n) by cyclic
/// Jacobi sweeps. Eigenvalues come back in descending order; eigenvectors
/// are the columns of `vectors` (row-major).
struct SymmetricEigen {
  std::vector<double> values;
  std::vector<double> vectors;
  std::size_t n = 0;
};

SymmetricEigen jacobi_eigen(std::vector<double> matrix, std::size_t n, double tol = 1e-12,
                            std::size_t max_sweeps = 100);

/// Sample covariance (divisor n - 1) of the feature columns.
std::vector<double> sample_covariance(const Dataset& data);

struct PcaResult {
  Dataset projected;
  std::vector<double> mean;
  /// k loadings vectors, each of length d, row-major (k x d).
  std::vector<double> components;
  std::vector<double> explained_variance;
};

PcaResult pca_fit_project(const Dataset& data, std::size_t k);

/// Centre and project onto the k leading principal axes. Each axis is
/// oriented so that its largest-magnitude loading is positive.
Dataset pca_project(const Dataset& data, std::size_t k);

}  // namespace imbal
