#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "imbal/core.hpp"

namespace imbal {

/// Read-only view of an m x d row-major matrix.
struct PointsView {
  std::span<const double> data;
  std::size_t rows = 0;
  std::size_t dims = 0;

  static PointsView of(const Dataset& ds) { return {ds.features(), ds.size(), ds.dims()}; }
  std::span<const double> row(std::size_t i) const { return data.subspan(i * dims, dims); }
};

inline constexpr std::size_t kNoExclusion = std::numeric_limits<std::size_t>::max();

/// Reference set plus k. `exclude` names a reference row that must never be
/// returned (the query point itself when querying a set against itself).
struct NeighborQuery {
  PointsView reference;
  std::size_t k = 1;
  std::size_t exclude = kNoExclusion;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

/// k nearest reference rows by Euclidean distance, ascending; equal distances
/// are ordered by ascending reference index.
std::vector<std::size_t> knn(std::span<const double> point, const NeighborQuery& query);

/// k farthest reference rows, descending distance; ties by ascending index.
std::vector<std::size_t> kfarthest(std::span<const double> point, const NeighborQuery& query);

/// Row i holds the k nearest rows of `points` to row i (self excluded),
/// flattened as n x k.
std::vector<std::size_t> knn_self(const PointsView& points, std::size_t k);

/// k nearest rows of `reference` for every row of `queries`, flattened as
/// rows(queries) x k.
std::vector<std::size_t> knn_cross(const PointsView& queries, const PointsView& reference, std::size_t k);

/// Tomek links: cross-class pairs (i, j), i < j, that are each other's
/// nearest neighbour. Sorted by i.
std::vector<std::pair<std::size_t, std::size_t>> mutual_nearest_cross_pairs(const Dataset& data);

}  // namespace imbal
