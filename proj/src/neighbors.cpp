#include "imbal/neighbors.hpp"

#include <algorithm>
#include <string>

namespace imbal {

namespace {

using Candidate = std::pair<double, std::size_t>;

void check_query(std::span<const double> point, const NeighborQuery& q) {
  if (point.size() != q.reference.dims) throw ParameterError("knn: query dimension mismatch");
  const std::size_t available =
      q.reference.rows - (q.exclude < q.reference.rows ? 1 : 0);
  if (q.k == 0 || q.k > available)
    throw ParameterError("knn: k=" + std::to_string(q.k) + " but only " + std::to_string(available) +
                         " reference points available");
}

std::vector<Candidate> candidates(std::span<const double> point, const NeighborQuery& q) {
  std::vector<Candidate> c;
  c.reserve(q.reference.rows);
  for (std::size_t i = 0; i < q.reference.rows; ++i)
    if (i != q.exclude) c.emplace_back(squared_distance(point, q.reference.row(i)), i);
  return c;
}

template <class Less>
std::vector<std::size_t> select(std::vector<Candidate>& c, std::size_t k, Less less) {
  if (k < c.size()) {
    std::nth_element(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(k), c.end(), less);
    c.resize(k);
  }
  std::sort(c.begin(), c.end(), less);
  std::vector<std::size_t> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].second;
  return out;
}

constexpr auto nearer = [](const Candidate& a, const Candidate& b) {
  return a.first < b.first || (a.first == b.first && a.second < b.second);
};
constexpr auto farther = [](const Candidate& a, const Candidate& b) {
  return a.first > b.first || (a.first == b.first && a.second < b.second);
};

}  // namespace

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double t = a[j] - b[j];
    s += t * t;
  }
  return s;
}

std::vector<std::size_t> knn(std::span<const double> point, const NeighborQuery& query) {
  check_query(point, query);
  auto c = candidates(point, query);
  return select(c, query.k, nearer);
}

std::vector<std::size_t> kfarthest(std::span<const double> point, const NeighborQuery& query) {
  check_query(point, query);
  auto c = candidates(point, query);
  return select(c, query.k, farther);
}

std::vector<std::size_t> knn_self(const PointsView& points, std::size_t k) {
  std::vector<std::size_t> out;
  out.reserve(points.rows * k);
  std::vector<Candidate> c;
  c.reserve(points.rows);
  for (std::size_t i = 0; i < points.rows; ++i) {
    NeighborQuery q{points, k, i};
    check_query(points.row(i), q);
    c.clear();
    const auto xi = points.row(i);
    for (std::size_t j = 0; j < points.rows; ++j)
      if (j != i) c.emplace_back(squared_distance(xi, points.row(j)), j);
    const auto nn = select(c, k, nearer);
    out.insert(out.end(), nn.begin(), nn.end());
  }
  return out;
}

std::vector<std::size_t> knn_cross(const PointsView& queries, const PointsView& reference, std::size_t k) {
  std::vector<std::size_t> out;
  out.reserve(queries.rows * k);
  const NeighborQuery q{reference, k, kNoExclusion};
  for (std::size_t i = 0; i < queries.rows; ++i) {
    const auto nn = knn(queries.row(i), q);
    out.insert(out.end(), nn.begin(), nn.end());
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> mutual_nearest_cross_pairs(const Dataset& data) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (data.size() < 2) return pairs;
  const auto nn = knn_self(PointsView::of(data), 1);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::size_t j = nn[i];
    if (i < j && nn[j] == i && data.label(i) != data.label(j)) pairs.emplace_back(i, j);
  }
  return pairs;
}

}  // namespace imbal
