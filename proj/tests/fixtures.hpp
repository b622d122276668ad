#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

#include "imbal/core.hpp"

namespace fixtures {

using imbal::ClassLabel;
using imbal::Dataset;

constexpr ClassLabel L = ClassLabel::Majority;
constexpr ClassLabel S = ClassLabel::Minority;

struct Point {
  std::vector<double> x;
  ClassLabel label;
};

inline Dataset make(std::initializer_list<Point> points) {
  Dataset d(points.begin()->x.size());
  for (const auto& p : points) d.append(p.x, p.label);
  return d;
}

/// Points on the x axis.
inline Dataset line(std::initializer_list<std::pair<double, ClassLabel>> pts) {
  Dataset d(1);
  for (const auto& [x, c] : pts) d.append(std::vector<double>{x}, c);
  return d;
}

/// Random 2-D dataset with n_major / n_minor points; minority drawn from a
/// shifted blob so the classes overlap partially.
inline Dataset random_blobs(std::mt19937_64& rng, std::size_t n_major, std::size_t n_minor, double shift = 1.0,
                            std::size_t dims = 2) {
  std::normal_distribution<double> g(0.0, 1.0);
  Dataset d(dims);
  std::vector<double> x(dims);
  for (std::size_t i = 0; i < n_major + n_minor; ++i) {
    const bool minor = i >= n_major;
    for (std::size_t j = 0; j < dims; ++j) x[j] = g(rng) + (minor && j == 0 ? shift : 0.0);
    d.append(x, minor ? S : L);
  }
  // Interleave so class membership does not follow row order.
  std::vector<std::size_t> order(d.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  return d.subset(order);
}

/// Random small dataset with a random split between the classes.
inline Dataset random_small(std::mt19937_64& rng, std::size_t min_n = 12, std::size_t max_n = 50) {
  std::uniform_int_distribution<std::size_t> nd(min_n, max_n);
  const std::size_t n = nd(rng);
  std::uniform_int_distribution<std::size_t> md(2, n / 2);
  const std::size_t n_minor = md(rng);
  std::uniform_real_distribution<double> shift(0.0, 2.5);
  return random_blobs(rng, n - n_minor, n_minor, shift(rng));
}

}  // namespace fixtures
