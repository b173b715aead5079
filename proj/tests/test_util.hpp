#pragma once

#include <random>

#include "fastkm/operators.hpp"

namespace testutil {

inline fastkm::Vector random_vec(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  fastkm::Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * gauss(rng);
  return v;
}

inline double sup_diff(const std::vector<std::pair<long, fastkm::Vector>>& a,
                       const std::vector<std::pair<long, fastkm::Vector>>& b) {
  double m = 0.0;
  const size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i)
    m = std::max(m, (a[i].second - b[i].second).lpNorm<Eigen::Infinity>());
  return m;
}

}  // namespace testutil
