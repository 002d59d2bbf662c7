#pragma once

#include "noonsim/fock.hpp"
#include "oracles.hpp"

/// Library state padded into a (k+1) x (k+1) oracle grid.
inline oracle::Mat to_grid(const noonsim::BipartiteState<double>& x, int k) {
  oracle::Mat g = oracle::Mat::Zero(k + 1, k + 1);
  for (int n = 0; n <= std::min(k, x.n_max_a()); ++n)
    for (int m = 0; m <= std::min(k, x.n_max_b()); ++m) g(n, m) = x(n, m);
  return g;
}

inline noonsim::BipartiteState<double> from_grid(const oracle::Mat& g) {
  return noonsim::BipartiteState<double>(g);
}
