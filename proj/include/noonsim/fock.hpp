// Truncated one- and two-mode bosonic states in the number basis.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace noonsim {

template <typename Real>
using AmplitudeVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using AmplitudeGrid = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Thrown when a post-selected photon-number block carries no weight.
class EmptyBlockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Real>
Real log_factorial(int n) {
  return std::lgamma(static_cast<Real>(n) + Real(1));
}

template <typename Real>
Real log_binomial(int n, int k) {
  return log_factorial<Real>(n) - log_factorial<Real>(k) - log_factorial<Real>(n - k);
}

/// Amplitudes c_0..c_{n_max} of a single mode. tail_bound bounds the
/// probability mass lost to truncation plus summation rounding.
template <typename Real>
class SingleModeState {
 public:
  explicit SingleModeState(AmplitudeVector<Real> amps, Real tail_bound = Real(0))
      : amps_(std::move(amps)), tail_bound_(tail_bound) {
    if (amps_.size() == 0) throw std::invalid_argument("SingleModeState needs at least one amplitude");
    if (!(tail_bound_ >= Real(0))) throw std::invalid_argument("tail bound must be nonnegative");
  }

  int n_max() const { return static_cast<int>(amps_.size()) - 1; }
  const AmplitudeVector<Real>& amplitudes() const { return amps_; }
  Real tail_bound() const { return tail_bound_; }

  // zero outside the stored range
  std::complex<Real> operator[](int n) const {
    return (n >= 0 && n <= n_max()) ? amps_(n) : std::complex<Real>{};
  }

 private:
  AmplitudeVector<Real> amps_;
  Real tail_bound_;
};

/// Amplitude grid C(n, m) over |n, m>, n on mode a (rows), m on mode b (columns).
template <typename Real>
class BipartiteState {
 public:
  explicit BipartiteState(AmplitudeGrid<Real> amps, Real tail_bound = Real(0))
      : amps_(std::move(amps)), tail_bound_(tail_bound) {
    if (amps_.rows() == 0 || amps_.cols() == 0)
      throw std::invalid_argument("BipartiteState needs a nonempty grid");
    if (!(tail_bound_ >= Real(0))) throw std::invalid_argument("tail bound must be nonnegative");
  }

  static BipartiteState zeros(int n_max_a, int n_max_b) {
    return BipartiteState(AmplitudeGrid<Real>::Zero(n_max_a + 1, n_max_b + 1));
  }

  int n_max_a() const { return static_cast<int>(amps_.rows()) - 1; }
  int n_max_b() const { return static_cast<int>(amps_.cols()) - 1; }
  const AmplitudeGrid<Real>& amplitudes() const { return amps_; }
  Real tail_bound() const { return tail_bound_; }

  std::complex<Real> operator()(int n, int m) const {
    if (n < 0 || m < 0 || n > n_max_a() || m > n_max_b()) return {};
    return amps_(n, m);
  }

 private:
  AmplitudeGrid<Real> amps_;
  Real tail_bound_;
};

/// Component with total photon number N: d_n is the amplitude of |n, N-n>.
template <typename Real>
struct BlockVector {
  int total_n = 0;
  AmplitudeVector<Real> amps;
  Real weight = 0;

  BlockVector normalized() const {
    if (!(weight > Real(0)))
      throw EmptyBlockError("no " + std::to_string(total_n) + "-photon component to normalize");
    return {total_n, amps / std::sqrt(weight), Real(1)};
  }
};

template <typename Real>
BlockVector<Real> make_block(int total_n, AmplitudeVector<Real> amps) {
  const Real w = amps.squaredNorm();
  return {total_n, std::move(amps), w};
}

template <typename Real>
BipartiteState<Real> tensor_product(const SingleModeState<Real>& a, const SingleModeState<Real>& b) {
  AmplitudeGrid<Real> grid = a.amplitudes() * b.amplitudes().transpose();
  const Real tail = Real(1) - (Real(1) - a.tail_bound()) * (Real(1) - b.tail_bound());
  return BipartiteState<Real>(std::move(grid), std::max(tail, Real(0)));
}

/// <x|y>, with the smaller grid padded by zeros.
template <typename Real>
std::complex<Real> inner_product(const BipartiteState<Real>& x, const BipartiteState<Real>& y) {
  const Eigen::Index rows = std::min(x.amplitudes().rows(), y.amplitudes().rows());
  const Eigen::Index cols = std::min(x.amplitudes().cols(), y.amplitudes().cols());
  return (x.amplitudes().topLeftCorner(rows, cols).conjugate().cwiseProduct(
              y.amplitudes().topLeftCorner(rows, cols)))
      .sum();
}

template <typename Real>
Real norm(const SingleModeState<Real>& x) {
  return x.amplitudes().norm();
}

template <typename Real>
Real norm(const BipartiteState<Real>& x) {
  return x.amplitudes().norm();
}

template <typename Real>
SingleModeState<Real> normalize(const SingleModeState<Real>& x) {
  const Real n = norm(x);
  if (!(n > Real(0))) throw EmptyBlockError("cannot normalize a zero state");
  return SingleModeState<Real>(x.amplitudes() / n, x.tail_bound());
}

template <typename Real>
BipartiteState<Real> normalize(const BipartiteState<Real>& x) {
  const Real n = norm(x);
  if (!(n > Real(0))) throw EmptyBlockError("cannot normalize a zero state");
  return BipartiteState<Real>(x.amplitudes() / n, x.tail_bound());
}

/// ||x - y|| with zero padding.
template <typename Real>
Real distance(const BipartiteState<Real>& x, const BipartiteState<Real>& y) {
  const Eigen::Index rows = std::max(x.amplitudes().rows(), y.amplitudes().rows());
  const Eigen::Index cols = std::max(x.amplitudes().cols(), y.amplitudes().cols());
  AmplitudeGrid<Real> diff = AmplitudeGrid<Real>::Zero(rows, cols);
  diff.topLeftCorner(x.amplitudes().rows(), x.amplitudes().cols()) += x.amplitudes();
  diff.topLeftCorner(y.amplitudes().rows(), y.amplitudes().cols()) -= y.amplitudes();
  return diff.norm();
}

/// Copies out sum_n C(n, N-n) |n, N-n>; slots outside the grid are zero.
/// The block is not normalized.
template <typename Real>
BlockVector<Real> extract_block(const BipartiteState<Real>& x, int total_n) {
  if (total_n < 0) throw std::invalid_argument("photon number must be nonnegative");
  AmplitudeVector<Real> d(total_n + 1);
  for (int n = 0; n <= total_n; ++n) d(n) = x(n, total_n - n);
  return make_block<Real>(total_n, std::move(d));
}

/// Largest total photon number with a nonzero amplitude, or -1 for the zero state.
template <typename Real>
int highest_occupied_block(const BipartiteState<Real>& x) {
  int top = -1;
  const auto& c = x.amplitudes();
  for (Eigen::Index m = 0; m < c.cols(); ++m)
    for (Eigen::Index n = 0; n < c.rows(); ++n)
      if (c(n, m) != std::complex<Real>{}) top = std::max(top, static_cast<int>(n + m));
  return top;
}

/// Normalized state with independent complex Gaussian amplitudes.
template <typename Real, typename Rng>
BipartiteState<Real> random_state(int n_max_a, int n_max_b, Rng& rng) {
  std::normal_distribution<Real> gauss;
  AmplitudeGrid<Real> c(n_max_a + 1, n_max_b + 1);
  for (Eigen::Index m = 0; m < c.cols(); ++m)
    for (Eigen::Index n = 0; n < c.rows(); ++n) c(n, m) = {gauss(rng), gauss(rng)};
  c /= c.norm();
  return BipartiteState<Real>(std::move(c));
}

}  // namespace noonsim
