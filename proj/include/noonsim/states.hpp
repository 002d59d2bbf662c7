// Coherent, squeezed-vacuum, cat, NOON and ideal beam-splitter input states.
#pragma once

#include "noonsim/fock.hpp"

#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace noonsim {

enum class CatParity { even, odd };

/// Cutoff selection. With no explicit n_max the constructors pick the
/// smallest cutoff whose discarded probability is below tail_tolerance.
struct Truncation {
  std::optional<int> n_max;
  double tail_tolerance = 1e-12;
};

namespace detail {

inline constexpr int kMaxAutoCutoff = 200000;

template <typename Real>
Real rounding_allowance(int n_terms) {
  return static_cast<Real>(4 * (n_terms + 1)) * std::numeric_limits<Real>::epsilon();
}

// Probability mass beyond the stored terms. `first` is the first discarded
// term, `ratio` bounds every later term-to-term ratio. When the ratio bound
// is not contractive fall back to 1 - kept mass.
template <typename Real>
Real geometric_tail(Real first, Real ratio, Real kept_mass) {
  if (first == Real(0)) return Real(0);
  if (ratio < Real(1)) return first / (Real(1) - ratio);
  return std::max(Real(1) - kept_mass, Real(0));
}

inline void check_cutoff(const Truncation& t) {
  if (t.n_max && *t.n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
  if (!(t.tail_tolerance > 0.0)) throw std::invalid_argument("tail tolerance must be positive");
}

// Search floor shared by all automatic cutoffs: mean photon number + 10 sigma-ish + 20,
// so low photon-number blocks are never clipped even when their weight is tiny.
inline int cutoff_floor(double mean_photons) {
  return static_cast<int>(std::ceil(mean_photons + 10 * std::sqrt(mean_photons + 1) + 20));
}

template <typename Real, typename TailFn>
int auto_cutoff(int start, TailFn&& tail, double tolerance) {
  for (int n = std::max(start, 0); n <= kMaxAutoCutoff; ++n)
    if (tail(n) < static_cast<Real>(tolerance)) return n;
  throw std::domain_error("amplitude too large for automatic truncation");
}

}  // namespace detail

// Poisson tail P(n > n_max) for mean photon number lambda.
template <typename Real>
Real coherent_tail(Real lambda, int n_max) {
  if (lambda == Real(0)) return Real(0);
  const Real first = std::exp(-lambda + Real(n_max + 1) * std::log(lambda) - log_factorial<Real>(n_max + 1));
  Real kept = 0;
  if (lambda / Real(n_max + 2) >= Real(1))
    for (int n = 0; n <= n_max; ++n)
      kept += std::exp(-lambda + Real(n) * std::log(lambda) - log_factorial<Real>(n));
  return detail::geometric_tail(first, lambda / Real(n_max + 2), kept);
}

/// |alpha> = exp(-|alpha|^2/2) sum_n alpha^n / sqrt(n!) |n>.
template <typename Real>
SingleModeState<Real> coherent(std::complex<Real> alpha, const Truncation& trunc = {}) {
  detail::check_cutoff(trunc);
  const Real mag = std::abs(alpha);
  const Real lambda = mag * mag;
  int n_max = 0;
  if (trunc.n_max) {
    n_max = *trunc.n_max;
  } else {
    n_max = detail::auto_cutoff<Real>(detail::cutoff_floor(static_cast<double>(lambda)), [&](int n) { return coherent_tail(lambda, n); },
                                      trunc.tail_tolerance);
  }
  AmplitudeVector<Real> c = AmplitudeVector<Real>::Zero(n_max + 1);
  c(0) = std::exp(-lambda / 2);
  if (mag > Real(0)) {
    const Real phase = std::arg(alpha);
    for (int n = 1; n <= n_max; ++n) {
      const Real log_mag = -lambda / 2 + Real(n) * std::log(mag) - log_factorial<Real>(n) / 2;
      c(n) = std::polar(std::exp(log_mag), Real(n) * phase);
    }
  }
  return SingleModeState<Real>(std::move(c), coherent_tail(lambda, n_max) + detail::rounding_allowance<Real>(n_max));
}

namespace detail {

// |c_{2k}|^2 of the squeezed vacuum.
template <typename Real>
Real squeezed_term(Real t, Real log_cosh, int k) {
  if (k == 0) return std::exp(-log_cosh);
  return std::exp(Real(2 * k) * std::log(std::abs(t)) + log_factorial<Real>(2 * k) -
                  Real(2 * k) * std::log(Real(2)) - 2 * log_factorial<Real>(k) - log_cosh);
}

template <typename Real>
Real log_cosh(Real x) {
  x = std::abs(x);
  return x + std::log1p(std::exp(-2 * x)) - std::log(Real(2));
}

template <typename Real>
Real log_sinh(Real x) {
  if (x < Real(20)) return std::log(std::sinh(x));
  return x + std::log1p(-std::exp(-2 * x)) - std::log(Real(2));
}

template <typename Real>
Real squeezed_tail(Real r, int n_max) {
  if (r == Real(0)) return Real(0);
  const Real t = std::tanh(r);
  const Real lc = log_cosh(r);
  const int first = n_max / 2 + 1;
  Real kept = 0;
  if (t * t >= Real(1))
    for (int k = 0; k < first; ++k) kept += squeezed_term(t, lc, k);
  return geometric_tail(squeezed_term(t, lc, first), t * t, kept);
}

// |c_n|^2 of a cat state, n of the given parity; x = |beta|^2.
template <typename Real>
Real cat_term(Real x, Real log_norm, int n) {
  if (n == 0) return std::exp(-log_norm);
  return std::exp(Real(n) * std::log(x) - log_factorial<Real>(n) - log_norm);
}

template <typename Real>
Real cat_tail(Real x, CatParity parity, int n_max) {
  if (x == Real(0)) return Real(0);
  const Real ln = parity == CatParity::even ? log_cosh(x) : log_sinh(x);
  const int offset = parity == CatParity::even ? 0 : 1;
  int first = n_max + 1;
  if ((first - offset) % 2 != 0) ++first;
  const Real ratio = x * x / (Real(first + 1) * Real(first + 2));
  Real kept = 0;
  if (ratio >= Real(1))
    for (int n = offset; n < first; n += 2) kept += cat_term(x, ln, n);
  return geometric_tail(cat_term(x, ln, first), ratio, kept);
}

}  // namespace detail

/// Squeezed vacuum with real squeeze amplitude r; only even number states
/// are occupied, c_{2k} = (-tanh r)^k sqrt((2k)!) / (2^k k! sqrt(cosh r)).
template <typename Real>
SingleModeState<Real> squeezed_vacuum(Real r, const Truncation& trunc = {}) {
  detail::check_cutoff(trunc);
  const int n_max = trunc.n_max ? *trunc.n_max
                                : detail::auto_cutoff<Real>(
                                      detail::cutoff_floor(static_cast<double>(std::sinh(r) * std::sinh(r))),
                                      [&](int n) { return detail::squeezed_tail(r, n); },
                                      trunc.tail_tolerance);
  AmplitudeVector<Real> c = AmplitudeVector<Real>::Zero(n_max + 1);
  const Real t = std::tanh(r);
  const Real lc = detail::log_cosh(r);
  c(0) = std::exp(-lc / 2);
  if (t != Real(0)) {
    for (int k = 1; 2 * k <= n_max; ++k) {
      const Real mag = std::sqrt(detail::squeezed_term(t, lc, k));
      c(2 * k) = (t > Real(0) && k % 2 == 1) ? -mag : mag;  // (-tanh r)^k
    }
  }
  return SingleModeState<Real>(std::move(c), detail::squeezed_tail(r, n_max) + detail::rounding_allowance<Real>(n_max));
}

/// Even cat (|beta> + |-beta>) or odd cat (|beta> - |-beta>), normalized.
/// c_n = beta^n / (sqrt(n!) sqrt(cosh|beta|^2)) for even n, with sinh for odd.
template <typename Real>
SingleModeState<Real> cat(std::complex<Real> beta, CatParity parity, const Truncation& trunc = {}) {
  detail::check_cutoff(trunc);
  const Real mag = std::abs(beta);
  if (parity == CatParity::odd && mag == Real(0))
    throw std::domain_error("odd cat state is undefined at beta = 0");
  const Real x = mag * mag;
  const int offset = parity == CatParity::even ? 0 : 1;
  const int n_max = trunc.n_max ? *trunc.n_max
                                : detail::auto_cutoff<Real>(
                                      detail::cutoff_floor(static_cast<double>(x)) + offset,
                                      [&](int n) { return detail::cat_tail(x, parity, n); },
                                      trunc.tail_tolerance);
  AmplitudeVector<Real> c = AmplitudeVector<Real>::Zero(n_max + 1);
  if (x == Real(0)) {
    c(0) = 1;
  } else {
    const Real ln = parity == CatParity::even ? detail::log_cosh(x) : detail::log_sinh(x);
    const Real phase = std::arg(beta);
    for (int n = offset; n <= n_max; n += 2)
      c(n) = std::polar(std::exp(Real(n) * std::log(mag) - (log_factorial<Real>(n) + ln) / 2), Real(n) * phase);
  }
  const Real tail = x == Real(0) ? Real(0) : detail::cat_tail(x, parity, n_max);
  return SingleModeState<Real>(std::move(c), tail + detail::rounding_allowance<Real>(n_max));
}

template <typename Real = double>
SingleModeState<Real> number_state(int n) {
  if (n < 0) throw std::invalid_argument("photon number must be nonnegative");
  AmplitudeVector<Real> c = AmplitudeVector<Real>::Zero(n + 1);
  c(n) = 1;
  return SingleModeState<Real>(std::move(c));
}

/// |n, m>
template <typename Real = double>
BipartiteState<Real> basis_state(int n, int m) {
  return tensor_product(number_state<Real>(n), number_state<Real>(m));
}

/// (|N,0> + |0,N>) / sqrt(2)
template <typename Real = double>
BipartiteState<Real> noon(int total_n) {
  if (total_n < 1) throw std::domain_error("NOON state needs N >= 1");
  AmplitudeGrid<Real> c = AmplitudeGrid<Real>::Zero(total_n + 1, total_n + 1);
  c(total_n, 0) = c(0, total_n) = Real(1) / std::sqrt(Real(2));
  return BipartiteState<Real>(std::move(c));
}

/// The input that the 50-50 splitter U(i pi/4) maps onto noon(N), for even N:
/// weight on |N-2k, 2k> when N = 0 mod 4 and on |N-2k-1, 2k+1> when N = 2 mod 4,
/// amplitudes (-1)^k sqrt(binomial / 2^(N-1)).
template <typename Real = double>
BipartiteState<Real> ideal_input(int total_n) {
  if (total_n < 2 || total_n % 2 != 0)
    throw std::domain_error("ideal input exists only for even N >= 2; the 50-50 splitter cannot reach odd-N NOON states");
  const int shift = total_n % 4 == 0 ? 0 : 1;
  AmplitudeGrid<Real> c = AmplitudeGrid<Real>::Zero(total_n + 1, total_n + 1);
  const Real log_norm = Real(total_n - 1) * std::log(Real(2));
  for (int k = 0; 2 * k + shift <= total_n; ++k) {
    const int m = 2 * k + shift;
    const Real mag = std::exp((log_binomial<Real>(total_n, m) - log_norm) / 2);
    c(total_n - m, m) = k % 2 == 0 ? mag : -mag;
  }
  return BipartiteState<Real>(std::move(c));
}

enum class Family { sv_cs, ecs_cs, ocs_cs };

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::sv_cs: return "sv-cs";
    case Family::ecs_cs: return "ecs-cs";
    case Family::ocs_cs: return "ocs-cs";
  }
  return "?";
}

inline std::optional<Family> parse_family(std::string_view s) {
  if (s == "sv-cs") return Family::sv_cs;
  if (s == "ecs-cs") return Family::ecs_cs;
  if (s == "ocs-cs") return Family::ocs_cs;
  return std::nullopt;
}

inline CatParity cat_parity(Family f) {
  if (f == Family::sv_cs) throw std::invalid_argument("sv-cs is not a cat family");
  return f == Family::ecs_cs ? CatParity::even : CatParity::odd;
}

/// Product input: mode a holds the squeezed vacuum or cat, mode b the coherent state.
template <typename Real = double>
struct InputFamily {
  Family tag = Family::sv_cs;
  Real squeeze = 0;               // sv-cs
  std::complex<Real> beta{};      // cat families
  std::complex<Real> alpha{};

  static InputFamily squeezed_coherent(Real r, std::complex<Real> alpha) {
    return {Family::sv_cs, r, {}, alpha};
  }
  static InputFamily cat_coherent(CatParity parity, std::complex<Real> beta, std::complex<Real> alpha) {
    return {parity == CatParity::even ? Family::ecs_cs : Family::ocs_cs, Real(0), beta, alpha};
  }
};

template <typename Real>
SingleModeState<Real> mode_a_state(const InputFamily<Real>& family, const Truncation& trunc = {}) {
  if (family.tag == Family::sv_cs) return squeezed_vacuum<Real>(family.squeeze, trunc);
  return cat<Real>(family.beta, cat_parity(family.tag), trunc);
}

template <typename Real>
BipartiteState<Real> build_input(const InputFamily<Real>& family, const Truncation& trunc = {}) {
  return tensor_product(mode_a_state(family, trunc), coherent<Real>(family.alpha, trunc));
}

/// The N-photon block of build_input(family), computed from single-mode
/// amplitudes truncated at N (exact, since no higher term contributes).
template <typename Real>
BlockVector<Real> input_block(const InputFamily<Real>& family, int total_n) {
  const Truncation trunc{total_n, 1e-12};
  const auto a = mode_a_state(family, trunc);
  const auto b = coherent<Real>(family.alpha, trunc);
  AmplitudeVector<Real> d(total_n + 1);
  for (int n = 0; n <= total_n; ++n) d(n) = a[n] * b[total_n - n];
  return make_block<Real>(total_n, std::move(d));
}

}  // namespace noonsim
