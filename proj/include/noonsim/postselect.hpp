// N-photon post-selection: NOON fidelity and post-selection overlap.
#pragma once

#include "noonsim/beamsplitter.hpp"
#include "noonsim/states.hpp"

#include <span>
#include <vector>

namespace noonsim {

/// |d_0 + d_N|^2 / 2 for the normalized block, i.e. the squared overlap of
/// the N-photon component with (|N,0> + |0,N>)/sqrt(2).
template <typename Real>
Real block_fidelity(const BlockVector<Real>& block) {
  if (block.total_n < 1) throw std::domain_error("NOON fidelity needs N >= 1");
  const auto d = block.normalized();
  return std::norm(d.amps(0) + d.amps(block.total_n)) / Real(2);
}

/// Fidelity of the normalized N-photon component of an output state.
template <typename Real>
Real noon_fidelity(const BipartiteState<Real>& output, int total_n) {
  return block_fidelity(extract_block(output, total_n));
}

template <typename Real>
struct PostSelectionResult {
  int total_n = 0;
  Real fidelity = 0;
  Real block_probability = 0;   // weight of the N-photon component
  Real overlap_with_ideal = 0;  // |<NOON| U input>|^2, unnormalized
};

/// Post-selects the N-photon block of U(gamma)|input>, given the input's
/// N-photon block and the splitter's block unitary.
template <typename Real>
PostSelectionResult<Real> postselect_block(const BlockVector<Real>& input, const BlockMatrix<Real>& unitary) {
  const int total_n = input.total_n;
  const AmplitudeVector<Real> out = unitary * input.amps;
  PostSelectionResult<Real> res;
  res.total_n = total_n;
  res.block_probability = input.weight;
  res.overlap_with_ideal = std::norm(out(0) + out(total_n)) / Real(2);
  res.fidelity = block_fidelity(make_block<Real>(total_n, out));
  return res;
}

template <typename Real>
PostSelectionResult<Real> postselect(const BipartiteState<Real>& input, int total_n,
                                     std::complex<Real> gamma = fifty_fifty<Real>()) {
  return postselect_block(extract_block(input, total_n), block_unitary(total_n, gamma));
}

template <typename Real>
struct OverlapPaths {
  Real direct = 0;      // |<ideal input|input>|^2
  Real via_output = 0;  // |<NOON|U input>|^2
};

template <typename Real>
bool is_fifty_fifty(std::complex<Real> gamma) {
  return std::abs(gamma - fifty_fifty<Real>()) < Real(1e-14);
}

/// Both routes to the post-selection overlap. The ideal input is the closed
/// form for the 50-50 splitter and U^dag(gamma)|NOON> (disentangled route)
/// otherwise; the output route uses the block exponential.
template <typename Real>
OverlapPaths<Real> postselection_overlap_paths(const BipartiteState<Real>& input, int total_n,
                                               std::complex<Real> gamma = fifty_fifty<Real>()) {
  if (total_n < 2 || total_n % 2 != 0) throw std::domain_error("post-selection overlap needs even N >= 2");
  const BipartiteState<Real> ideal =
      is_fifty_fifty(gamma) ? ideal_input<Real>(total_n) : apply_disentangled(noon<Real>(total_n), gamma, true);
  OverlapPaths<Real> paths;
  paths.direct = std::norm(inner_product(ideal, input));
  const AmplitudeVector<Real> out = block_unitary(total_n, gamma) * extract_block(input, total_n).amps;
  paths.via_output = std::norm(out(0) + out(total_n)) / Real(2);
  return paths;
}

/// |<ideal input|input>|^2. Throws std::logic_error if the two routes disagree
/// by more than 1e-10.
template <typename Real>
Real postselection_overlap(const BipartiteState<Real>& input, int total_n,
                           std::complex<Real> gamma = fifty_fifty<Real>()) {
  const auto paths = postselection_overlap_paths(input, total_n, gamma);
  if (std::abs(paths.direct - paths.via_output) > Real(1e-10))
    throw std::logic_error("post-selection overlap routes disagree");
  return paths.direct;
}

/// Closed form of the overlap between the ideal input and the cat (x) coherent
/// input |alpha, +/-> |i alpha>:
///   2^(N-1) |alpha|^E exp(-|alpha|^2) / (N! cosh|alpha|^2)    (sinh for odd cats)
/// E = 2N, as fixed by fit_overlap_exponent against the numerical overlap.
template <typename Real>
Real analytic_overlap_cat(Real alpha_mag, int total_n, CatParity parity, Real exponent) {
  if (total_n < 2 || total_n % 2 != 0) throw std::domain_error("analytic overlap needs even N >= 2");
  if (alpha_mag < Real(0)) throw std::domain_error("alpha magnitude must be nonnegative");
  if (alpha_mag == Real(0)) return Real(0);
  const Real x = alpha_mag * alpha_mag;
  const Real log_norm = parity == CatParity::even ? detail::log_cosh(x) : detail::log_sinh(x);
  return std::exp(Real(total_n - 1) * std::log(Real(2)) + exponent * std::log(alpha_mag) - x -
                  log_factorial<Real>(total_n) - log_norm);
}

template <typename Real>
Real analytic_overlap_cat(Real alpha_mag, int total_n, CatParity parity) {
  return analytic_overlap_cat(alpha_mag, total_n, parity, Real(2 * total_n));
}

/// Input |beta, +/-> |i beta>, the cat family on the alpha = i beta locus.
template <typename Real = double>
InputFamily<Real> locked_cat_input(CatParity parity, Real beta) {
  return InputFamily<Real>::cat_coherent(parity, beta, std::complex<Real>(0, beta));
}

struct ExponentFit {
  int total_n = 0;
  CatParity parity = CatParity::even;
  double exponent = 0;  // mean over the grid
  double spread = 0;    // max deviation of a single grid point from the mean
};

/// Solves numerical overlap = prefactor * |alpha|^E for E at each grid point,
/// using the numerically computed overlap of |alpha, +/-> |i alpha>.
ExponentFit fit_overlap_exponent(int total_n, CatParity parity, std::span<const double> alpha_mags);

struct ExponentResolution {
  std::vector<ExponentFit> fits;
  bool printed_form_matches = false;  // E = 2
  bool n_dependent_form_matches = false;  // E = 2N
};

ExponentResolution resolve_overlap_exponent(double tolerance = 1e-6);

/// Fidelity of squeezed vacuum (x) coherent input after U(gamma).
template <typename Real>
Real sv_cs_fidelity(Real r, std::complex<Real> alpha, int total_n, std::complex<Real> gamma = fifty_fifty<Real>()) {
  const auto block = input_block(InputFamily<Real>::squeezed_coherent(r, alpha), total_n);
  return block_fidelity(make_block<Real>(total_n, block_unitary(total_n, gamma) * block.amps));
}

}  // namespace noonsim
