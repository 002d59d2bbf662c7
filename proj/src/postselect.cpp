#include "noonsim/postselect.hpp"

#include <array>

namespace noonsim {

ExponentFit fit_overlap_exponent(int total_n, CatParity parity, std::span<const double> alpha_mags) {
  std::vector<double> estimates;
  for (double a : alpha_mags) {
    if (a <= 0.0 || std::abs(a - 1.0) < 1e-3) continue;  // log|alpha| = 0 carries no information
    const double overlap = postselection_overlap(build_input(locked_cat_input(parity, a)), total_n);
    // E = 0 leaves only the prefactor
    const double prefactor = analytic_overlap_cat(a, total_n, parity, 0.0);
    estimates.push_back(std::log(overlap / prefactor) / std::log(a));
  }
  if (estimates.empty()) throw std::invalid_argument("exponent fit needs grid points away from 0 and 1");
  ExponentFit fit{total_n, parity, 0.0, 0.0};
  for (double e : estimates) fit.exponent += e;
  fit.exponent /= static_cast<double>(estimates.size());
  for (double e : estimates) fit.spread = std::max(fit.spread, std::abs(e - fit.exponent));
  return fit;
}

ExponentResolution resolve_overlap_exponent(double tolerance) {
  constexpr std::array<double, 8> grid{0.25, 0.5, 0.75, 1.25, 1.5, 2.0, 2.5, 3.0};
  ExponentResolution res;
  res.printed_form_matches = true;
  res.n_dependent_form_matches = true;
  for (int total_n : {2, 4, 6, 8}) {
    const CatParity parity = total_n % 4 == 0 ? CatParity::even : CatParity::odd;
    const auto fit = fit_overlap_exponent(total_n, parity, grid);
    const bool consistent = fit.spread < tolerance;
    res.printed_form_matches = res.printed_form_matches && consistent && std::abs(fit.exponent - 2.0) < tolerance;
    res.n_dependent_form_matches =
        res.n_dependent_form_matches && consistent && std::abs(fit.exponent - 2.0 * total_n) < tolerance;
    res.fits.push_back(fit);
  }
  return res;
}

}  // namespace noonsim
