#include "noonsim/commands.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace noonsim {

namespace {

// N-photon block of the family input at |alpha|, with cutoff override applied.
BlockVector<double> family_block(Family family, int total_n, double alpha_mag, double squeeze,
                                 const std::optional<int>& n_max) {
  BlockVector<double> block;
  if (family == Family::sv_cs) {
    block = input_block(InputFamily<double>::squeezed_coherent(squeeze, {alpha_mag, 0.0}), total_n);
  } else if (family == Family::ocs_cs && alpha_mag == 0.0) {
    // beta -> 0 limit of the odd cat is |1>; the coherent mode is vacuum
    AmplitudeVector<double> d = AmplitudeVector<double>::Zero(total_n + 1);
    if (total_n == 1) d(1) = 1;
    block = make_block<double>(total_n, std::move(d));
  } else {
    block = input_block(locked_cat_input(cat_parity(family), alpha_mag), total_n);
  }
  if (n_max && *n_max < total_n) {
    for (int n = 0; n <= total_n; ++n)
      if (n > *n_max || total_n - n > *n_max) block.amps(n) = 0;
    block = make_block<double>(total_n, std::move(block.amps));
  }
  return block;
}

double safe_fidelity(const BlockVector<double>& block, const BlockMatrix<double>& unitary) {
  if (!(block.weight > 0)) return 0.0;
  return block_fidelity(make_block<double>(block.total_n, unitary * block.amps));
}

double block_overlap(const BlockVector<double>& block) {
  if (block.total_n < 2 || block.total_n % 2 != 0) return 0.0;
  const auto ideal = extract_block(ideal_input<double>(block.total_n), block.total_n);
  return std::norm(ideal.amps.dot(block.amps));
}

double squeeze_for(double alpha_mag, int total_n, const SweepConfig& config) {
  return config.fixed_squeeze ? *config.fixed_squeeze : best_squeeze(alpha_mag, total_n);
}

}  // namespace

std::vector<double> alpha_grid(double min, double max, double step) {
  if (!(std::isfinite(min) && std::isfinite(max) && std::isfinite(step)))
    throw std::invalid_argument("alpha grid bounds must be finite");
  if (min < 0) throw std::invalid_argument("--alpha-min must be nonnegative");
  if (max < min) throw std::invalid_argument("--alpha-max must be >= --alpha-min");
  if (!(step > 0)) throw std::invalid_argument("--alpha-step must be positive");
  const auto count = static_cast<long>(std::floor((max - min) / step + 1e-9)) + 1;
  if (count > 10'000'000) throw std::invalid_argument("alpha grid too large");
  std::vector<double> grid(count);
  for (long i = 0; i < count; ++i) grid[i] = min + static_cast<double>(i) * step;
  return grid;
}

void validate(const SweepConfig& config) {
  if (config.families.empty()) throw std::invalid_argument("at least one --family is required");
  if (config.photon_numbers.empty()) throw std::invalid_argument("at least one --N is required");
  for (int n : config.photon_numbers)
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("--N must be even and >= 2, got " + std::to_string(n));
  alpha_grid(config.alpha_min, config.alpha_max, config.alpha_step);
  if (config.fixed_squeeze && !(*config.fixed_squeeze >= 0 && std::isfinite(*config.fixed_squeeze)))
    throw std::invalid_argument("--sv-r must be finite and nonnegative");
  if (config.n_max && *config.n_max < 0) throw std::invalid_argument("--n-max must be nonnegative");
  if (config.jobs < 1) throw std::invalid_argument("--jobs must be >= 1");
}

double best_squeeze(double alpha_mag, int total_n) {
  const BlockMatrix<double> unitary = block_unitary(total_n, fifty_fifty<double>());
  auto fidelity = [&](double r) {
    return safe_fidelity(family_block(Family::sv_cs, total_n, alpha_mag, r, std::nullopt), unitary);
  };
  // coarse scan, then Brent inside the bracket around the best sample
  constexpr int kScan = 60;
  int best = 0;
  double best_value = -1;
  for (int i = 0; i <= kScan; ++i) {
    const double v = fidelity(kMaxSqueeze * i / kScan);
    if (v > best_value) best_value = v, best = i;
  }
  const double lo = kMaxSqueeze * std::max(best - 1, 0) / kScan;
  const double hi = kMaxSqueeze * std::min(best + 1, kScan) / kScan;
  const auto [r, neg] = boost::math::tools::brent_find_minima([&](double x) { return -fidelity(x); }, lo, hi, 40);
  return -neg >= best_value ? r : kMaxSqueeze * best / kScan;
}

SweepRecord sweep_point(Family family, int total_n, double alpha_mag, const SweepConfig& config) {
  const double squeeze = family == Family::sv_cs ? squeeze_for(alpha_mag, total_n, config) : 0.0;
  const auto block = family_block(family, total_n, alpha_mag, squeeze, config.n_max);
  SweepRecord rec;
  rec.family = family;
  rec.total_n = total_n;
  rec.alpha_mag = alpha_mag;
  rec.block_probability = block.weight;
  rec.overlap = block_overlap(block);
  rec.fidelity = safe_fidelity(block, block_unitary(total_n, fifty_fifty<double>()));
  return rec;
}

std::vector<SweepRecord> sweep(const SweepConfig& config) {
  validate(config);
  const auto grid = alpha_grid(config.alpha_min, config.alpha_max, config.alpha_step);
  const int per_n = static_cast<int>(grid.size());
  const int per_family = per_n * static_cast<int>(config.photon_numbers.size());
  const int count = per_family * static_cast<int>(config.families.size());
  std::vector<SweepRecord> out(count);
  parallel_for(count, config.jobs, [&](int i) {
    const Family f = config.families[i / per_family];
    const int n = config.photon_numbers[(i % per_family) / per_n];
    out[i] = sweep_point(f, n, grid[i % per_n], config);
  });
  return out;
}

std::string format_number(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(11) << (v == 0.0 ? 0.0 : v);
  return os.str();
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << kSweepHeader << '\n';
  for (const auto& r : records)
    os << to_string(r.family) << ',' << r.total_n << ',' << format_number(r.alpha_mag) << ','
       << format_number(r.fidelity) << ',' << format_number(r.overlap) << ',' << format_number(r.block_probability)
       << '\n';
}

}  // namespace noonsim
