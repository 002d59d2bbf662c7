// Sweep, optimization, figure reproduction and self-verification drivers
// behind the noonsim command-line tool.
#pragma once

#include "noonsim/beamsplitter.hpp"
#include "noonsim/postselect.hpp"
#include "noonsim/states.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace noonsim {

struct SweepRecord {
  Family family = Family::sv_cs;
  int total_n = 0;
  double alpha_mag = 0;
  double fidelity = 0;
  double overlap = 0;
  double block_probability = 0;
};

struct SweepConfig {
  std::vector<Family> families;
  std::vector<int> photon_numbers;
  double alpha_min = 0.0;
  double alpha_max = 4.0;
  double alpha_step = 0.05;
  std::optional<double> fixed_squeeze;  // sv-cs: use this r instead of the fidelity-optimal one
  std::optional<int> n_max;
  int jobs = 1;
};

/// Maximum squeeze amplitude searched when pairing r with |alpha|.
inline constexpr double kMaxSqueeze = 3.0;

std::vector<double> alpha_grid(double min, double max, double step);

/// Throws std::invalid_argument on an empty or malformed configuration.
void validate(const SweepConfig& config);

/// One record for a single (family, N, |alpha|). Cat families use beta = |alpha|
/// and coherent amplitude i|alpha|; sv-cs uses coherent amplitude |alpha| and
/// the squeeze returned by best_squeeze (or the fixed one).
SweepRecord sweep_point(Family family, int total_n, double alpha_mag, const SweepConfig& config);

/// r in [0, kMaxSqueeze] maximizing the N-photon fidelity of |r>|alpha>.
double best_squeeze(double alpha_mag, int total_n);

std::vector<SweepRecord> sweep(const SweepConfig& config);

inline constexpr const char* kSweepHeader = "family,N,alpha_mag,fidelity,overlap,block_probability";

/// 12 significant digits, scientific.
std::string format_number(double v);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records);

// ---------------------------------------------------------------------------

struct SearchConfig {
  int grid = 50;           // points per amplitude axis
  int phase_steps = 8;     // points on the relative-phase axis
  int refine_iters = 400;  // simplex iterations
  double amplitude_max = 3.0;
  double alpha_max = 3.0;
  int jobs = 1;
};

struct TraceSample {
  double amplitude = 0;  // r or |beta|
  double alpha_mag = 0;
  double phase = 0;      // arg(alpha) - arg(beta)
  double fidelity = 0;
};

struct OptimizationReport {
  Family family = Family::sv_cs;
  int total_n = 0;
  TraceSample best;
  double best_overlap = 0;
  double grid_best_fidelity = 0;
  int grid_evaluations = 0;
  int refine_evaluations = 0;
  int refine_iterations = 0;
  std::vector<TraceSample> trace;
};

void validate(const SearchConfig& config);

/// N-photon fidelity at one parameter point; 0 when the block is empty.
double family_fidelity(Family family, int total_n, const TraceSample& point);

/// Coarse grid over (amplitude, |alpha|, phase) followed by Nelder-Mead refinement
/// from the best grid point. Deterministic for a given configuration.
OptimizationReport optimize(Family family, int total_n, const SearchConfig& config);

std::string to_json(const OptimizationReport& report);

// ---------------------------------------------------------------------------

struct Fig1Panel {
  int total_n = 0;
  Family cat_family = Family::ecs_cs;
  std::vector<double> alpha_mags;
  std::vector<double> cat_overlap;
  std::vector<double> sv_overlap;
  std::vector<SweepRecord> records;  // cat rows, then sv-cs rows
};

struct Fig1Config {
  double alpha_max = 2.25;
  double alpha_step = 0.025;
  std::optional<double> fixed_squeeze;
  int jobs = 1;
};

/// Panels for N = 2, 4, 6, 8: odd cats for N = 2 mod 4, even cats for N = 0 mod 4,
/// each against squeezed vacuum (x) coherent.
std::vector<Fig1Panel> fig1_panels(const Fig1Config& config);

/// Writes fig1_N<N>.csv per panel, fig1.dat (gnuplot indexed blocks), fig1.gp
/// and fig1_sweep.csv. Returns the files written.
std::vector<std::filesystem::path> write_fig1(const std::filesystem::path& dir, const std::vector<Fig1Panel>& panels);

// ---------------------------------------------------------------------------

struct VerifyCheck {
  std::string name;
  bool passed = false;
  double value = 0;
  double tolerance = 0;
  std::string detail;
};

struct VerifyOptions {
  /// Replaces the self-tested disentangling convention (mutation testing).
  std::optional<DisentanglingConvention> convention_override;
  double tail_tolerance = 1e-12;  // truncation of the full cat inputs
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  std::string convention;
  std::string resolved_exponent;

  bool all_passed() const;
};

VerifyReport run_verify(const VerifyOptions& options = {});
void print_verify(std::ostream& os, const VerifyReport& report);

}  // namespace noonsim

#include "noonsim/detail/parallel.hpp"
