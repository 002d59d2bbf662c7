#include "noonsim/commands.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace noonsim {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kMinCatAmplitude = 1e-9;  // odd cats are undefined at beta = 0

InputFamily<double> family_input(Family family, const TraceSample& p) {
  const std::complex<double> alpha = std::polar(p.alpha_mag, p.phase);
  if (family == Family::sv_cs) return InputFamily<double>::squeezed_coherent(p.amplitude, alpha);
  return InputFamily<double>::cat_coherent(cat_parity(family), {p.amplitude, 0.0}, alpha);
}

class Objective {
 public:
  Objective(Family family, int total_n, const SearchConfig& config)
      : family_(family), total_n_(total_n), config_(config),
        unitary_(block_unitary(total_n, fifty_fifty<double>())) {}

  TraceSample clamp(TraceSample p) const {
    const double lo = family_ == Family::sv_cs ? 0.0 : kMinCatAmplitude;
    p.amplitude = std::clamp(p.amplitude, lo, config_.amplitude_max);
    p.alpha_mag = std::clamp(p.alpha_mag, 0.0, config_.alpha_max);
    p.phase = std::fmod(p.phase, kTwoPi);
    if (p.phase < 0) p.phase += kTwoPi;
    return p;
  }

  TraceSample evaluate(TraceSample p) const {
    p = clamp(p);
    p.fidelity = 0;
    const auto block = input_block(family_input(family_, p), total_n_);
    if (block.weight > 0) p.fidelity = block_fidelity(make_block<double>(total_n_, unitary_ * block.amps));
    return p;
  }

  double overlap(const TraceSample& p) const {
    const auto block = input_block(family_input(family_, clamp(p)), total_n_);
    return postselect_block(block, unitary_).overlap_with_ideal;
  }

 private:
  Family family_;
  int total_n_;
  SearchConfig config_;
  BlockMatrix<double> unitary_;
};

struct RefineState {
  const Objective* objective;
  std::vector<TraceSample>* trace;
};

double negative_fidelity(const gsl_vector* x, void* params) {
  auto* state = static_cast<RefineState*>(params);
  const TraceSample s = state->objective->evaluate({gsl_vector_get(x, 0), gsl_vector_get(x, 1), gsl_vector_get(x, 2)});
  state->trace->push_back(s);
  return -s.fidelity;
}

}  // namespace

void validate(const SearchConfig& config) {
  if (config.grid < 2) throw std::invalid_argument("--grid must be >= 2");
  if (config.phase_steps < 1) throw std::invalid_argument("phase steps must be >= 1");
  if (config.refine_iters < 0) throw std::invalid_argument("--refine-iters must be nonnegative");
  if (!(config.amplitude_max > 0) || !(config.alpha_max > 0))
    throw std::invalid_argument("search ranges must be positive");
  if (config.jobs < 1) throw std::invalid_argument("--jobs must be >= 1");
}

double family_fidelity(Family family, int total_n, const TraceSample& point) {
  if (total_n < 1) throw std::domain_error("N must be >= 1");
  SearchConfig wide;
  wide.amplitude_max = std::max(point.amplitude, 1.0);
  wide.alpha_max = std::max(point.alpha_mag, 1.0);
  return Objective(family, total_n, wide).evaluate(point).fidelity;
}

OptimizationReport optimize(Family family, int total_n, const SearchConfig& config) {
  if (total_n < 1) throw std::domain_error("N must be >= 1");
  validate(config);
  const Objective objective(family, total_n, config);

  OptimizationReport rep;
  rep.family = family;
  rep.total_n = total_n;

  const int g = config.grid;
  const int count = g * g * config.phase_steps;
  rep.trace.resize(count);
  parallel_for(count, config.jobs, [&](int i) {
    const int a = i / (g * config.phase_steps);
    const int b = (i / config.phase_steps) % g;
    const int k = i % config.phase_steps;
    rep.trace[i] = objective.evaluate({config.amplitude_max * (a + 1) / g, config.alpha_max * (b + 1) / g,
                                       kTwoPi * k / config.phase_steps});
  });
  rep.grid_evaluations = count;
  TraceSample start = rep.trace.front();
  for (const auto& s : rep.trace)
    if (s.fidelity > start.fidelity) start = s;
  rep.grid_best_fidelity = start.fidelity;

  if (config.refine_iters > 0) {
    RefineState state{&objective, &rep.trace};
    gsl_multimin_function fn{&negative_fidelity, 3, &state};
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(3), &gsl_vector_free);
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(3), &gsl_vector_free);
    gsl_vector_set(x.get(), 0, start.amplitude);
    gsl_vector_set(x.get(), 1, start.alpha_mag);
    gsl_vector_set(x.get(), 2, start.phase);
    gsl_vector_set(step.get(), 0, config.amplitude_max / g);
    gsl_vector_set(step.get(), 1, config.alpha_max / g);
    gsl_vector_set(step.get(), 2, kTwoPi / config.phase_steps / 2);
    std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> minimizer(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 3), &gsl_multimin_fminimizer_free);
    gsl_multimin_fminimizer_set(minimizer.get(), &fn, x.get(), step.get());
    for (int it = 0; it < config.refine_iters; ++it) {
      ++rep.refine_iterations;
      if (gsl_multimin_fminimizer_iterate(minimizer.get()) != GSL_SUCCESS) break;
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(minimizer.get()), 1e-10) == GSL_SUCCESS) break;
    }
  }
  rep.refine_evaluations = static_cast<int>(rep.trace.size()) - rep.grid_evaluations;

  rep.best = rep.trace.front();
  for (const auto& s : rep.trace)
    if (s.fidelity > rep.best.fidelity) rep.best = s;
  rep.best_overlap = objective.overlap(rep.best);
  return rep;
}

std::string to_json(const OptimizationReport& report) {
  nlohmann::ordered_json j;
  j["family"] = std::string(to_string(report.family));
  j["N"] = report.total_n;
  j["best_params"] = {{report.family == Family::sv_cs ? "r" : "beta", report.best.amplitude},
                      {"alpha_mag", report.best.alpha_mag},
                      {"relative_phase", report.best.phase}};
  j["best_fidelity"] = report.best.fidelity;
  j["best_overlap"] = report.best_overlap;
  j["grid"] = {{"evaluations", report.grid_evaluations}, {"best_fidelity", report.grid_best_fidelity}};
  j["refinement"] = {{"method", "nelder-mead"},
                     {"iterations", report.refine_iterations},
                     {"evaluations", report.refine_evaluations}};
  return j.dump(2);
}

}  // namespace noonsim
