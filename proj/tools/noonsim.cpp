// noonsim: sweeps, optimization, overlap figure data and self-verification for
// NOON state generation from product inputs on a beam splitter.
#include "noonsim/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

namespace {

using namespace noonsim;

struct Common {
  std::optional<int> n_max;
  double tail = 1e-12;
  std::string out;
  int jobs = 1;

  void validate() const {
    if (n_max && *n_max < 0) throw std::invalid_argument("--n-max must be nonnegative");
    if (!(tail > 0 && tail < 1)) throw std::invalid_argument("--tail must lie in (0, 1)");
    if (jobs < 1) throw std::invalid_argument("--jobs must be >= 1");
  }
};

Family family_or_throw(const std::string& s) {
  const auto f = parse_family(s);
  if (!f) throw std::invalid_argument("unknown family '" + s + "' (expected sv-cs, ecs-cs or ocs-cs)");
  return *f;
}

// Writes via fn to --out, or stdout when --out is empty.
template <typename Fn>
void emit(const std::string& out, Fn&& fn) {
  if (out.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream os(out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + out);
  fn(os);
  if (!os) throw std::runtime_error("write failed: " + out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NOON state generation from product inputs on a 50-50 beam splitter"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--n-max", common.n_max, "Fock cutoff override per mode");
  app.add_option("--tail", common.tail, "Truncation tolerance on discarded probability")->capture_default_str();
  app.add_option("--out", common.out, "Output file (directory for reproduce-fig1)");
  app.add_option("--jobs", common.jobs, "Worker threads")->capture_default_str();

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Overlap and fidelity over a grid of |alpha|");
  std::vector<std::string> sweep_families;
  std::vector<int> sweep_ns;
  SweepConfig sweep_cfg;
  std::optional<double> sweep_r;
  sweep_cmd->add_option("--family", sweep_families, "sv-cs, ecs-cs or ocs-cs (repeatable)")->required();
  sweep_cmd->add_option("--N", sweep_ns, "Even photon number (repeatable)")->required();
  sweep_cmd->add_option("--alpha-min", sweep_cfg.alpha_min)->capture_default_str();
  sweep_cmd->add_option("--alpha-max", sweep_cfg.alpha_max)->capture_default_str();
  sweep_cmd->add_option("--alpha-step", sweep_cfg.alpha_step)->capture_default_str();
  sweep_cmd->add_option("--sv-r", sweep_r, "Fixed squeeze for sv-cs (default: fidelity-optimal per |alpha|)");

  // optimize
  auto* opt_cmd = app.add_subcommand("optimize", "Maximize N-photon NOON fidelity over input parameters");
  std::string opt_family;
  int opt_n = 0;
  SearchConfig search;
  opt_cmd->add_option("--family", opt_family, "sv-cs, ecs-cs or ocs-cs")->required();
  opt_cmd->add_option("--N", opt_n, "Photon number")->required();
  opt_cmd->add_option("--grid", search.grid, "Coarse points per amplitude axis")->capture_default_str();
  opt_cmd->add_option("--refine-iters", search.refine_iters, "Simplex iterations")->capture_default_str();
  opt_cmd->add_option("--phase-steps", search.phase_steps, "Coarse points on the phase axis")->capture_default_str();

  // reproduce-fig1
  auto* fig_cmd = app.add_subcommand("reproduce-fig1", "Write the four overlap panels as CSV and gnuplot data");
  Fig1Config fig_cfg;
  std::optional<double> fig_r;
  fig_cmd->add_option("--alpha-max", fig_cfg.alpha_max)->capture_default_str();
  fig_cmd->add_option("--alpha-step", fig_cfg.alpha_step)->capture_default_str();
  fig_cmd->add_option("--sv-r", fig_r, "Fixed squeeze for the sv-cs curves");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suite");
  bool inject_sign_flip = false;
  verify_cmd->add_flag("--inject-sign-flip", inject_sign_flip)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    common.validate();

    if (*sweep_cmd) {
      for (const auto& f : sweep_families) sweep_cfg.families.push_back(family_or_throw(f));
      sweep_cfg.photon_numbers = sweep_ns;
      sweep_cfg.fixed_squeeze = sweep_r;
      sweep_cfg.n_max = common.n_max;
      sweep_cfg.jobs = common.jobs;
      validate(sweep_cfg);
      const auto records = sweep(sweep_cfg);
      emit(common.out, [&](std::ostream& os) { write_sweep_csv(os, records); });
      return 0;
    }

    if (*opt_cmd) {
      const Family family = family_or_throw(opt_family);
      if (opt_n < 1) throw std::invalid_argument("--N must be >= 1");
      search.jobs = common.jobs;
      validate(search);
      const auto report = optimize(family, opt_n, search);
      emit(common.out, [&](std::ostream& os) { os << to_json(report) << '\n'; });
      return 0;
    }

    if (*fig_cmd) {
      fig_cfg.fixed_squeeze = fig_r;
      fig_cfg.jobs = common.jobs;
      if (fig_r && !(*fig_r >= 0 && std::isfinite(*fig_r))) throw std::invalid_argument("--sv-r must be nonnegative");
      alpha_grid(0.0, fig_cfg.alpha_max, fig_cfg.alpha_step);
      const auto panels = fig1_panels(fig_cfg);
      for (const auto& path : write_fig1(common.out.empty() ? "fig1" : common.out, panels))
        std::cout << path.string() << '\n';
      return 0;
    }

    if (*verify_cmd) {
      VerifyOptions options;
      options.tail_tolerance = common.tail;
      if (inject_sign_flip) {
        auto conv = validated_convention().value_or(DisentanglingConvention{});
        conv.sign = -conv.sign;
        options.convention_override = conv;
      }
      const auto report = run_verify(options);
      emit(common.out, [&](std::ostream& os) { print_verify(os, report); });
      return report.all_passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
