#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "noonsim/beamsplitter.hpp"
#include "noonsim/states.hpp"
#include "support.hpp"

#include <numbers>
#include <random>

using namespace noonsim;
using cd = std::complex<double>;

namespace {

const cd kHalf = fifty_fifty<double>();
const cd kGammas[] = {kHalf, cd(std::numbers::pi / 4, 0), std::polar(0.3, 0.7)};

}  // namespace

TEST_CASE("block unitary matches the two-mode Taylor oracle") {
  constexpr int k = 6;
  for (cd g : {kHalf, cd(0.4, -0.2), std::polar(1.2, 2.0)}) {
    const auto full = oracle::two_mode_unitary(g, k);
    for (int total = 0; total <= k; ++total) {
      const auto block = block_unitary(total, g);
      for (int n = 0; n <= total; ++n)
        for (int m = 0; m <= total; ++m) {
          const cd ref = full(m * (k + 1) + (total - m), n * (k + 1) + (total - n));
          CHECK(std::abs(block(m, n) - ref) < 1e-13);
        }
    }
  }
}

TEST_CASE("convention self-test selects a convention") {
  const auto st = run_convention_self_test();
  REQUIRE(st.selected.has_value());
  CHECK(st.checks.size() == 32);
  CHECK(validated_convention() == st.selected);
  int matches = 0;
  for (const auto& c : st.checks) matches += c.max_deviation < 1e-12;
  CHECK(matches >= 1);
  // the literal reading is rejected
  CHECK(st.checks.front().max_deviation > 1e-3);
}

TEST_CASE("disentangle examples") {
  const auto zero = disentangle<double>(0.0);
  CHECK(std::abs(zero.p) == 0.0);
  CHECK(zero.q == 0.0);
  CHECK(std::abs(zero.r) == 0.0);
  CHECK(zero.convention_valid);

  const auto half = disentangle(kHalf);
  CHECK(half.q == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(std::abs(half.q - 0.693147) < 1e-6);
  CHECK(std::abs(std::abs(half.p) - 1.0) < 1e-12);
  // p = r = -i, as found by the oracle
  CHECK(std::abs(half.p - cd(0, -1)) < 1e-12);
  CHECK(std::abs(half.r - cd(0, -1)) < 1e-12);

  const auto real = disentangle<double>(std::numbers::pi / 4);
  CHECK(std::abs(std::abs(real.p) - 1.0) < 1e-12);
  CHECK(std::abs(real.q - std::log(2.0)) < 1e-12);

  CHECK_THROWS_AS(disentangle<double>(std::numbers::pi / 2), std::domain_error);
  CHECK_THROWS_AS(disentangle<double>(cd(0, 2.0)), std::domain_error);
}

TEST_CASE("single-step disentangled product matches the oracle for small blocks") {
  const auto lf = detail::log_factorial_table<double>(10);
  for (cd g : kGammas) {
    const auto cfg = disentangle(g);
    for (int total = 0; total <= 8; ++total) {
      const BlockMatrix<double> diff = disentangled_factors(total, cfg, lf).product() - block_unitary(total, -g);
      CHECK(diff.cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("apply_direct examples") {
  const auto vac = basis_state<double>(0, 0);
  CHECK(distance(apply_direct(vac, cd(0.7, -0.3)), vac) < 1e-15);

  const auto hom = apply_direct(basis_state<double>(1, 1), kHalf);
  CHECK(std::abs(hom(1, 1)) < 1e-12);
  CHECK(oracle::phase_distance(to_grid(hom, 2), oracle::noon_grid(2)) < 1e-12);

  const auto single = apply_direct(basis_state<double>(1, 0), kHalf);
  CHECK(std::abs(std::abs(single(1, 0)) - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(std::abs(single(0, 1)) - 1 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("apply_disentangled examples") {
  std::mt19937_64 rng(3);
  const auto x = random_state<double>(5, 4, rng);
  CHECK(distance(apply_disentangled(x, cd(0), false), x) < 1e-15);
  CHECK(distance(apply_disentangled(x, cd(0), true), x) < 1e-15);

  const auto back = apply_disentangled(noon<double>(2), kHalf, true);
  CHECK(oracle::phase_distance(to_grid(back, 2), to_grid(ideal_input<double>(2), 2)) < 1e-12);
}

TEST_CASE("oracle equivalence on 200 random states at n_max = 20") {
  std::mt19937_64 rng(2024);
  std::vector<BipartiteState<double>> states;
  for (int i = 0; i < 200; ++i) states.push_back(random_state<double>(20, 20, rng));
  for (cd g : kGammas) {
    const DirectBeamSplitter<double> direct(g, 40);
    const DisentangledBeamSplitter<double> dis(g, false, 40);
    double worst = 0;
    for (const auto& x : states) worst = std::max(worst, distance(direct.apply(x), dis.apply(x)));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("both implementations match the two-mode Taylor oracle on small states") {
  constexpr int k = 10;
  std::mt19937_64 rng(5);
  for (cd g : kGammas) {
    const auto u = oracle::two_mode_unitary(g, k);
    for (int trial = 0; trial < 5; ++trial) {
      const auto x = random_state<double>(5, 5, rng);
      const auto ref = oracle::unflatten(u * oracle::flatten(to_grid(x, k), k), k);
      CHECK((to_grid(apply_direct(x, g), k) - ref).norm() < 1e-12);
      CHECK((to_grid(apply_bs(x, g), k) - ref).norm() < 1e-12);
    }
  }
}

TEST_CASE("property: norm preservation, block conservation and inverse") {
  std::mt19937_64 rng(17);
  for (cd g : kGammas) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = random_state<double>(1 + trial % 9, 1 + (5 * trial) % 11, rng);
      const auto yd = apply_direct(x, g);
      const auto y = apply_bs(x, g);
      CHECK(std::abs(norm(y) - 1.0) < 1e-12);
      CHECK(std::abs(norm(yd) - 1.0) < 1e-12);
      for (int n = 0; n <= highest_occupied_block(x); ++n)
        CHECK(std::abs(extract_block(y, n).weight - extract_block(x, n).weight) < 1e-12);
      CHECK(distance(apply_bs(y, -g), x) < 1e-10);
      CHECK(distance(apply_disentangled(y, g, true), x) < 1e-10);
    }
  }
}

TEST_CASE("property: ideal inputs produce NOON states") {
  for (int n : {2, 4, 6, 8}) {
    const auto out = apply_bs(ideal_input<double>(n), kHalf);
    CHECK(oracle::phase_distance(to_grid(out, n), oracle::noon_grid(n)) < 1e-9);
    CHECK(oracle::noon_fidelity_grid(to_grid(out, n), n) > 1 - 1e-9);
  }
}

TEST_CASE("verify_unitary") {
  CHECK(verify_unitary<double>(0.0, 6).max_deviation() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(verify_unitary<double>(kHalf, 12).max_deviation() < 1e-10);
}

TEST_CASE("round trip U U^dag on NOON(6)") {
  const auto n6 = noon<double>(6);
  CHECK(distance(apply_bs(apply_disentangled(n6, kHalf, true), kHalf), n6) < 1e-10);
}

TEST_CASE("sub-stepping keeps large blocks accurate") {
  CHECK(disentangled_steps(std::numbers::pi / 4, 1) == 1);
  CHECK(disentangled_steps(std::numbers::pi / 4, 4) == 1);
  CHECK(disentangled_steps(std::numbers::pi / 4, 80) > 1);
  for (int total : {40, 60, 80}) {
    const DisentangledBeamSplitter<double> dis(kHalf, false, total);
    const auto ref = block_unitary(total, kHalf);
    oracle::Vec e = oracle::Vec::Zero(total + 1);
    e(total / 3) = 1;
    CHECK((dis.apply(total, e) - ref * e).norm() < 1e-11);
  }
}

TEST_CASE("output grid keeps every occupied block") {
  const BipartiteState<double> x(to_grid(basis_state<double>(3, 0), 3).topRows(4).leftCols(1));
  const auto y = apply_bs(x, kHalf);
  CHECK(y.n_max_a() == 3);
  CHECK(y.n_max_b() == 3);
  CHECK(std::abs(norm(y) - 1.0) < 1e-14);
}

TEST_CASE("long double beam splitter") {
  using ld = long double;
  const std::complex<ld> g(0, std::numbers::pi_v<ld> / 4);
  const auto x = ideal_input<ld>(6);
  const auto y = apply_bs(x, g);
  CHECK(std::norm(y(6, 0) + y(0, 6)) / 2 > 1 - 1e-15L);
  CHECK(std::abs(norm(y) - 1.0L) < 1e-16L);
}
