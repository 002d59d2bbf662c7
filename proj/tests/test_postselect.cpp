#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "noonsim/postselect.hpp"
#include "support.hpp"

#include <numbers>
#include <random>

using namespace noonsim;
using cd = std::complex<double>;

namespace {

const cd kHalf = fifty_fifty<double>();

// |<ideal|input>|^2 from the Taylor-oracle ideal input and the series states.
double oracle_cat_overlap(double a, int total_n, bool even) {
  constexpr int k = 60;
  const oracle::Vec ca = oracle::cat_superposition(a, even, k);
  const oracle::Vec cb = oracle::coherent_series(cd(0, a), k);
  const oracle::Mat ideal = oracle::ideal_input_grid(total_n);
  cd s = 0;
  for (int n = 0; n <= total_n; ++n) s += std::conj(ideal(n, total_n - n)) * ca(n) * cb(total_n - n);
  return std::norm(s);
}

}  // namespace

TEST_CASE("noon_fidelity examples") {
  for (int n = 1; n <= 6; ++n) CHECK(std::abs(noon_fidelity(noon<double>(n), n) - 1.0) < 1e-15);
  CHECK(std::abs(noon_fidelity(apply_bs(basis_state<double>(1, 1), kHalf), 2) - 1.0) < 1e-12);
  const auto ecs = build_input(InputFamily<double>::cat_coherent(CatParity::even, 1.0, cd(0, 1)));
  CHECK(noon_fidelity(apply_bs(ecs, kHalf), 4) > 1 - 1e-9);
}

TEST_CASE("noon_fidelity errors") {
  CHECK_THROWS_AS(noon_fidelity(basis_state<double>(0, 0), 2), EmptyBlockError);
  CHECK_THROWS_AS(noon_fidelity(basis_state<double>(0, 0), 0), std::domain_error);
}

TEST_CASE("postselection_overlap examples") {
  CHECK(std::abs(postselection_overlap(ideal_input<double>(2), 2) - 1.0) < 1e-15);
  CHECK(postselection_overlap(basis_state<double>(0, 0), 2) == 0.0);
  const auto ocs = build_input(locked_cat_input(CatParity::odd, 1.0));
  CHECK(std::abs(postselection_overlap(ocs, 2) - analytic_overlap_cat(1.0, 2, CatParity::odd)) < 1e-10);
  CHECK_THROWS_AS(postselection_overlap(ocs, 3), std::domain_error);
}

TEST_CASE("analytic_overlap_cat examples") {
  for (int n : {2, 4, 6, 8}) {
    CHECK(analytic_overlap_cat(0.0, n, CatParity::even) == 0.0);
    CHECK(analytic_overlap_cat(0.0, n, CatParity::odd) == 0.0);
  }
  const auto ocs = build_input(InputFamily<double>::cat_coherent(CatParity::odd, 1.0, cd(0, 1)));
  CHECK(std::abs(analytic_overlap_cat(1.0, 2, CatParity::odd) - postselection_overlap(ocs, 2)) < 1e-10);
  const auto ecs = build_input(InputFamily<double>::cat_coherent(CatParity::even, 1.5, cd(0, 1.5)));
  CHECK(std::abs(analytic_overlap_cat(1.5, 4, CatParity::even) - postselection_overlap(ecs, 4)) < 1e-10);
  CHECK_THROWS_AS(analytic_overlap_cat(1.0, 3, CatParity::odd), std::domain_error);
}

TEST_CASE("numerical overlap matches the independent series oracle") {
  for (int n : {2, 4, 6, 8}) {
    const bool even = n % 4 == 0;
    for (double a : {0.25, 1.0, 1.75, 3.0}) {
      const double num =
          postselection_overlap(build_input(locked_cat_input(even ? CatParity::even : CatParity::odd, a)), n);
      CHECK(std::abs(num - oracle_cat_overlap(a, n, even)) < 1e-12);
    }
  }
}

TEST_CASE("exponent resolution picks E = 2N") {
  const auto res = resolve_overlap_exponent();
  CHECK(res.n_dependent_form_matches);
  CHECK(!res.printed_form_matches);
  REQUIRE(res.fits.size() == 4);
  for (const auto& f : res.fits) {
    CHECK(std::abs(f.exponent - 2.0 * f.total_n) < 1e-6);
    CHECK(f.spread < 1e-6);
  }
}

TEST_CASE("property: analytic overlap equals numerical overlap on the grid") {
  for (int n : {2, 4, 6, 8}) {
    const CatParity parity = n % 4 == 0 ? CatParity::even : CatParity::odd;
    for (int k = 1; k <= 12; ++k) {
      const double a = 0.25 * k;
      const auto paths = postselection_overlap_paths(build_input(locked_cat_input(parity, a)), n);
      CHECK(std::abs(paths.direct - paths.via_output) < 1e-10);
      CHECK(std::abs(paths.direct - analytic_overlap_cat(a, n, parity)) < 1e-10);
    }
  }
}

TEST_CASE("property: the two overlap routes agree for general splitters") {
  std::mt19937_64 rng(23);
  for (cd g : {kHalf, cd(0.5, 0.2), std::polar(1.0, -0.4)}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto x = random_state<double>(6, 6, rng);
      for (int n : {2, 4, 6}) {
        const auto p = postselection_overlap_paths(x, n, g);
        CHECK(std::abs(p.direct - p.via_output) < 1e-10);
      }
    }
  }
}

TEST_CASE("property: cat inputs on alpha = i beta give unit fidelity") {
  const std::pair<CatParity, int> cases[] = {
      {CatParity::even, 4}, {CatParity::even, 8}, {CatParity::odd, 2}, {CatParity::odd, 6}};
  for (const auto& [parity, n] : cases)
    for (double beta : {0.5, 1.0, 2.0}) {
      const auto out = apply_bs(build_input(locked_cat_input(parity, beta)), kHalf);
      CHECK(noon_fidelity(out, n) > 1 - 1e-9);
    }
}

TEST_CASE("property: fidelity and overlap are invariant under a common phase rotation") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
  for (int trial = 0; trial < 10; ++trial) {
    const cd beta = std::polar(0.4 + 0.15 * trial, u(rng));
    const cd alpha = std::polar(1.3 - 0.08 * trial, u(rng));
    const cd rot = std::polar(1.0, u(rng));
    for (CatParity parity : {CatParity::even, CatParity::odd}) {
      const auto x = build_input(InputFamily<double>::cat_coherent(parity, beta, alpha));
      const auto y = build_input(InputFamily<double>::cat_coherent(parity, rot * beta, rot * alpha));
      for (int n : {2, 4}) {
        const auto px = postselect(x, n), py = postselect(y, n);
        CHECK(std::abs(px.fidelity - py.fidelity) < 1e-12);
        CHECK(std::abs(postselection_overlap(x, n) - postselection_overlap(y, n)) < 1e-12);
      }
    }
  }
}

TEST_CASE("property: parity selection rules") {
  // mode a carries only even (sv, even cat) or only odd (odd cat) photon numbers
  const auto sv = build_input(InputFamily<double>::squeezed_coherent(0.8, cd(0.9, 0.2)));
  const auto ecs = build_input(InputFamily<double>::cat_coherent(CatParity::even, 1.1, cd(0.3, 0.8)));
  const auto ocs = build_input(InputFamily<double>::cat_coherent(CatParity::odd, 1.1, cd(0.3, 0.8)));
  for (int total = 1; total <= 8; ++total) {
    const auto bs = extract_block(sv, total), be = extract_block(ecs, total), bo = extract_block(ocs, total);
    for (int n = 0; n <= total; ++n) {
      if (n % 2 == 1) CHECK(bs.amps(n) == cd(0));
      if (n % 2 == 1) CHECK(be.amps(n) == cd(0));
      if (n % 2 == 0) CHECK(bo.amps(n) == cd(0));
    }
  }
  // ideal inputs: even mode-b content for N = 0 mod 4, odd for N = 2 mod 4
  for (int total : {4, 8}) {
    const auto b = extract_block(ideal_input<double>(total), total);
    for (int n = 1; n <= total; n += 2) CHECK(b.amps(n) == cd(0));
  }
  for (int total : {2, 6}) {
    const auto b = extract_block(ideal_input<double>(total), total);
    for (int n = 0; n <= total; n += 2) CHECK(b.amps(n) == cd(0));
  }
}

TEST_CASE("postselect result invariants") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_state<double>(5, 5, rng);
    for (int n = 1; n <= 6; ++n) {
      const auto r = postselect(x, n);
      CHECK(r.fidelity >= 0.0);
      CHECK(r.fidelity <= 1.0 + 1e-12);
      CHECK(r.block_probability >= 0.0);
      CHECK(r.block_probability <= 1.0 + 1e-12);
      CHECK(r.overlap_with_ideal <= r.block_probability + 1e-12);
    }
  }
}

TEST_CASE("sv_cs_fidelity examples") {
  // 2x2 block oracle: |0,1> -> (|0,1> + i|1,0>)/sqrt(2) up to sign, so d_0 and d_1 have equal
  // magnitude but a relative phase of i and the fidelity is 1/2
  const oracle::Mat u1 = oracle::two_mode_unitary(kHalf, 1);
  oracle::Vec in = oracle::Vec::Zero(4);
  in(1) = 1;  // |0,1>
  const oracle::Vec out = u1 * in;
  const double ref = std::norm(out(1) + out(2)) / 2;
  CHECK(std::abs(std::abs(out(1)) - std::abs(out(2))) < 1e-15);
  CHECK(std::abs(ref - 0.5) < 1e-12);
  CHECK(std::abs(sv_cs_fidelity(0.0, cd(1.0), 1) - ref) < 1e-12);

  const double tiny = sv_cs_fidelity(1e-4, cd(1e-4), 4);
  CHECK(std::isfinite(tiny));
  CHECK(tiny >= 0.0);
  CHECK(tiny <= 1.0 + 1e-12);

  CHECK_THROWS_AS(sv_cs_fidelity(0.0, cd(0.0), 2), EmptyBlockError);
}

TEST_CASE("sv_cs_fidelity agrees with the full-state route") {
  for (double r : {0.3, 1.0, 1.6})
    for (cd a : {cd(0.5, 0), cd(1.2, 0.4)})
      for (int n = 1; n <= 6; ++n) {
        const auto full = apply_bs(build_input(InputFamily<double>::squeezed_coherent(r, a)), kHalf);
        CHECK(std::abs(sv_cs_fidelity(r, a, n) - noon_fidelity(full, n)) < 1e-10);
      }
}
