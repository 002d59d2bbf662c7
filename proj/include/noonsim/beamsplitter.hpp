// Lossless beam splitter U(gamma) = exp(gamma a b^dag - conj(gamma) a^dag b).
//
// The generator conserves n_a + n_b, so U acts independently on each
// total-photon-number block, basis |n, N-n>, n = 0..N. Two implementations:
//
//  * DirectBeamSplitter exponentiates each (N+1)x(N+1) block generator. It is
//    the reference used to validate everything else.
//  * DisentangledBeamSplitter uses the SU(2) factorization
//      U^dag(gamma) = exp(p a^dag b) exp[q s (n_a - n_b)] exp(r a b^dag)
//    (or the mirrored ordering). a^dag b and a b^dag are nilpotent inside a
//    block, so each factor is a finite triangular matrix.
//
// The sign/phase/scale convention of the factorization is not taken on
// trust: run_convention_self_test() tries a set of candidates against the
// block exponential and the first one that agrees is used.
#pragma once

#include "noonsim/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace noonsim {

template <typename Real>
using BlockMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// gamma = i pi/4, the symmetric 50-50 splitter.
template <typename Real = double>
constexpr std::complex<Real> fifty_fifty() {
  return {Real(0), std::numbers::pi_v<Real> / 4};
}

template <typename Real>
BlockMatrix<Real> block_generator(int total_n, std::complex<Real> gamma) {
  BlockMatrix<Real> g = BlockMatrix<Real>::Zero(total_n + 1, total_n + 1);
  for (int n = 0; n <= total_n; ++n) {
    const int m = total_n - n;
    if (n > 0) g(n - 1, n) += gamma * std::sqrt(Real(n) * Real(m + 1));             // a b^dag
    if (m > 0) g(n + 1, n) -= std::conj(gamma) * std::sqrt(Real(n + 1) * Real(m));  // a^dag b
  }
  return g;
}

template <typename Real>
BlockMatrix<Real> block_unitary(int total_n, std::complex<Real> gamma) {
  return block_generator(total_n, gamma).exp();
}

namespace detail {

// Applies a per-block map to every occupied block of x. The output grid is
// square with cutoff max(n_max_a, n_max_b, top block), so every output
// amplitude has a slot.
template <typename Real, typename BlockMap>
BipartiteState<Real> map_blocks(const BipartiteState<Real>& x, BlockMap&& map) {
  const int top = highest_occupied_block(x);
  const int cutoff = std::max({x.n_max_a(), x.n_max_b(), top});
  AmplitudeGrid<Real> out = AmplitudeGrid<Real>::Zero(cutoff + 1, cutoff + 1);
  for (int total = 0; total <= top; ++total) {
    const BlockVector<Real> block = extract_block(x, total);
    if (block.weight == Real(0)) continue;
    const AmplitudeVector<Real> y = map(block);
    for (int n = 0; n <= total; ++n) out(n, total - n) = y(n);
  }
  return BipartiteState<Real>(std::move(out), x.tail_bound());
}

template <typename Real>
std::vector<Real> log_factorial_table(int n_max) {
  std::vector<Real> t(n_max + 1);
  for (int n = 0; n <= n_max; ++n) t[n] = log_factorial<Real>(n);
  return t;
}

}  // namespace detail

template <typename Real>
class DirectBeamSplitter {
 public:
  DirectBeamSplitter(std::complex<Real> gamma, int max_block) : gamma_(gamma) {
    blocks_.reserve(max_block + 1);
    for (int total = 0; total <= max_block; ++total) blocks_.push_back(block_unitary(total, gamma));
  }

  std::complex<Real> gamma() const { return gamma_; }
  int max_block() const { return static_cast<int>(blocks_.size()) - 1; }
  const BlockMatrix<Real>& block(int total_n) const { return blocks_.at(total_n); }

  BlockVector<Real> apply(const BlockVector<Real>& x) const {
    return make_block<Real>(x.total_n, block(x.total_n) * x.amps);
  }

  BipartiteState<Real> apply(const BipartiteState<Real>& x) const {
    return detail::map_blocks(x, [&](const BlockVector<Real>& b) -> AmplitudeVector<Real> {
      return block(b.total_n) * b.amps;
    });
  }

 private:
  std::complex<Real> gamma_;
  std::vector<BlockMatrix<Real>> blocks_;
};

template <typename Real>
BipartiteState<Real> apply_direct(const BipartiteState<Real>& x, std::complex<Real> gamma) {
  return DirectBeamSplitter<Real>(gamma, std::max(highest_occupied_block(x), 0)).apply(x);
}

// ---------------------------------------------------------------------------
// Disentangled form

enum class FactorOrder {
  raising_first,   // exp(p a^dag b) exp[q s (n_a - n_b)] exp(r a b^dag)
  lowering_first,  // exp(p a b^dag) exp[q s (n_b - n_a)] exp(r a^dag b)
};

/// How p, q, r are read off gamma = |gamma| exp(-i theta):
///   p = sign * u * tan|gamma|, u = exp(-i theta) or its conjugate,
///   q = 2 log sec|gamma|,
///   r = -p or -conj(p),
/// and the middle exponent is scaled by middle_scale.
/// The default-constructed value is the factorization read literally.
struct DisentanglingConvention {
  FactorOrder order = FactorOrder::raising_first;
  bool conjugate_phase = false;
  int sign = 1;
  bool conjugate_r = false;
  double middle_scale = 1.0;

  bool operator==(const DisentanglingConvention&) const = default;
};

inline std::string describe(const DisentanglingConvention& c) {
  std::ostringstream os;
  os << (c.order == FactorOrder::raising_first ? "exp(p a+b) exp(q s (na-nb)) exp(r ab+)"
                                               : "exp(p ab+) exp(q s (nb-na)) exp(r a+b)")
     << ", p = " << (c.sign < 0 ? "-" : "") << (c.conjugate_phase ? "exp(+i theta)" : "exp(-i theta)")
     << " tan|g|, r = " << (c.conjugate_r ? "-conj(p)" : "-p") << ", s = " << c.middle_scale;
  return os.str();
}

/// Literal reading first, then every combination of the five choices.
inline std::vector<DisentanglingConvention> candidate_conventions() {
  std::vector<DisentanglingConvention> out;
  for (FactorOrder order : {FactorOrder::raising_first, FactorOrder::lowering_first})
    for (double scale : {1.0, 0.5})
      for (bool conj_r : {false, true})
        for (bool conj_phase : {false, true})
          for (int sign : {1, -1}) out.push_back({order, conj_phase, sign, conj_r, scale});
  return out;
}

template <typename Real>
struct BeamSplitterConfig {
  std::complex<Real> gamma;
  std::complex<Real> p;
  Real q = 0;
  std::complex<Real> r;
  DisentanglingConvention convention;
  bool convention_valid = false;
};

struct ConventionCheck {
  DisentanglingConvention convention;
  double max_deviation = 0;
};

struct ConventionSelfTest {
  std::vector<ConventionCheck> checks;
  std::optional<DisentanglingConvention> selected;
};

inline ConventionSelfTest run_convention_self_test(double tolerance = 1e-12);

/// The convention selected by the self-test, computed once.
inline const std::optional<DisentanglingConvention>& validated_convention() {
  static const std::optional<DisentanglingConvention> selected = run_convention_self_test().selected;
  return selected;
}

namespace detail {

template <typename Real>
BeamSplitterConfig<Real> disentangle_unchecked(std::complex<Real> gamma, const DisentanglingConvention& convention) {
  const Real mag = std::abs(gamma);
  if (!(mag < std::numbers::pi_v<Real> / 2))
    throw std::domain_error("disentangled form needs |gamma| < pi/2");
  std::complex<Real> unit = mag > Real(0) ? gamma / mag : std::complex<Real>(1);
  if (convention.conjugate_phase) unit = std::conj(unit);
  BeamSplitterConfig<Real> cfg;
  cfg.gamma = gamma;
  cfg.p = Real(convention.sign) * unit * std::tan(mag);
  cfg.q = -2 * std::log(std::cos(mag));
  cfg.r = convention.conjugate_r ? -std::conj(cfg.p) : -cfg.p;
  cfg.convention = convention;
  return cfg;
}

}  // namespace detail

/// Parameters of the factorization of U^dag(gamma) under an explicit convention.
template <typename Real>
BeamSplitterConfig<Real> disentangle(std::complex<Real> gamma, const DisentanglingConvention& convention) {
  auto cfg = detail::disentangle_unchecked(gamma, convention);
  const auto& valid = validated_convention();
  cfg.convention_valid = valid.has_value() && *valid == convention;
  return cfg;
}

template <typename Real>
BeamSplitterConfig<Real> disentangle(std::complex<Real> gamma) {
  const auto& valid = validated_convention();
  if (!valid) throw std::logic_error("no disentangling convention agrees with the block exponential");
  return disentangle(gamma, *valid);
}

/// exp(coef a^dag b) on block N: |n, N-n> -> |n+k, N-n-k>.
template <typename Real>
BlockMatrix<Real> raising_factor(int total_n, std::complex<Real> coef, const std::vector<Real>& lf) {
  BlockMatrix<Real> m = BlockMatrix<Real>::Zero(total_n + 1, total_n + 1);
  for (int n = 0; n <= total_n; ++n) {
    std::complex<Real> power(1);
    for (int k = 0; n + k <= total_n; ++k, power *= coef) {
      if (power == std::complex<Real>{}) break;
      m(n + k, n) = power * std::exp(((lf[n + k] - lf[n]) + (lf[total_n - n] - lf[total_n - n - k])) / 2 - lf[k]);
    }
  }
  return m;
}

/// exp(coef a b^dag) on block N: |n, N-n> -> |n-k, N-n+k>.
template <typename Real>
BlockMatrix<Real> lowering_factor(int total_n, std::complex<Real> coef, const std::vector<Real>& lf) {
  BlockMatrix<Real> m = BlockMatrix<Real>::Zero(total_n + 1, total_n + 1);
  for (int n = 0; n <= total_n; ++n) {
    std::complex<Real> power(1);
    for (int k = 0; k <= n; ++k, power *= coef) {
      if (power == std::complex<Real>{}) break;
      m(n - k, n) = power * std::exp(((lf[n] - lf[n - k]) + (lf[total_n - n + k] - lf[total_n - n])) / 2 - lf[k]);
    }
  }
  return m;
}

/// The three factors of the disentangled product on block N, rightmost first
/// in application order: x -> left * (middle .* (right * x)).
template <typename Real>
struct DisentangledFactors {
  BlockMatrix<Real> left;
  AmplitudeVector<Real> middle;
  BlockMatrix<Real> right;

  AmplitudeVector<Real> apply(const AmplitudeVector<Real>& x) const {
    return left * middle.cwiseProduct(right * x);
  }
  BlockMatrix<Real> product() const { return left * middle.asDiagonal() * right; }
};

template <typename Real>
DisentangledFactors<Real> disentangled_factors(int total_n, const BeamSplitterConfig<Real>& cfg,
                                               const std::vector<Real>& lf) {
  const bool raising = cfg.convention.order == FactorOrder::raising_first;
  const Real scale = static_cast<Real>(cfg.convention.middle_scale);
  DisentangledFactors<Real> f;
  f.middle.resize(total_n + 1);
  for (int n = 0; n <= total_n; ++n) {
    const Real imbalance = raising ? Real(2 * n - total_n) : Real(total_n - 2 * n);
    f.middle(n) = std::exp(cfg.q * scale * imbalance);
  }
  f.left = raising ? raising_factor(total_n, cfg.p, lf) : lowering_factor(total_n, cfg.p, lf);
  f.right = raising ? lowering_factor(total_n, cfg.r, lf) : raising_factor(total_n, cfg.r, lf);
  return f;
}

/// Sub-steps used on block N. The single product for a large block loses
/// roughly 2^(1.3 N) in relative precision at |gamma| = pi/4, so U is
/// applied as m copies of the product for gamma/m.
inline int disentangled_steps(double gamma_mag, int total_n) {
  const int by_size = static_cast<int>(std::ceil(gamma_mag * total_n / 4.0));
  const int by_domain = static_cast<int>(std::ceil(gamma_mag / (std::numbers::pi / 4)));
  return std::max({1, by_size, by_domain});
}

template <typename Real>
class DisentangledBeamSplitter {
 public:
  /// dagger = false applies U(gamma) = U^dag(-gamma), dagger = true applies U^dag(gamma).
  DisentangledBeamSplitter(std::complex<Real> gamma, bool dagger, int max_block,
                           std::optional<DisentanglingConvention> convention = std::nullopt)
      : gamma_(gamma), dagger_(dagger) {
    const DisentanglingConvention conv = convention ? *convention : require_validated();
    const std::complex<Real> h = dagger ? gamma : -gamma;
    const auto lf = detail::log_factorial_table<Real>(std::max(max_block, 0) + 1);
    blocks_.reserve(max_block + 1);
    for (int total = 0; total <= max_block; ++total) {
      const int steps = disentangled_steps(static_cast<double>(std::abs(h)), total);
      const auto cfg = detail::disentangle_unchecked(h / Real(steps), conv);
      blocks_.push_back({disentangled_factors(total, cfg, lf), steps});
    }
  }

  std::complex<Real> gamma() const { return gamma_; }
  bool dagger() const { return dagger_; }
  int max_block() const { return static_cast<int>(blocks_.size()) - 1; }
  int steps(int total_n) const { return blocks_.at(total_n).steps; }

  AmplitudeVector<Real> apply(int total_n, AmplitudeVector<Real> x) const {
    const Block& b = blocks_.at(total_n);
    for (int s = 0; s < b.steps; ++s) x = b.factors.apply(x);
    return x;
  }

  BlockVector<Real> apply(const BlockVector<Real>& x) const {
    return make_block<Real>(x.total_n, apply(x.total_n, x.amps));
  }

  BipartiteState<Real> apply(const BipartiteState<Real>& x) const {
    return detail::map_blocks(x, [&](const BlockVector<Real>& b) { return apply(b.total_n, b.amps); });
  }

 private:
  struct Block {
    DisentangledFactors<Real> factors;
    int steps = 1;
  };

  static DisentanglingConvention require_validated() {
    const auto& valid = validated_convention();
    if (!valid) throw std::logic_error("no disentangling convention agrees with the block exponential");
    return *valid;
  }

  std::complex<Real> gamma_;
  bool dagger_;
  std::vector<Block> blocks_;
};

template <typename Real>
BipartiteState<Real> apply_disentangled(const BipartiteState<Real>& x, std::complex<Real> gamma, bool dagger) {
  return DisentangledBeamSplitter<Real>(gamma, dagger, std::max(highest_occupied_block(x), 0)).apply(x);
}

/// Production route: U(gamma) via the disentangled form.
template <typename Real>
BipartiteState<Real> apply_bs(const BipartiteState<Real>& x, std::complex<Real> gamma) {
  return apply_disentangled(x, gamma, false);
}

inline ConventionSelfTest run_convention_self_test(double tolerance) {
  const std::complex<double> probes[] = {fifty_fifty<double>(), {std::numbers::pi / 4, 0.0},
                                         std::polar(0.3, 0.7), std::polar(0.5, -1.1)};
  constexpr int kMaxProbeBlock = 4;
  const auto lf = detail::log_factorial_table<double>(kMaxProbeBlock + 1);
  ConventionSelfTest result;
  for (const auto& candidate : candidate_conventions()) {
    double worst = 0;
    for (const auto& gamma : probes) {
      const auto cfg = detail::disentangle_unchecked(gamma, candidate);
      for (int total = 1; total <= kMaxProbeBlock; ++total) {
        // U^dag(gamma) = U(-gamma)
        const BlockMatrix<double> diff =
            disentangled_factors(total, cfg, lf).product() - block_unitary(total, -gamma);
        worst = std::max(worst, diff.cwiseAbs().maxCoeff());
      }
    }
    result.checks.push_back({candidate, worst});
    if (!result.selected && worst < tolerance) result.selected = candidate;
  }
  return result;
}

struct UnitarityReport {
  double norm_deviation = 0;            // | ||U e|| - 1 |
  double identity_deviation = 0;        // || U^dag U e - e ||
  double block_deviation = 0;           // weight leaving the block of e
  double implementation_deviation = 0;  // || U_direct e - U_disentangled e ||

  double max_deviation() const {
    return std::max({norm_deviation, identity_deviation, block_deviation, implementation_deviation});
  }
};

/// Checks both implementations on every basis state |n, m>, n, m <= n_max.
template <typename Real = double>
UnitarityReport verify_unitary(std::complex<Real> gamma, int n_max,
                               std::optional<DisentanglingConvention> convention = std::nullopt) {
  const int top = 2 * n_max;
  const DirectBeamSplitter<Real> forward(gamma, top);
  const DirectBeamSplitter<Real> backward(-gamma, top);
  const DisentangledBeamSplitter<Real> forward_d(gamma, false, top, convention);
  const DisentangledBeamSplitter<Real> backward_d(gamma, true, top, convention);
  UnitarityReport rep;
  auto upd = [](double& slot, Real v) { slot = std::max(slot, static_cast<double>(v)); };
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= n_max; ++m) {
      AmplitudeGrid<Real> grid = AmplitudeGrid<Real>::Zero(n_max + 1, n_max + 1);
      grid(n, m) = 1;
      const BipartiteState<Real> e(std::move(grid));
      const auto u = forward.apply(e);
      const auto ud = forward_d.apply(e);
      upd(rep.norm_deviation, std::abs(norm(u) - Real(1)));
      upd(rep.norm_deviation, std::abs(norm(ud) - Real(1)));
      upd(rep.identity_deviation, distance(backward_d.apply(u), e));
      upd(rep.identity_deviation, distance(backward.apply(ud), e));
      upd(rep.block_deviation, std::abs(extract_block(u, n + m).weight - Real(1)));
      upd(rep.block_deviation, std::abs(extract_block(ud, n + m).weight - Real(1)));
      upd(rep.implementation_deviation, distance(u, ud));
    }
  }
  return rep;
}

}  // namespace noonsim
