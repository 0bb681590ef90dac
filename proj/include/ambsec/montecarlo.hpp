#pragma once
/**
 * @brief Brute-force estimator of every OP and IP.
 *
 * Samples Rayleigh power gains and a Poisson Eve field on the annulus
 * [r_p, R_out], evaluates the instantaneous SINRs and counts events.
 *
 * Trial k draws from its own generator keyed by (seed, k), so the estimate
 * does not depend on batch size or thread count.
 */
#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "ambsec/model.hpp"
#include "ambsec/sinr.hpp"

namespace ambsec::mc {

/// How the BS->BD gain enters each Eve's backscatter term.
///  per_eve: an independent |g_SB|^2 per Eve, matching the independence
///           of Eve SINRs that the PGFL closed forms assume.
///  shared:  one |g_SB|^2 per trial seen by every Eve (one physical channel).
enum class BackscatterGain { per_eve, shared };

inline std::string_view to_string(BackscatterGain b) {
  return b == BackscatterGain::per_eve ? "per_eve" : "shared";
}

inline BackscatterGain backscatter_from_string(std::string_view s) {
  if (s == "per_eve") return BackscatterGain::per_eve;
  if (s == "shared") return BackscatterGain::shared;
  throw std::invalid_argument("unknown backscatter gain mode '" + std::string(s) + "'");
}

struct SimConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  /// Overrides the scenario's placement mode when set.
  std::optional<PlacementMode> placement_mode;
  std::uint64_t batch_size = 10000;
  BackscatterGain backscatter_gain = BackscatterGain::per_eve;
  unsigned threads = 0;  ///< 0: hardware concurrency
};

/// A config for n trials with the batch size capped at n.
inline SimConfig sim_for(std::uint64_t trials, std::uint64_t seed = 1) {
  SimConfig c;
  c.trials = trials;
  c.seed = seed;
  c.batch_size = std::clamp<std::uint64_t>(c.batch_size, 1, std::max<std::uint64_t>(trials, 1));
  return c;
}

inline void check(const SimConfig& c) {
  if (c.trials < 1) throw std::invalid_argument("SimConfig: trials must be >= 1");
  if (c.batch_size < 1 || c.batch_size > c.trials) {
    throw std::invalid_argument("SimConfig: 1 <= batch_size <= trials required");
  }
}

inline constexpr double default_z = 1.959963984540054;

/// Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(std::uint64_t successes,
                                                 std::uint64_t trials,
                                                 double z = default_z) {
  if (trials < 1 || successes > trials) {
    throw std::invalid_argument("wilson_interval: need 0 <= successes <= trials, trials >= 1");
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  double lo = std::max(0.0, center - half);
  double hi = std::min(1.0, center + half);
  if (successes == 0) lo = 0.0;
  if (successes == trials) hi = 1.0;
  return {lo, hi};
}

struct EstimateWithCI {
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double z = default_z;

  static EstimateWithCI from_counts(std::uint64_t successes, std::uint64_t trials,
                                    double z = default_z) {
    const auto [lo, hi] = wilson_interval(successes, trials, z);
    EstimateWithCI e;
    e.successes = successes;
    e.trials = trials;
    e.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
    e.ci_lo = std::min(lo, e.p_hat);
    e.ci_hi = std::max(hi, e.p_hat);
    e.z = z;
    return e;
  }

  /// Wilson half-width divided by z.
  double standard_error() const { return (ci_hi - ci_lo) / (2.0 * z); }
};

struct OutageEstimate {
  EstimateWithCI p_F, p_N, p_C;
};

struct InterceptEstimate {
  EstimateWithCI p_F, p_N, p_C;
  double mean_eves = 0.0;  ///< average field size over the trials
};

/// SplitMix64; a full-period 64-bit generator cheap enough to key per trial.
class TrialEngine {
 public:
  using result_type = std::uint64_t;

  TrialEngine(std::uint64_t seed, std::uint64_t trial)
      : state_(mix(seed ^ mix(trial + 0x632BE59BD9B4E019ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

template <class Rng>
double unit_exponential(Rng& rng) {
  return std::exponential_distribution<double>(1.0)(rng);
}

/// Five independent unit-mean exponential power gains.
template <class Rng>
sinr::LegitGains sample_legit_gains(Rng& rng) {
  sinr::LegitGains g;
  g.gSN2 = unit_exponential(rng);
  g.gSF2 = unit_exponential(rng);
  g.gSB2 = unit_exponential(rng);
  g.gBN2 = unit_exponential(rng);
  g.gBF2 = unit_exponential(rng);
  return g;
}

/// Poisson field on the annulus [r_p, R_out] with unit-mean exponential gains.
/// The BD sits at (d_SB, 0); in collapsed mode d_BV is set to d_SV.
template <class Rng>
void sample_eve_field(Rng& rng, const EveField& eves, const Geometry& g,
                      PlacementMode mode, std::vector<sinr::EveGains>& out) {
  out.clear();
  if (eves.lambda_e == 0.0) return;
  const double r2_lo = g.r_p * g.r_p;
  const double r2_span = g.R_out * g.R_out - r2_lo;
  const double mean = eves.lambda_e * std::numbers::pi * r2_span;
  const auto count = std::poisson_distribution<std::uint64_t>(mean)(rng);
  out.reserve(count);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint64_t k = 0; k < count; ++k) {
    sinr::EveGains e;
    e.d_SV = std::sqrt(r2_lo + unit(rng) * r2_span);
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    if (mode == PlacementMode::collapsed) {
      e.d_BV = e.d_SV;
    } else {
      const double dx = e.d_SV * std::cos(phi) - g.d_SB;
      const double dy = e.d_SV * std::sin(phi);
      e.d_BV = std::hypot(dx, dy);
    }
    e.gSV2 = unit_exponential(rng);
    e.gBV2 = unit_exponential(rng);
    out.push_back(e);
  }
}

template <class Rng>
std::vector<sinr::EveGains> sample_eve_field(Rng& rng, const EveField& eves,
                                             const Geometry& g, PlacementMode mode) {
  std::vector<sinr::EveGains> out;
  sample_eve_field(rng, eves, g, mode, out);
  return out;
}

namespace detail {

/// Runs body(first, last, counts) over batches of trial indices on `threads`
/// workers; counts are summed per slot.
template <std::size_t Slots, class Body>
std::array<std::uint64_t, Slots> run_batched(const SimConfig& sim, Body body) {
  check(sim);
  const std::uint64_t batches = (sim.trials + sim.batch_size - 1) / sim.batch_size;
  unsigned workers = sim.threads ? sim.threads : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, batches));

  std::vector<std::array<std::uint64_t, Slots>> per_batch(batches);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t b = next++; b < batches; b = next++) {
      const std::uint64_t first = b * sim.batch_size;
      const std::uint64_t last = std::min(sim.trials, first + sim.batch_size);
      per_batch[b] = {};
      body(first, last, per_batch[b]);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
  }
  std::array<std::uint64_t, Slots> total{};
  for (const auto& c : per_batch) {
    for (std::size_t i = 0; i < Slots; ++i) total[i] += c[i];
  }
  return total;
}

}  // namespace detail

/// OP by event counting. Outage of U_N: s_F or s_N undecodable; outage of the
/// BD: U_N in outage or s_C undecodable.
inline OutageEstimate estimate_op(const Scenario& s, const SimConfig& sim) {
  const auto& p = s.params;
  const auto& g = s.geometry;
  const auto& th = s.thresholds;
  const auto counts = detail::run_batched<3>(
      sim, [&](std::uint64_t first, std::uint64_t last, std::array<std::uint64_t, 3>& c) {
        for (std::uint64_t k = first; k < last; ++k) {
          TrialEngine rng(sim.seed, k);
          const auto h = sample_legit_gains(rng);
          const bool out_f = sinr::uf_sf(p, g, h) <= th.g_F_sF;
          const bool out_n = !(sinr::un_sf(p, g, h) >= th.g_N_sF &&
                               sinr::un_sn(p, g, h) >= th.g_N_sN);
          const bool out_c = out_n || !(sinr::un_sc(p, g, h) >= th.g_N_sC);
          c[0] += out_f;
          c[1] += out_n;
          c[2] += out_c;
        }
      });
  return {EstimateWithCI::from_counts(counts[0], sim.trials),
          EstimateWithCI::from_counts(counts[1], sim.trials),
          EstimateWithCI::from_counts(counts[2], sim.trials)};
}

/// IP by event counting: a signal is intercepted when the best Eve's SINR
/// exceeds its secrecy threshold. A fresh field is drawn every trial.
inline InterceptEstimate estimate_ip(const Scenario& s, const SimConfig& sim) {
  const auto& p = s.params;
  const auto& g = s.geometry;
  const auto& th = s.thresholds;
  const PlacementMode mode = sim.placement_mode.value_or(s.eves.placement_mode);
  const bool shared = sim.backscatter_gain == BackscatterGain::shared;
  const auto counts = detail::run_batched<4>(
      sim, [&](std::uint64_t first, std::uint64_t last, std::array<std::uint64_t, 4>& c) {
        std::vector<sinr::EveGains> field;
        for (std::uint64_t k = first; k < last; ++k) {
          TrialEngine rng(sim.seed, k);
          const double trial_gSB2 = unit_exponential(rng);
          sample_eve_field(rng, s.eves, g, mode, field);
          double best_f = 0.0, best_n = 0.0, best_c = 0.0;
          for (const auto& e : field) {
            const double gSB2 = shared ? trial_gSB2 : unit_exponential(rng);
            best_f = std::max(best_f, sinr::eve_sf(p, g, gSB2, e, mode));
            best_n = std::max(best_n, sinr::eve_sn(p, g, gSB2, e, mode));
            best_c = std::max(best_c, sinr::eve_sc(p, g, gSB2, e, mode));
          }
          if (!field.empty()) {
            c[0] += best_f > th.g_E_sF;
            c[1] += best_n > th.g_E_sN;
            c[2] += best_c > th.g_E_sC;
          }
          c[3] += field.size();
        }
      });
  InterceptEstimate out{EstimateWithCI::from_counts(counts[0], sim.trials),
                        EstimateWithCI::from_counts(counts[1], sim.trials),
                        EstimateWithCI::from_counts(counts[2], sim.trials)};
  out.mean_eves = static_cast<double>(counts[3]) / static_cast<double>(sim.trials);
  return out;
}

}  // namespace ambsec::mc
