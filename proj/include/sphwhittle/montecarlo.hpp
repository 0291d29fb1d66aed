#ifndef SPHWHITTLE_MONTECARLO_HPP
#define SPHWHITTLE_MONTECARLO_HPP

/// Seeded replication engine: sample a spectrum per replication, estimate
/// the spectral index over the configured band, normalize the error and
/// summarize the resulting distribution.
///
/// Replication i always draws from SeedSpec{master_seed, i}, and results are
/// stored by index, so reports do not depend on the number of workers.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "sphwhittle/error.hpp"
#include "sphwhittle/sampling.hpp"
#include "sphwhittle/spectrum.hpp"
#include "sphwhittle/stats.hpp"
#include "sphwhittle/whittle.hpp"

namespace sphwhittle {

namespace band_rule {
struct Full {};
struct NarrowExplicit {
  std::size_t l1;
};
struct NarrowRule {
  double c_g;
};
}  // namespace band_rule

using BandRule = std::variant<band_rule::Full, band_rule::NarrowExplicit, band_rule::NarrowRule>;

inline Band resolve_band(const BandRule& rule, std::size_t L) {
  return std::visit(
      [L](const auto& r) -> Band {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, band_rule::Full>) return Band::full(L);
        else if constexpr (std::is_same_v<T, band_rule::NarrowExplicit>) return narrow_band_explicit(L, r.l1);
        else return narrow_band(L, r.c_g);
      },
      rule);
}

/// Which normalization to apply; concrete factors are filled in from the
/// model, noise and band when the experiment runs.
enum class SchemeKind { fullband, narrowband, noise, rate };

struct SchemeChoice {
  SchemeKind kind = SchemeKind::fullband;
  bool corrected = false;  // fullband only
  bool plugin = false;     // noise only: use (alpha_hat, G_hat) in place of (alpha0, G0)
};

struct ExperimentConfig {
  SpectrumModel model;
  std::optional<NoiseModel> noise;
  std::size_t L;
  BandRule band = band_rule::Full{};
  SearchBox box{};
  SchemeChoice scheme{};
  std::size_t replications = 1000;
  std::uint64_t master_seed = 0;

  void validate() const {
    detail::require(L >= 2, errc::invalid_argument, "L must be at least 2");
    detail::require(replications >= 2, errc::invalid_argument, "need at least two replications");
    detail::require(scheme.kind != SchemeKind::noise || noise.has_value(), errc::invalid_argument,
                    "noise normalization requires a noise model");
    box.validate();
  }
};

inline NormalizationScheme resolve_scheme(const ExperimentConfig& cfg, const Band& band) {
  switch (cfg.scheme.kind) {
    case SchemeKind::fullband:
      return scheme::FullBand{cfg.L, cfg.scheme.corrected};
    case SchemeKind::narrowband:
      return scheme::NarrowBand{cfg.L, band.fraction()};
    case SchemeKind::rate:
      return scheme::Rate{cfg.L};
    case SchemeKind::noise: {
      detail::require(cfg.noise.has_value(), errc::invalid_argument, "noise scheme without noise");
      const auto p = cfg.model.asymptotic_params();
      return scheme::NoiseSub{cfg.L, p.alpha0, cfg.noise->gamma(), p.g0, cfg.noise->g_n()};
    }
  }
  detail::fail(errc::invalid_argument, "unknown scheme");
}

enum class ReplicationStatus { ok, boundary, failed };

inline const char* to_string(ReplicationStatus s) noexcept {
  switch (s) {
    case ReplicationStatus::ok: return "ok";
    case ReplicationStatus::boundary: return "boundary";
    case ReplicationStatus::failed: return "failed";
  }
  return "unknown";
}

struct Replication {
  std::size_t index;
  ReplicationStatus status;
  double alpha_hat;   // NaN when failed
  double g_hat;       // NaN when failed
  double normalized;  // NaN when failed
  std::string error;  // set when failed
};

struct Summary {
  double bias;       // mean of alpha_hat - alpha0
  double variance;   // unbiased sample variance of alpha_hat
  double mse;        // mean of (alpha_hat - alpha0)^2
  std::vector<double> normalized;
};

/// Raw-error summary (bias, variance, MSE of alpha_hat - alpha0) plus the
/// errors multiplied by the scheme's normalization factor.
inline Summary summarize(std::span<const double> alpha_hats, double alpha0, double factor) {
  detail::require(!alpha_hats.empty(), errc::empty_sample, "no estimates to summarize");
  std::vector<double> err(alpha_hats.size()), norm(alpha_hats.size());
  CompensatedSum sq;
  for (std::size_t i = 0; i < err.size(); ++i) {
    err[i] = alpha_hats[i] - alpha0;
    norm[i] = factor * err[i];
    sq += err[i] * err[i];
  }
  const double n = static_cast<double>(err.size());
  const double bias = sample_mean(err);
  const double var = err.size() >= 2 ? sample_variance(alpha_hats) : 0.0;
  return {bias, var, sq.value() / n, std::move(norm)};
}

inline Summary summarize(std::span<const double> alpha_hats, double alpha0,
                         const NormalizationScheme& scheme) {
  return summarize(alpha_hats, alpha0, normalization_factor(scheme));
}

struct MonteCarloReport {
  std::vector<Replication> replications;
  std::vector<double> normalized_errors;  // interior replications, in index order
  std::vector<double> raw_alpha_hats;     // interior replications, in index order
  double mean;                            // of normalized errors
  double variance;                        // of normalized errors, unbiased
  double bias;                            // mean of raw alpha_hat - alpha0
  double raw_variance;                    // unbiased variance of raw alpha_hat
  double mse;
  std::vector<QuantileFrequency> quantile_freqs;
  double sw_w;
  double sw_p;
  std::size_t sw_n;
  std::size_t boundary_hits;  // boundary minima plus failed replications
  std::size_t failures;
  double factor;              // normalization factor; NaN under plug-in normalization
};

inline unsigned default_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1u : hc;
}

/// Runs every replication and returns per-replication records without
/// summarizing; never throws for estimation failures.
inline std::vector<Replication> run_replications(const ExperimentConfig& cfg,
                                                 unsigned threads = default_threads()) {
  cfg.validate();
  const Band band = resolve_band(cfg.band, cfg.L);
  detail::require(band.size() >= 2, errc::degenerate_band, "band needs two multipoles");
  const double alpha0 = cfg.model.asymptotic_params().alpha0;
  std::optional<double> fixed_factor;
  if (!(cfg.scheme.kind == SchemeKind::noise && cfg.scheme.plugin)) {
    fixed_factor = normalization_factor(resolve_scheme(cfg, band));
  }
  if (auto bound = cfg.model.max_multipole()) {
    detail::require(*bound >= cfg.L, errc::out_of_range, "model does not cover 1..L");
  }

  std::vector<Replication> out(cfg.replications);
  auto run_one = [&](std::size_t i) {
    const SeedSpec seed{cfg.master_seed, i};
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    Replication rec{i, ReplicationStatus::failed, nan, nan, nan, {}};
    try {
      const EmpiricalSpectrum spec = cfg.noise
                                         ? sample_observed_debiased(cfg.model, *cfg.noise, cfg.L, seed)
                                         : sample_empirical(cfg.model, cfg.L, seed);
      const EstimateResult est = estimate(spec, band, cfg.box);
      const double factor =
          fixed_factor ? *fixed_factor : normalization_factor(plugin_noise_scheme(est, *cfg.noise));
      rec.status = est.boundary_hit ? ReplicationStatus::boundary : ReplicationStatus::ok;
      rec.alpha_hat = est.alpha_hat;
      rec.g_hat = est.g_hat;
      rec.normalized = factor * (est.alpha_hat - alpha0);
    } catch (const error& e) {
      rec.error = e.what();
    }
    out[i] = std::move(rec);
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cfg.replications)));
  if (threads == 1) {
    for (std::size_t i = 0; i < cfg.replications; ++i) run_one(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> errored{false};
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cfg.replications; i = next++) {
          try {
            run_one(i);
          } catch (...) {
            if (!errored.exchange(true)) first_error = std::current_exception();
            return;
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

/// Sample, estimate and summarize cfg.replications independent spectra.
/// Failed and boundary replications are counted in boundary_hits and kept
/// out of every moment and test statistic.
inline MonteCarloReport summarize_replications(const ExperimentConfig& cfg,
                                               std::vector<Replication> reps) {
  MonteCarloReport r{};
  r.replications = std::move(reps);
  std::vector<double> factors;
  for (const auto& rep : r.replications) {
    if (rep.status == ReplicationStatus::failed) ++r.failures;
    if (rep.status != ReplicationStatus::ok) {
      ++r.boundary_hits;
      continue;
    }
    r.raw_alpha_hats.push_back(rep.alpha_hat);
    r.normalized_errors.push_back(rep.normalized);
  }
  if (r.raw_alpha_hats.empty()) {
    detail::fail(errc::all_replications_failed,
                 "no replication produced an interior estimate (" +
                     std::to_string(r.boundary_hits) + " boundary or failed)");
  }
  const double alpha0 = cfg.model.asymptotic_params().alpha0;
  const Summary s = summarize(r.raw_alpha_hats, alpha0, 1.0);
  r.bias = s.bias;
  r.raw_variance = s.variance;
  r.mse = s.mse;
  r.mean = sample_mean(r.normalized_errors);
  r.variance = r.normalized_errors.size() >= 2 ? sample_variance(r.normalized_errors) : 0.0;
  r.factor = std::numeric_limits<double>::quiet_NaN();
  if (!(cfg.scheme.kind == SchemeKind::noise && cfg.scheme.plugin)) {
    r.factor = normalization_factor(resolve_scheme(cfg, resolve_band(cfg.band, cfg.L)));
  }
  r.quantile_freqs = quantile_frequencies(r.normalized_errors, standard_cutpoints());

  const std::size_t sw_n = std::min<std::size_t>(r.normalized_errors.size(), 5000);
  r.sw_n = sw_n;
  r.sw_w = r.sw_p = std::numeric_limits<double>::quiet_NaN();
  if (sw_n >= 3) {
    try {
      const auto sw = shapiro_wilk(std::span<const double>(r.normalized_errors).first(sw_n));
      r.sw_w = sw.w;
      r.sw_p = sw.p;
    } catch (const error&) {
      // degenerate sample: leave NaN
    }
  }
  return r;
}

inline MonteCarloReport run_experiment(const ExperimentConfig& cfg,
                                       unsigned threads = default_threads()) {
  return summarize_replications(cfg, run_replications(cfg, threads));
}

}  // namespace sphwhittle

#endif  // SPHWHITTLE_MONTECARLO_HPP
