#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pxy/core.hpp"
#include "pxy/estimators.hpp"
#include "pxy/normal.hpp"
#include "pxy/parallel.hpp"
#include "pxy/rng.hpp"

namespace pxy {

enum class ResamplingScheme {
  PairedResample,       ///< draw couples with replacement, pairing kept
  IndependentResample,  ///< draw x-indices and y-indices independently
};

inline std::string_view scheme_name(ResamplingScheme s) {
  return s == ResamplingScheme::PairedResample ? "paired" : "independent";
}

/// Independent resampling only makes sense for estimators built on the two
/// marginal samples.
inline bool scheme_compatible(Method m, ResamplingScheme s) {
  return s == ResamplingScheme::PairedResample || m == Method::Independent ||
         m == Method::Paired;
}

/// Scheme used when the caller does not choose: the independence baseline is
/// resampled as two unpaired samples, everything else by couples.
inline ResamplingScheme default_scheme(Method m) {
  return m == Method::Independent ? ResamplingScheme::IndependentResample
                                  : ResamplingScheme::PairedResample;
}

struct BootstrapResult {
  ThetaEstimate point;
  std::vector<double> replicates;
  ResamplingScheme scheme;
  Seed seed;
};

struct BootstrapOptions {
  std::size_t replicates = 2000;
  Seed seed{};
  unsigned threads = 0;  ///< 0: hardware concurrency
  std::size_t max_retries = 100;
};

/// Default resampler: n draws with replacement from the stream.
struct RandomResampler {
  PairedSample operator()(const PairedSample& s, ResamplingScheme scheme, RngStream& rng) const {
    const std::size_t n = s.size();
    std::vector<Pair> out(n);
    if (scheme == ResamplingScheme::PairedResample) {
      for (auto& p : out) p = s[rng.below(n)];
    } else {
      for (auto& p : out) p.x = s[rng.below(n)].x;
      for (auto& p : out) p.y = s[rng.below(n)].y;
    }
    return PairedSample(std::move(out));
  }
};

/// Nonparametric bootstrap of an arbitrary statistic.
///
/// Replicate r is computed from stream r of the seed. A resample on which the
/// statistic throws a DataError (for instance all differences tied) is
/// redrawn from stream r + k * B on attempt k, up to max_retries times. The
/// result depends only on (data, statistic, scheme, B, seed), never on the
/// number of threads.
template <class Statistic, class Resampler = RandomResampler>
  requires std::invocable<Statistic&, const PairedSample&>
BootstrapResult run_bootstrap(const PairedSample& data, Statistic&& statistic,
                              ResamplingScheme scheme, const BootstrapOptions& opt,
                              Resampler&& resample = {}) {
  if (opt.replicates == 0) throw DomainError("bootstrap needs at least one replicate");
  const ThetaEstimate point = statistic(data);
  const std::size_t B = opt.replicates;
  std::vector<double> reps(B);

  parallel_for(B, opt.threads, [&](std::size_t r) {
    for (std::size_t attempt = 0;; ++attempt) {
      RngStream rng(opt.seed, static_cast<std::uint64_t>(r + attempt * B));
      try {
        const PairedSample sample = resample(data, scheme, rng);
        reps[r] = statistic(sample).value;
        return;
      } catch (const DataError& e) {
        if (attempt >= opt.max_retries)
          throw NumericalError("bootstrap replicate " + std::to_string(r) + " failed after " +
                               std::to_string(opt.max_retries) + " redraws: " + e.what());
      }
    }
  });
  return {point, std::move(reps), scheme, opt.seed};
}

inline BootstrapResult run_bootstrap(const PairedSample& data, const EstimatorSpec& spec,
                                     ResamplingScheme scheme, const BootstrapOptions& opt) {
  spec.validate();
  if (!scheme_compatible(spec.method, scheme))
    throw DomainError("independent resampling requires a marginal-sample estimator");
  return run_bootstrap(
      data, [&spec](const PairedSample& s) { return estimate(spec, s); }, scheme, opt);
}

/// Leave-one-couple-out estimates.
template <class Statistic>
  requires std::invocable<Statistic&, const PairedSample&>
std::vector<double> jackknife(const PairedSample& data, Statistic&& statistic,
                              unsigned threads = 1) {
  const std::size_t n = data.size();
  if (n < 3) throw InsufficientData("jackknife needs at least 3 couples");
  std::vector<double> out(n);
  parallel_for(n, threads, [&](std::size_t i) {
    std::vector<std::size_t> idx;
    idx.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) idx.push_back(j);
    }
    out[i] = statistic(data.select(idx)).value;
  });
  return out;
}

inline std::vector<double> jackknife(const PairedSample& data, const EstimatorSpec& spec,
                                     unsigned threads = 1) {
  return jackknife(
      data, [&spec](const PairedSample& s) { return estimate(spec, s); }, threads);
}

// ---------------------------------------------------------------------------
// Confidence intervals.
// ---------------------------------------------------------------------------

enum class CiKind { Normal, Basic, Percentile, BCa };

inline std::string_view ci_kind_name(CiKind k) {
  switch (k) {
    case CiKind::Normal: return "normal";
    case CiKind::Basic: return "basic";
    case CiKind::Percentile: return "percentile";
    case CiKind::BCa: return "bca";
  }
  return "?";
}

struct ConfidenceInterval {
  double lo;
  double hi;
  CiKind kind;
  double level;
  bool exits_unit_interval = false;     ///< an endpoint lies outside [0,1] (reported unclipped)
  bool zero_jackknife_variance = false; ///< BCa only: acceleration forced to 0

  double clipped_lo() const { return std::clamp(lo, 0.0, 1.0); }
  double clipped_hi() const { return std::clamp(hi, 0.0, 1.0); }
};

/// Sample quantile by linear interpolation between order statistics
/// (h = (B - 1) p on the zero-based sorted vector; "type 7").
inline double quantile_type7(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InsufficientData("quantile of empty sample");
  p = std::clamp(p, 0.0, 1.0);
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

namespace detail {

inline double alpha_of(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0,1)");
  return 1.0 - level;
}

inline std::vector<double> sorted_replicates(const BootstrapResult& r) {
  std::vector<double> v = r.replicates;
  std::sort(v.begin(), v.end());
  return v;
}

inline ConfidenceInterval make_ci(double lo, double hi, CiKind kind, double level) {
  ConfidenceInterval ci{lo, hi, kind, level};
  ci.exits_unit_interval = lo < 0.0 || hi > 1.0;
  return ci;
}

}  // namespace detail

/// Bias-corrected normal interval: (2 t - mean(t*)) -/+ z_{1-a/2} sd(t*).
inline ConfidenceInterval ci_normal(const BootstrapResult& r, double level) {
  const double alpha = detail::alpha_of(level);
  if (r.replicates.size() < 2) throw InsufficientData("normal interval needs B >= 2");
  const double centre = 2.0 * r.point.value - sample_mean(r.replicates);
  const double half = normal_quantile(1.0 - alpha / 2.0) * sample_sd(r.replicates);
  return detail::make_ci(centre - half, centre + half, CiKind::Normal, level);
}

inline ConfidenceInterval ci_basic(const BootstrapResult& r, double level) {
  const double alpha = detail::alpha_of(level);
  const auto s = detail::sorted_replicates(r);
  const double t = r.point.value;
  return detail::make_ci(2.0 * t - quantile_type7(s, 1.0 - alpha / 2.0),
                         2.0 * t - quantile_type7(s, alpha / 2.0), CiKind::Basic, level);
}

inline ConfidenceInterval ci_percentile(const BootstrapResult& r, double level) {
  const double alpha = detail::alpha_of(level);
  const auto s = detail::sorted_replicates(r);
  return detail::make_ci(quantile_type7(s, alpha / 2.0), quantile_type7(s, 1.0 - alpha / 2.0),
                         CiKind::Percentile, level);
}

/// Bias-correction constant z0 = Phi^-1(#{t*_r < t} / B).
inline double bca_bias_correction(const BootstrapResult& r) {
  std::size_t below = 0;
  for (double v : r.replicates) below += (v < r.point.value) ? 1 : 0;
  if (below == 0 || below == r.replicates.size())
    throw NumericalError("BCa undefined: all bootstrap replicates lie on one side of the "
                         "point estimate; increase B");
  return normal_quantile(static_cast<double>(below) / static_cast<double>(r.replicates.size()));
}

/// Acceleration from jackknife skewness; nullopt when the jackknife values
/// have zero spread.
inline std::optional<double> bca_acceleration(std::span<const double> jack) {
  const double mean = sample_mean(jack);
  double s2 = 0.0, s3 = 0.0;
  for (double v : jack) {
    const double d = mean - v;
    s2 += d * d;
    s3 += d * d * d;
  }
  if (!(s2 > 0.0)) return std::nullopt;
  return s3 / (6.0 * std::pow(s2, 1.5));
}

inline ConfidenceInterval ci_bca(const BootstrapResult& r, std::span<const double> jack,
                                 double level) {
  const double alpha = detail::alpha_of(level);
  if (jack.size() < 3) throw InsufficientData("BCa needs at least 3 jackknife values");
  const double z0 = bca_bias_correction(r);
  const auto accel = bca_acceleration(jack);
  const double a = accel.value_or(0.0);
  const auto s = detail::sorted_replicates(r);

  auto adjusted = [&](double p) {
    const double zp = normal_quantile(p);
    const double w = z0 + zp;
    return normal_cdf(z0 + w / (1.0 - a * w));
  };
  auto ci = detail::make_ci(quantile_type7(s, adjusted(alpha / 2.0)),
                            quantile_type7(s, adjusted(1.0 - alpha / 2.0)), CiKind::BCa, level);
  ci.zero_jackknife_variance = !accel.has_value();
  return ci;
}

}  // namespace pxy
