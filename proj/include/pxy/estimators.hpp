#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>

#include "pxy/core.hpp"
#include "pxy/kernels.hpp"
#include "pxy/logconcave.hpp"
#include "pxy/normal.hpp"
#include "pxy/rng.hpp"

namespace pxy {

// ---------------------------------------------------------------------------
// Estimators based on the differences z = y - x (theta = 1 - F_Z(0)).
// ---------------------------------------------------------------------------

/// Fraction of strictly positive differences. Zero differences count as
/// "not greater", so swap antisymmetry only holds on tie-free samples.
inline ThetaEstimate theta_ecdf(const DiffSample& z) {
  std::size_t above = 0;
  for (double v : z) above += (v > 0.0) ? 1 : 0;
  return {static_cast<double>(above) / static_cast<double>(z.size()), Method::Ecdf};
}

/// Gaussian-kernel survival estimate at zero, (1/n) sum_j Phi(z_j / h). As h
/// shrinks it tends to theta_ecdf on samples without zero differences.
inline ThetaEstimate theta_kernel_1d(const DiffSample& z, Bandwidth1D h) {
  double sum = 0.0;
  for (double v : z) sum += normal_cdf(v / h.value());
  return {sum / static_cast<double>(z.size()), Method::Kernel1D};
}

inline ThetaEstimate theta_kernel_1d(const DiffSample& z) {
  return theta_kernel_1d(z, cdf_bw(z.values()));
}

inline ThetaEstimate theta_logconcave(const DiffSample& z) {
  const auto fit = fit_logconcave(z);
  return {1.0 - logconcave_cdf(fit, 0.0), Method::Mle1D};
}

inline ThetaEstimate theta_smoothed_logconcave(const DiffSample& z) {
  const auto fit = fit_smoothed(z);
  return {1.0 - smoothed_cdf(fit, 0.0), Method::Smle1D};
}

// ---------------------------------------------------------------------------
// Bivariate kernel estimator: integrate the (x, y) density estimate over x < y.
// ---------------------------------------------------------------------------

/// Closed form for the Gaussian kernel. Each kernel component is N((x_j, y_j), H),
/// and its mass on {u < v} is Phi((y_j - x_j) / sqrt(h11 + h22 - 2 h12)).
inline ThetaEstimate theta_kernel_2d(const PairedSample& s, const BandwidthMatrix2D& H) {
  const double sd = std::sqrt(H.difference_variance());
  if (!(sd > 0.0)) throw DomainError("theta_kernel_2d: bandwidth matrix is not positive definite");
  double sum = 0.0;
  for (const auto& p : s) sum += normal_cdf((p.y - p.x) / sd);
  return {sum / static_cast<double>(s.size()), Method::Kernel2D};
}

inline ThetaEstimate theta_kernel_2d(const PairedSample& s) {
  return theta_kernel_2d(s, diagonal_bw_2d(s));
}

/// Monte Carlo version of theta_kernel_2d: m draws from the kernel mixture,
/// fraction landing in {u < v}.
inline ThetaEstimate theta_kernel_2d_mc(const PairedSample& s, const BandwidthMatrix2D& H,
                                        std::size_t m, RngStream& rng) {
  if (m == 0) throw DomainError("theta_kernel_2d_mc: need at least one draw");
  const double l11 = std::sqrt(H.h11());
  const double l21 = H.h12() / l11;
  const double l22 = std::sqrt(H.h22() - l21 * l21);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const auto& p = s[rng.below(s.size())];
    const double n1 = rng.normal();
    const double n2 = rng.normal();
    const double u = p.x + l11 * n1;
    const double v = p.y + l21 * n1 + l22 * n2;
    hits += (u < v) ? 1 : 0;
  }
  return {static_cast<double>(hits) / static_cast<double>(m), Method::Kernel2D};
}

// ---------------------------------------------------------------------------
// Independence baseline: product of two univariate KDEs.
// ---------------------------------------------------------------------------

/// theta* = (1 / (nx ny)) sum_i sum_j Phi((y_j - x_i) / sqrt(hx^2 + hy^2)).
inline ThetaEstimate theta_independent(std::span<const double> xs, std::span<const double> ys,
                                       Bandwidth1D hx, Bandwidth1D hy) {
  if (xs.size() < 2 || ys.size() < 2)
    throw InsufficientData("theta_independent: each margin needs at least 2 values");
  const double sd = std::hypot(hx.value(), hy.value());
  double sum = 0.0;
  for (double y : ys) {
    double row = 0.0;
    for (double x : xs) row += normal_cdf((y - x) / sd);
    sum += row;
  }
  return {sum / (static_cast<double>(xs.size()) * static_cast<double>(ys.size())),
          Method::Independent};
}

inline ThetaEstimate theta_independent(std::span<const double> xs, std::span<const double> ys) {
  return theta_independent(xs, ys, silverman_density_bw(xs), silverman_density_bw(ys));
}

/// Monte Carlo version of theta_independent: x from the f_X mixture, y from
/// the f_Y mixture, independently.
inline ThetaEstimate theta_independent_mc(std::span<const double> xs, std::span<const double> ys,
                                          Bandwidth1D hx, Bandwidth1D hy, std::size_t m,
                                          RngStream& rng) {
  if (m == 0) throw DomainError("theta_independent_mc: need at least one draw");
  if (xs.size() < 2 || ys.size() < 2)
    throw InsufficientData("theta_independent_mc: each margin needs at least 2 values");
  std::size_t hits = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double x = xs[rng.below(xs.size())] + hx.value() * rng.normal();
    const double y = ys[rng.below(ys.size())] + hy.value() * rng.normal();
    hits += (x < y) ? 1 : 0;
  }
  return {static_cast<double>(hits) / static_cast<double>(m), Method::Independent};
}

// ---------------------------------------------------------------------------
// Dispatch by method.
// ---------------------------------------------------------------------------

using BandwidthOverride = std::variant<std::monostate, Bandwidth1D, BandwidthMatrix2D>;

/// Estimator choice plus optional tuning. A Bandwidth1D override applies to
/// Kernel1D (h) and to Independent/Paired (both margins); a BandwidthMatrix2D
/// override applies to Kernel2D. When mc_samples is set, Kernel2D and
/// Independent/Paired are evaluated by their Monte Carlo paths using stream 0
/// of mc_seed.
struct EstimatorSpec {
  Method method = Method::Ecdf;
  BandwidthOverride bandwidth{};
  std::optional<std::size_t> mc_samples{};
  Seed mc_seed{};

  void validate() const {
    const bool has1 = std::holds_alternative<Bandwidth1D>(bandwidth);
    const bool has2 = std::holds_alternative<BandwidthMatrix2D>(bandwidth);
    const bool wants1 = method == Method::Kernel1D || method == Method::Independent ||
                        method == Method::Paired;
    if (has1 && !wants1)
      throw DomainError(std::string("scalar bandwidth override does not apply to ") +
                        std::string(method_name(method)));
    if (has2 && method != Method::Kernel2D)
      throw DomainError(std::string("bandwidth matrix override does not apply to ") +
                        std::string(method_name(method)));
    if (mc_samples && *mc_samples == 0) throw DomainError("mc_samples must be positive");
  }
};

/// Evaluate one estimator on a paired sample. Default bandwidths are
/// recomputed from the data passed in (so per bootstrap resample).
inline ThetaEstimate estimate(const EstimatorSpec& spec, const PairedSample& s) {
  spec.validate();
  switch (spec.method) {
    case Method::Ecdf: return theta_ecdf(differences(s));
    case Method::Kernel1D: {
      const auto z = differences(s);
      if (auto* h = std::get_if<Bandwidth1D>(&spec.bandwidth)) return theta_kernel_1d(z, *h);
      return theta_kernel_1d(z);
    }
    case Method::Mle1D: return theta_logconcave(differences(s));
    case Method::Smle1D: return theta_smoothed_logconcave(differences(s));
    case Method::Kernel2D: {
      const auto H = std::holds_alternative<BandwidthMatrix2D>(spec.bandwidth)
                         ? std::get<BandwidthMatrix2D>(spec.bandwidth)
                         : diagonal_bw_2d(s);
      if (spec.mc_samples) {
        RngStream rng(spec.mc_seed, 0);
        return theta_kernel_2d_mc(s, H, *spec.mc_samples, rng);
      }
      return theta_kernel_2d(s, H);
    }
    case Method::Independent:
    case Method::Paired: {
      const auto xs = s.xs();
      const auto ys = s.ys();
      const auto* h = std::get_if<Bandwidth1D>(&spec.bandwidth);
      const auto hx = h ? *h : silverman_density_bw(xs);
      const auto hy = h ? *h : silverman_density_bw(ys);
      ThetaEstimate t{};
      if (spec.mc_samples) {
        RngStream rng(spec.mc_seed, 0);
        t = theta_independent_mc(xs, ys, hx, hy, *spec.mc_samples, rng);
      } else {
        t = theta_independent(xs, ys, hx, hy);
      }
      t.method = spec.method;
      return t;
    }
  }
  throw DomainError("unknown estimator");
}

}  // namespace pxy
