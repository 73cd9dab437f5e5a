#pragma once

#include <cmath>
#include <span>

#include "pxy/core.hpp"

namespace pxy {

/// Scalar bandwidth for a univariate Gaussian kernel.
class Bandwidth1D {
public:
  explicit Bandwidth1D(double h) : h_(h) {
    if (!(h > 0.0) || !std::isfinite(h))
      throw DomainError("bandwidth must be positive and finite");
  }

  double value() const noexcept { return h_; }

private:
  double h_;
};

/// Symmetric positive definite 2x2 bandwidth matrix H. H plays the role of
/// the kernel covariance, so entries are in squared data units.
class BandwidthMatrix2D {
public:
  BandwidthMatrix2D(double h11, double h12, double h22) : h11_(h11), h12_(h12), h22_(h22) {
    if (!std::isfinite(h11) || !std::isfinite(h12) || !std::isfinite(h22) || !(h11 > 0.0) ||
        !(h11 * h22 - h12 * h12 > 0.0))
      throw DomainError("bandwidth matrix must be symmetric positive definite");
  }

  static BandwidthMatrix2D diagonal(double hx, double hy) {
    return BandwidthMatrix2D(hx * hx, 0.0, hy * hy);
  }

  double h11() const noexcept { return h11_; }
  double h12() const noexcept { return h12_; }
  double h22() const noexcept { return h22_; }

  /// Variance of (v - u) when (u, v) has covariance H.
  double difference_variance() const noexcept { return h11_ + h22_ - 2.0 * h12_; }

private:
  double h11_, h12_, h22_;
};

namespace detail {

inline double positive_sd(std::span<const double> v, const char* who) {
  const double sd = sample_sd(v);
  if (!(sd > 0.0)) throw DegenerateSample(std::string(who) + ": sample has zero spread");
  return sd;
}

}  // namespace detail

/// Silverman's rule of thumb for Gaussian density estimation,
/// h = (4 sd^5 / (3 n))^(1/5).
inline Bandwidth1D silverman_density_bw(std::span<const double> v) {
  const double sd = detail::positive_sd(v, "silverman_density_bw");
  const double n = static_cast<double>(v.size());
  return Bandwidth1D(std::pow(4.0 * std::pow(sd, 5) / (3.0 * n), 0.2));
}

/// Normal-reference bandwidth for kernel distribution estimation,
/// h = 1.587 sd n^(-1/3).
inline Bandwidth1D cdf_bw(std::span<const double> v) {
  const double sd = detail::positive_sd(v, "cdf_bw");
  const double n = static_cast<double>(v.size());
  return Bandwidth1D(1.587 * sd * std::pow(n, -1.0 / 3.0));
}

/// Diagonal bivariate bandwidth diag(hx^2, hy^2) with h = sd n^(-1/6) per axis.
inline BandwidthMatrix2D diagonal_bw_2d(const PairedSample& s) {
  const auto xs = s.xs();
  const auto ys = s.ys();
  const double sx = detail::positive_sd(xs, "diagonal_bw_2d (x)");
  const double sy = detail::positive_sd(ys, "diagonal_bw_2d (y)");
  const double scale = std::pow(static_cast<double>(s.size()), -1.0 / 6.0);
  return BandwidthMatrix2D::diagonal(sx * scale, sy * scale);
}

}  // namespace pxy
