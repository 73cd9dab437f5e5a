#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pxy/error.hpp"

namespace pxy {

/// One couple of measurements taken on the same experimental unit.
struct Pair {
  double x;
  double y;

  friend bool operator==(const Pair&, const Pair&) = default;
};

/// n >= 2 couples (x_i, y_i) of finite values, order preserved.
class PairedSample {
public:
  explicit PairedSample(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
    if (pairs_.size() < 2)
      throw InsufficientData("paired sample needs at least 2 couples, got " +
                             std::to_string(pairs_.size()));
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      if (!std::isfinite(pairs_[i].x) || !std::isfinite(pairs_[i].y))
        throw DataError("non-finite value in couple " + std::to_string(i + 1));
    }
  }

  PairedSample(std::span<const double> xs, std::span<const double> ys)
      : PairedSample(zip(xs, ys)) {}

  std::size_t size() const noexcept { return pairs_.size(); }
  const Pair& operator[](std::size_t i) const { return pairs_[i]; }
  std::span<const Pair> pairs() const noexcept { return pairs_; }
  auto begin() const noexcept { return pairs_.begin(); }
  auto end() const noexcept { return pairs_.end(); }

  std::vector<double> xs() const {
    std::vector<double> out(pairs_.size());
    for (std::size_t i = 0; i < pairs_.size(); ++i) out[i] = pairs_[i].x;
    return out;
  }

  std::vector<double> ys() const {
    std::vector<double> out(pairs_.size());
    for (std::size_t i = 0; i < pairs_.size(); ++i) out[i] = pairs_[i].y;
    return out;
  }

  /// Couples at the given indices, in index order (resampling, jackknife).
  PairedSample select(std::span<const std::size_t> idx) const {
    std::vector<Pair> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(pairs_[i]);
    return PairedSample(std::move(out));
  }

  PairedSample swapped() const {
    std::vector<Pair> out;
    out.reserve(pairs_.size());
    for (const auto& p : pairs_) out.push_back({p.y, p.x});
    return PairedSample(std::move(out));
  }

  friend bool operator==(const PairedSample&, const PairedSample&) = default;

private:
  static std::vector<Pair> zip(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
      throw FormatError("x and y columns differ in length");
    std::vector<Pair> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = {xs[i], ys[i]};
    return out;
  }

  std::vector<Pair> pairs_;
};

/// Differences z_i = y_i - x_i.
class DiffSample {
public:
  explicit DiffSample(std::vector<double> z) : z_(std::move(z)) {
    if (z_.size() < 2)
      throw InsufficientData("difference sample needs at least 2 values, got " +
                             std::to_string(z_.size()));
    for (std::size_t i = 0; i < z_.size(); ++i) {
      if (!std::isfinite(z_[i]))
        throw DataError("non-finite difference at index " + std::to_string(i));
    }
  }

  std::size_t size() const noexcept { return z_.size(); }
  double operator[](std::size_t i) const { return z_[i]; }
  std::span<const double> values() const noexcept { return z_; }
  auto begin() const noexcept { return z_.begin(); }
  auto end() const noexcept { return z_.end(); }

private:
  std::vector<double> z_;
};

enum class Method { Ecdf, Kernel1D, Mle1D, Smle1D, Kernel2D, Independent, Paired };

inline constexpr Method kAllMethods[] = {Method::Independent, Method::Paired,
                                         Method::Ecdf,        Method::Kernel1D,
                                         Method::Kernel2D,    Method::Mle1D,
                                         Method::Smle1D};

/// Display name, as used in report tables.
inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::Ecdf: return "ECDF";
    case Method::Kernel1D: return "Kernel 1D";
    case Method::Mle1D: return "MLE 1D";
    case Method::Smle1D: return "SMLE 1D";
    case Method::Kernel2D: return "Kernel 2D";
    case Method::Independent: return "Independent";
    case Method::Paired: return "Paired";
  }
  return "?";
}

/// Command-line / file-name token.
inline std::string_view method_key(Method m) {
  switch (m) {
    case Method::Ecdf: return "ecdf";
    case Method::Kernel1D: return "kernel1d";
    case Method::Mle1D: return "mle1d";
    case Method::Smle1D: return "smle1d";
    case Method::Kernel2D: return "kernel2d";
    case Method::Independent: return "independent";
    case Method::Paired: return "paired";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view key) {
  for (auto m : kAllMethods) {
    if (method_key(m) == key) return m;
  }
  return std::nullopt;
}

/// A probability estimate of P(X < Y) tagged with the estimator that produced it.
struct ThetaEstimate {
  double value;
  Method method;
};

struct Seed {
  std::uint64_t value = 0;

  friend bool operator==(const Seed&, const Seed&) = default;
};

inline DiffSample differences(const PairedSample& s) {
  std::vector<double> z(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) z[i] = s[i].y - s[i].x;
  return DiffSample(std::move(z));
}

inline double sample_mean(std::span<const double> v) {
  if (v.empty()) throw InsufficientData("mean of empty sample");
  const double n = static_cast<double>(v.size());
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
  // One correction pass; exact for constant input.
  double r = 0.0;
  for (double x : v) r += x - m;
  return m + r / n;
}

/// Unbiased (n-1) sample variance, two-pass.
inline double sample_variance(std::span<const double> v) {
  if (v.size() < 2)
    throw InsufficientData("sample variance needs at least 2 values");
  const double m = sample_mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

inline double sample_sd(std::span<const double> v) { return std::sqrt(sample_variance(v)); }

/// Sample Pearson coefficient, clamped to [-1, 1] against rounding.
inline double pearson_correlation(const PairedSample& s) {
  const auto xs = s.xs();
  const auto ys = s.ys();
  const double mx = sample_mean(xs);
  const double my = sample_mean(ys);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw DegenerateSample("correlation undefined: zero variance in a coordinate");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace pxy
