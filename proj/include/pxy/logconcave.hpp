#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "pxy/core.hpp"
#include "pxy/normal.hpp"
#include "pxy/quadrature.hpp"

namespace pxy {

namespace detail {

// Moments M_k(d) = \int_0^1 u^k e^{u d} du for d <= 0, k = 0, 1, 2.
struct UMoments {
  double m0, m1, m2;
};

inline UMoments u_moments_nonpositive(double d) {
  if (d > -2.0) {
    // Series sum_n d^n / (n! (n + k + 1)); terms decay like 2^n / n!.
    double term = 1.0;
    UMoments m{1.0, 0.5, 1.0 / 3.0};
    for (int n = 1; n < 60; ++n) {
      term *= d / n;
      const double t0 = term / (n + 1);
      m.m0 += t0;
      m.m1 += term / (n + 2);
      m.m2 += term / (n + 3);
      if (std::abs(t0) < 1e-18) break;
    }
    return m;
  }
  const double e = std::exp(d);
  const double d2 = d * d;
  return {(e - 1.0) / d, (e * (d - 1.0) + 1.0) / d2, (e * (d2 - 2.0 * d + 2.0) - 2.0) / (d2 * d)};
}

// Integrals of w(u) exp((1-u) r + u s) over [0,1] for the weights
// w = 1, u, 1-u, u^2, u(1-u), (1-u)^2. They are the value, gradient and
// Hessian of J(r, s) = \int_0^1 exp((1-u) r + u s) du. Evaluated from the
// end carrying the larger exponent so no term overflows or cancels badly.
struct SegmentIntegrals {
  double j, ju, j1u, juu, ju1u, j1u1u;
};

inline SegmentIntegrals segment_integrals(double r, double s) {
  if (s <= r) {
    const UMoments m = u_moments_nonpositive(s - r);
    const double e = std::exp(r);
    return {e * m.m0,
            e * m.m1,
            e * (m.m0 - m.m1),
            e * m.m2,
            e * (m.m1 - m.m2),
            e * (m.m0 - 2.0 * m.m1 + m.m2)};
  }
  const UMoments m = u_moments_nonpositive(r - s);
  const double e = std::exp(s);
  return {e * m.m0,
          e * (m.m0 - m.m1),
          e * m.m1,
          e * (m.m0 - 2.0 * m.m1 + m.m2),
          e * (m.m1 - m.m2),
          e * m.m2};
}

inline double exp_linear_mass(double r, double s) { return segment_integrals(r, s).j; }

}  // namespace detail

/// Distinct sorted support points with probability weights (ties collapsed).
struct WeightedSupport {
  std::vector<double> x;
  std::vector<double> w;
};

inline WeightedSupport collapse_ties(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  WeightedSupport out;
  const double unit = 1.0 / static_cast<double>(v.size());
  for (double t : v) {
    if (!out.x.empty() && out.x.back() == t) {
      out.w.back() += unit;
    } else {
      out.x.push_back(t);
      out.w.push_back(unit);
    }
  }
  return out;
}

/// Log-likelihood functional sum_i w_i phi_i - \int exp(phi), with phi the
/// linear interpolation of the given values over the support points.
inline double logconcave_objective(const WeightedSupport& data, std::span<const double> phi) {
  double lik = 0.0;
  for (std::size_t i = 0; i < data.x.size(); ++i) lik += data.w[i] * phi[i];
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < data.x.size(); ++i)
    mass += (data.x[i + 1] - data.x[i]) * detail::exp_linear_mass(phi[i], phi[i + 1]);
  return lik - mass;
}

/// Piecewise log-linear density exp(phi(t)) on [knots.front(), knots.back()],
/// phi linear between consecutive knots, zero density outside.
class LogConcaveFit {
public:
  LogConcaveFit(std::vector<double> knots, std::vector<double> phi)
      : knots_(std::move(knots)), phi_(std::move(phi)) {
    if (knots_.size() < 2 || knots_.size() != phi_.size())
      throw DomainError("LogConcaveFit: need matching knot and phi vectors of length >= 2");
    cum_.assign(knots_.size(), 0.0);
    for (std::size_t j = 0; j + 1 < knots_.size(); ++j) {
      if (!(knots_[j + 1] > knots_[j]))
        throw DomainError("LogConcaveFit: knots must be strictly increasing");
      cum_[j + 1] = cum_[j] + width(j) * detail::exp_linear_mass(phi_[j], phi_[j + 1]);
    }
  }

  std::span<const double> knots() const noexcept { return knots_; }
  std::span<const double> phi() const noexcept { return phi_; }
  double lower() const noexcept { return knots_.front(); }
  double upper() const noexcept { return knots_.back(); }

  /// Total mass; 1 up to rounding for a fitted MLE.
  double mass() const noexcept { return cum_.back(); }

  /// phi(t) inside the support, -infinity outside.
  double log_density(double t) const {
    if (t < lower() || t > upper()) return -std::numeric_limits<double>::infinity();
    const std::size_t j = segment(t);
    return interpolate(j, t);
  }

  double density(double t) const { return std::exp(log_density(t)); }

  double cdf(double t) const {
    if (t <= lower()) return 0.0;
    if (t >= upper()) return 1.0;
    const std::size_t j = segment(t);
    const double partial = (t - knots_[j]) * detail::exp_linear_mass(phi_[j], interpolate(j, t));
    return std::min((cum_[j] + partial) / cum_.back(), 1.0);
  }

  double mean() const {
    double m = 0.0;
    for (std::size_t j = 0; j + 1 < knots_.size(); ++j) {
      const auto s = detail::segment_integrals(phi_[j], phi_[j + 1]);
      const double h = width(j);
      m += h * (knots_[j] * s.j + h * s.ju);
    }
    return m;
  }

  double variance() const {
    const double mu = mean();
    double v = 0.0;
    for (std::size_t j = 0; j + 1 < knots_.size(); ++j) {
      const auto s = detail::segment_integrals(phi_[j], phi_[j + 1]);
      const double h = width(j);
      const double a = knots_[j] - mu;
      v += h * (a * a * s.j + 2.0 * a * h * s.ju + h * h * s.juu);
    }
    return v;
  }

  /// Slope of phi on each segment; nonincreasing for a concave fit.
  std::vector<double> slopes() const {
    std::vector<double> out(knots_.size() - 1);
    for (std::size_t j = 0; j + 1 < knots_.size(); ++j)
      out[j] = (phi_[j + 1] - phi_[j]) / width(j);
    return out;
  }

private:
  double width(std::size_t j) const { return knots_[j + 1] - knots_[j]; }

  std::size_t segment(double t) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    std::size_t j = static_cast<std::size_t>(it - knots_.begin());
    j = (j == 0) ? 0 : j - 1;
    return std::min(j, knots_.size() - 2);
  }

  double interpolate(std::size_t j, double t) const {
    const double lam = (t - knots_[j]) / width(j);
    return (1.0 - lam) * phi_[j] + lam * phi_[j + 1];
  }

  std::vector<double> knots_;
  std::vector<double> phi_;
  std::vector<double> cum_;
};

namespace detail {

// Active-set solver for the log-concave MLE on a weighted support. Works on
// standardized data; phi is always represented by its values at the current
// knot set (indices into the support, first and last always present).
class ActiveSetSolver {
public:
  explicit ActiveSetSolver(const WeightedSupport& data) : x_(data.x), w_(data.w) {}

  struct Result {
    std::vector<std::size_t> knots;
    std::vector<double> phi;  // at knots
  };

  Result solve() {
    const std::size_t m = x_.size();
    std::vector<std::size_t> knots{0, m - 1};
    const double flat = -std::log(x_.back() - x_.front());
    std::vector<double> phi = newton(knots, {flat, flat});

    const std::size_t max_outer = 20 * m + 100;
    for (std::size_t outer = 0;; ++outer) {
      if (outer > max_outer)
        throw NumericalError("log-concave MLE: active-set iteration limit reached");
      const auto full = expand(knots, phi);
      const auto dd = directional_derivatives(full);
      std::size_t best = 0;
      double best_val = kAddTol;
      std::size_t k = 0;
      for (std::size_t i = 1; i + 1 < m; ++i) {
        while (k < knots.size() && knots[k] < i) ++k;
        if (knots[k] == i) continue;
        if (dd[i] > best_val) {
          best_val = dd[i];
          best = i;
        }
      }
      if (best == 0) break;

      // Insert the new knot; phi stays feasible (linear through it).
      auto pos = std::lower_bound(knots.begin(), knots.end(), best);
      const std::size_t at = static_cast<std::size_t>(pos - knots.begin());
      phi.insert(phi.begin() + static_cast<std::ptrdiff_t>(at), full[best]);
      knots.insert(pos, best);

      auto candidate = newton(knots, phi);
      for (std::size_t inner = 0;; ++inner) {
        if (inner > knots.size() + 5)
          throw NumericalError("log-concave MLE: knot removal did not settle");
        const auto c_new = slope_changes(knots, candidate);
        bool feasible = true;
        for (double c : c_new) feasible = feasible && c >= -kConcavityTol;
        if (feasible) break;

        // Walk from phi toward the candidate until the first kink flattens.
        // The knot fixing the step is always dropped, even if rounding leaves
        // its kink slightly above tolerance.
        const auto c_old = slope_changes(knots, phi);
        double t = 1.0;
        std::size_t blocking = c_new.size();
        for (std::size_t j = 0; j < c_new.size(); ++j) {
          if (c_new[j] < -kConcavityTol) {
            const double tj = std::max(0.0, c_old[j]) / (std::max(0.0, c_old[j]) - c_new[j]);
            if (blocking == c_new.size() || tj < t) {
              t = tj;
              blocking = j;
            }
          }
        }
        for (std::size_t j = 0; j < phi.size(); ++j) phi[j] += t * (candidate[j] - phi[j]);
        const auto c_mid = slope_changes(knots, phi);
        std::vector<std::size_t> keep_knots{knots.front()};
        std::vector<double> keep_phi{phi.front()};
        for (std::size_t j = 0; j < c_mid.size(); ++j) {
          const bool flattened =
              j == blocking || (c_new[j] < -kConcavityTol && c_mid[j] <= kConcavityTol);
          if (!flattened) {
            keep_knots.push_back(knots[j + 1]);
            keep_phi.push_back(phi[j + 1]);
          }
        }
        keep_knots.push_back(knots.back());
        keep_phi.push_back(phi.back());
        knots = std::move(keep_knots);
        phi = std::move(keep_phi);
        candidate = newton(knots, phi);
      }
      phi = std::move(candidate);
    }
    return {std::move(knots), std::move(phi)};
  }

  /// phi at every support point, linear between knots.
  std::vector<double> expand(const std::vector<std::size_t>& knots,
                             const std::vector<double>& phi) const {
    std::vector<double> full(x_.size());
    for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
      const std::size_t a = knots[j], b = knots[j + 1];
      const double h = x_[b] - x_[a];
      for (std::size_t i = a; i <= b; ++i) {
        const double lam = (x_[i] - x_[a]) / h;
        full[i] = (1.0 - lam) * phi[j] + lam * phi[j + 1];
      }
    }
    return full;
  }

  /// d/dt of the objective along phi + t * min(x - x_i, 0), for every i:
  /// \int_{x_0}^{x_i} (F_hat - F_emp).
  std::vector<double> directional_derivatives(const std::vector<double>& full) const {
    const std::size_t m = x_.size();
    std::vector<double> out(m, 0.0);
    double int_fit = 0.0, int_emp = 0.0, cdf_fit = 0.0, cdf_emp = w_[0];
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const double h = x_[i + 1] - x_[i];
      const auto s = segment_integrals(full[i], full[i + 1]);
      int_emp += cdf_emp * h;
      int_fit += cdf_fit * h + h * h * s.j1u;
      cdf_fit += h * s.j;
      cdf_emp += w_[i + 1];
      out[i + 1] = int_fit - int_emp;
    }
    return out;
  }

private:
  static constexpr double kAddTol = 1e-11;
  static constexpr double kConcavityTol = 1e-12;
  static constexpr double kGradTol = 1e-12;

  // Slope decrease at each interior knot (>= 0 means concave there).
  std::vector<double> slope_changes(const std::vector<std::size_t>& knots,
                                    const std::vector<double>& phi) const {
    std::vector<double> out;
    for (std::size_t j = 1; j + 1 < knots.size(); ++j) {
      const double left = (phi[j] - phi[j - 1]) / (x_[knots[j]] - x_[knots[j - 1]]);
      const double right = (phi[j + 1] - phi[j]) / (x_[knots[j + 1]] - x_[knots[j]]);
      out.push_back(left - right);
    }
    return out;
  }

  // Linear functional coefficients: sum_i w_i phi(x_i) = c . phi_knots.
  std::vector<double> likelihood_weights(const std::vector<std::size_t>& knots) const {
    std::vector<double> c(knots.size(), 0.0);
    for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
      const std::size_t a = knots[j], b = knots[j + 1];
      const double h = x_[b] - x_[a];
      c[j] += w_[a];
      for (std::size_t i = a + 1; i < b; ++i) {
        const double lam = (x_[i] - x_[a]) / h;
        c[j] += w_[i] * (1.0 - lam);
        c[j + 1] += w_[i] * lam;
      }
    }
    c.back() += w_[knots.back()];
    return c;
  }

  double knot_objective(const std::vector<std::size_t>& knots, const std::vector<double>& c,
                        const std::vector<double>& phi) const {
    double v = 0.0;
    for (std::size_t j = 0; j < knots.size(); ++j) v += c[j] * phi[j];
    for (std::size_t j = 0; j + 1 < knots.size(); ++j)
      v -= (x_[knots[j + 1]] - x_[knots[j]]) * exp_linear_mass(phi[j], phi[j + 1]);
    return v;
  }

  // Unconstrained maximiser over phi values at a fixed knot set. The negative
  // Hessian is tridiagonal and positive definite.
  std::vector<double> newton(const std::vector<std::size_t>& knots,
                             std::vector<double> phi) const {
    const std::size_t k = knots.size();
    const auto c = likelihood_weights(knots);
    std::vector<double> grad(k), diag(k), off(k > 0 ? k - 1 : 0), step(k);
    double value = knot_objective(knots, c, phi);

    for (int iter = 0; iter < 200; ++iter) {
      std::fill(grad.begin(), grad.end(), 0.0);
      std::fill(diag.begin(), diag.end(), 0.0);
      for (std::size_t j = 0; j < k; ++j) grad[j] = c[j];
      for (std::size_t j = 0; j + 1 < k; ++j) {
        const double h = x_[knots[j + 1]] - x_[knots[j]];
        const auto s = segment_integrals(phi[j], phi[j + 1]);
        grad[j] -= h * s.j1u;
        grad[j + 1] -= h * s.ju;
        diag[j] += h * s.j1u1u;
        diag[j + 1] += h * s.juu;
        off[j] = h * s.ju1u;
      }
      double gmax = 0.0;
      for (double g : grad) gmax = std::max(gmax, std::abs(g));
      if (gmax < kGradTol) break;

      solve_tridiagonal(diag, off, grad, step);
      double decrement = 0.0;
      for (std::size_t j = 0; j < k; ++j) decrement += grad[j] * step[j];
      if (!(decrement > 1e-30)) break;

      double t = 1.0;
      std::vector<double> trial(k);
      bool moved = false;
      for (int halving = 0; halving < 60; ++halving) {
        for (std::size_t j = 0; j < k; ++j) trial[j] = phi[j] + t * step[j];
        const double tv = knot_objective(knots, c, trial);
        if (std::isfinite(tv) && tv >= value + 1e-4 * t * decrement) {
          phi.swap(trial);
          value = tv;
          moved = true;
          break;
        }
        t *= 0.5;
      }
      if (!moved) break;
    }
    return phi;
  }

  // Thomas algorithm for a symmetric tridiagonal system A x = b.
  static void solve_tridiagonal(const std::vector<double>& diag, const std::vector<double>& off,
                                const std::vector<double>& rhs, std::vector<double>& out) {
    const std::size_t n = diag.size();
    std::vector<double> cp(n), dp(n);
    double denom = diag[0];
    cp[0] = n > 1 ? off[0] / denom : 0.0;
    dp[0] = rhs[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
      denom = diag[i] - off[i - 1] * cp[i - 1];
      cp[i] = i + 1 < n ? off[i] / denom : 0.0;
      dp[i] = (rhs[i] - off[i - 1] * dp[i - 1]) / denom;
    }
    out[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) out[i] = dp[i] - cp[i] * out[i + 1];
  }

  std::vector<double> x_;
  std::vector<double> w_;
};

}  // namespace detail

/// Log-concave maximum likelihood density of a sample. Ties are collapsed into
/// weighted support points; knots of the result are a subset of the distinct
/// data values and always include the minimum and maximum.
inline LogConcaveFit fit_logconcave(std::span<const double> values) {
  if (values.size() < 2) throw InsufficientData("log-concave fit needs at least 2 values");
  auto data = collapse_ties(values);
  if (data.x.size() < 2) throw DegenerateSample("log-concave fit: all values identical");

  // Standardize for conditioning; densities rescale by 1/scale.
  const double centre = sample_mean(values);
  const double scale = sample_sd(values);
  WeightedSupport std_data{data.x, data.w};
  for (auto& v : std_data.x) v = (v - centre) / scale;

  detail::ActiveSetSolver solver(std_data);
  const auto res = solver.solve();

  std::vector<double> knots(res.knots.size());
  std::vector<double> phi(res.knots.size());
  for (std::size_t j = 0; j < res.knots.size(); ++j) {
    knots[j] = data.x[res.knots[j]];
    phi[j] = res.phi[j] - std::log(scale);
  }
  // Absorb the residual normalisation error of the Newton solve.
  const double log_mass = std::log(LogConcaveFit(knots, phi).mass());
  for (auto& p : phi) p -= log_mass;
  return LogConcaveFit(std::move(knots), std::move(phi));
}

inline LogConcaveFit fit_logconcave(const DiffSample& z) { return fit_logconcave(z.values()); }

inline double logconcave_cdf(const LogConcaveFit& fit, double t) {
  return std::clamp(fit.cdf(t), 0.0, 1.0);
}

/// Log-concave MLE convolved with N(0, gamma2), where gamma2 tops the fitted
/// variance up to the sample variance.
struct SmoothedFit {
  LogConcaveFit base;
  double gamma2;
};

inline SmoothedFit fit_smoothed(std::span<const double> values) {
  auto base = fit_logconcave(values);
  const double gamma2 = std::max(0.0, sample_variance(values) - base.variance());
  return {std::move(base), gamma2};
}

inline SmoothedFit fit_smoothed(const DiffSample& z) { return fit_smoothed(z.values()); }

/// CDF of the smoothed fit: \int f_hat(s) Phi((t - s) / gamma) ds, integrated
/// segment by segment between knots (total absolute tolerance 1e-10).
inline double smoothed_cdf(const SmoothedFit& fit, double t) {
  if (fit.gamma2 <= 0.0) return logconcave_cdf(fit.base, t);
  const double gamma = std::sqrt(fit.gamma2);
  const auto knots = fit.base.knots();
  const auto phi = fit.base.phi();
  const std::size_t segments = knots.size() - 1;
  const QuadratureSpec spec{1e-10 / static_cast<double>(segments), 4000};
  double total = 0.0;
  for (std::size_t j = 0; j < segments; ++j) {
    const double a = knots[j], b = knots[j + 1];
    const double slope = (phi[j + 1] - phi[j]) / (b - a);
    const double pa = phi[j];
    auto integrand = [&](double s) {
      return std::exp(pa + slope * (s - a)) * normal_cdf((t - s) / gamma);
    };
    total += adaptive_quad(integrand, a, b, spec);
  }
  return std::clamp(total, 0.0, 1.0);
}

}  // namespace pxy
