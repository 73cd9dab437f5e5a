#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "pxy/core.hpp"
#include "pxy/normal.hpp"
#include "pxy/quadrature.hpp"
#include "pxy/rng.hpp"

namespace pxy {

/// Bivariate sinh-arcsinh law: a Gaussian copula with correlation rho and
/// margins sigma * sinh((asinh(G) + eps) / delta), G standard normal.
struct SinhArcsinhParams {
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double rho = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double delta1 = 1.0;
  double delta2 = 1.0;

  /// Parameters of the simulated study: (1, 1, 0.75, 0, 1, 1, 2).
  static SinhArcsinhParams reference() { return {1.0, 1.0, 0.75, 0.0, 1.0, 1.0, 2.0}; }

  void validate() const {
    const bool ok = sigma1 > 0.0 && sigma2 > 0.0 && delta1 > 0.0 && delta2 > 0.0 &&
                    std::abs(rho) < 1.0 && std::isfinite(sigma1) && std::isfinite(sigma2) &&
                    std::isfinite(eps1) && std::isfinite(eps2) && std::isfinite(delta1) &&
                    std::isfinite(delta2);
    if (!ok)
      throw DomainError("sinh-arcsinh parameters need sigma > 0, delta > 0, |rho| < 1");
  }
};

inline double sas_transform(double u, double sigma, double eps, double delta) {
  return sigma * std::sinh((std::asinh(u) + eps) / delta);
}

inline double sas_inverse(double t, double sigma, double eps, double delta) {
  return std::sinh(delta * std::asinh(t / sigma) - eps);
}

inline PairedSample sample_sas(const SinhArcsinhParams& p, std::size_t n, RngStream& rng) {
  p.validate();
  if (n < 2) throw InsufficientData("sample_sas: n must be at least 2");
  const double c = std::sqrt(1.0 - p.rho * p.rho);
  std::vector<Pair> out(n);
  for (auto& pr : out) {
    const double g1 = rng.normal();
    const double g2 = p.rho * g1 + c * rng.normal();
    pr = {sas_transform(g1, p.sigma1, p.eps1, p.delta1),
          sas_transform(g2, p.sigma2, p.eps2, p.delta2)};
  }
  return PairedSample(std::move(out));
}

/// P(X < Y) by one-dimensional quadrature on the Gaussian layer:
/// P(G1 < g(G2)) with g = inverse margin 1 of margin 2, and
/// G1 | G2 = v ~ N(rho v, 1 - rho^2).
inline double theta_oracle(const SinhArcsinhParams& p, double tol = 1e-10) {
  p.validate();
  const double c = std::sqrt(1.0 - p.rho * p.rho);
  auto integrand = [&](double v) {
    const double y = sas_transform(v, p.sigma2, p.eps2, p.delta2);
    const double bound = sas_inverse(y, p.sigma1, p.eps1, p.delta1);
    return normal_pdf(v) * normal_cdf((bound - p.rho * v) / c);
  };
  return adaptive_quad(integrand, -INFINITY, INFINITY, {tol, 4000});
}

/// theta_oracle with the Gaussian-layer correlation removed.
inline double theta_independent_oracle(const SinhArcsinhParams& p, double tol = 1e-10) {
  SinhArcsinhParams q = p;
  q.rho = 0.0;
  return theta_oracle(q, tol);
}

/// Pearson correlation of (X, Y): marginal moments by 1-D quadrature and
/// E[XY] by nested quadrature over the conditional law of G1 given G2.
inline double correlation_oracle(const SinhArcsinhParams& p, double tol = 1e-9) {
  p.validate();
  const double inner_tol = tol * 1e-2;
  const QuadratureSpec spec{inner_tol, 4000};
  auto x_of = [&](double g) { return sas_transform(g, p.sigma1, p.eps1, p.delta1); };
  auto y_of = [&](double g) { return sas_transform(g, p.sigma2, p.eps2, p.delta2); };
  auto moment = [&](auto&& fn) {
    return adaptive_quad([&](double g) { return normal_pdf(g) * fn(g); }, -INFINITY, INFINITY,
                         spec);
  };
  const double mx = moment(x_of);
  const double my = moment(y_of);
  const double vx = moment([&](double g) { return (x_of(g) - mx) * (x_of(g) - mx); });
  const double vy = moment([&](double g) { return (y_of(g) - my) * (y_of(g) - my); });

  const double c = std::sqrt(1.0 - p.rho * p.rho);
  auto conditional_x = [&](double v) {
    return adaptive_quad(
        [&](double e) { return normal_pdf(e) * (x_of(p.rho * v + c * e) - mx); }, -INFINITY,
        INFINITY, spec);
  };
  const double cov = adaptive_quad(
      [&](double v) { return normal_pdf(v) * (y_of(v) - my) * conditional_x(v); }, -INFINITY,
      INFINITY, QuadratureSpec{tol * 1e-1, 4000});
  return cov / std::sqrt(vx * vy);
}

}  // namespace pxy
