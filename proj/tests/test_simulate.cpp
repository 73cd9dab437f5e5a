#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pxy/simulate.hpp"

using namespace pxy;

TEST_CASE("sinh-arcsinh transform examples") {
  for (double u : {-3.0, -0.2, 0.0, 1.5, 40.0}) CHECK(sas_transform(u, 1.0, 0.0, 1.0) == Catch::Approx(u));
  CHECK(sas_transform(0.0, 1.0, 1.0, 2.0) == Catch::Approx(0.5210953054937474).epsilon(1e-14));
  CHECK(sas_transform(0.0, 3.0, 1.0, 2.0) == Catch::Approx(3.0 * std::sinh(0.5)));
  double prev = -INFINITY;
  for (double u = -10.0; u <= 10.0; u += 0.05) {
    const double t = sas_transform(u, 1.3, -0.4, 0.7);
    CHECK(t > prev);
    prev = t;
  }
}

TEST_CASE("inverse transform round-trips") {
  for (auto [s, e, d] : {std::tuple{1.0, 1.0, 2.0}, std::tuple{1.0, 0.0, 1.0},
                         std::tuple{2.5, -0.7, 0.6}, std::tuple{0.3, 2.0, 3.0}}) {
    for (double u = -10.0; u <= 10.0; u += 0.01) {
      const double back = sas_inverse(sas_transform(u, s, e, d), s, e, d);
      CHECK(std::abs(back - u) < 1e-10 * std::max(1.0, std::abs(u)));
    }
  }
}

TEST_CASE("sampling is deterministic and has the copula correlation") {
  const auto p = SinhArcsinhParams::reference();
  RngStream a(Seed{5}, 2), b(Seed{5}, 2);
  CHECK(sample_sas(p, 50, a) == sample_sas(p, 50, b));

  RngStream big(Seed{17}, 0);
  const auto s = sample_sas(p, 100'000, big);
  CHECK(std::abs(pearson_correlation(s) - 0.743) < 0.02);

  const SinhArcsinhParams normal{1.0, 1.0, 0.6, 0.0, 0.0, 1.0, 1.0};
  RngStream g(Seed{18}, 0);
  const auto n = sample_sas(normal, 100'000, g);
  CHECK(std::abs(pearson_correlation(n) - 0.6) < 0.01);
  CHECK(std::abs(sample_mean(n.xs())) < 0.015);
  CHECK(std::abs(sample_sd(n.ys()) - 1.0) < 0.015);

  RngStream r(Seed{1}, 0);
  CHECK_THROWS_AS(sample_sas(SinhArcsinhParams{1, 1, 1.0, 0, 0, 1, 1}, 10, r), DomainError);
  CHECK_THROWS_AS(sample_sas(SinhArcsinhParams{1, 1, 0.0, 0, 0, -1, 1}, 10, r), DomainError);
  CHECK_THROWS_AS(sample_sas(p, 1, r), InsufficientData);
}

TEST_CASE("theta oracle at the reference parameters") {
  const auto p = SinhArcsinhParams::reference();
  const double theta = theta_oracle(p);
  CHECK(std::abs(theta - 0.780) < 0.005);

  const auto mc = oracle::sas_theta_mc(p.rho, p.sigma1, p.eps1, p.delta1, p.sigma2, p.eps2,
                                       p.delta2, 10'000'000, 31);
  CHECK(std::abs(mc.estimate - theta) < 3.0 * mc.standard_error);

  const double indep = theta_independent_oracle(p);
  CHECK(indep >= 0.60);
  CHECK(indep <= 0.70);
  const auto mci = oracle::sas_theta_mc(0.0, p.sigma1, p.eps1, p.delta1, p.sigma2, p.eps2,
                                        p.delta2, 10'000'000, 32);
  CHECK(std::abs(mci.estimate - indep) < 3.0 * mci.standard_error);
}

TEST_CASE("theta oracle properties") {
  for (double rho : {-0.9, 0.0, 0.3, 0.95}) {
    const SinhArcsinhParams same{1.5, 1.5, rho, 0.4, 0.4, 1.7, 1.7};
    CHECK(theta_oracle(same) == Catch::Approx(0.5).margin(1e-9));
  }
  auto p = SinhArcsinhParams::reference();
  p.rho = 0.0;
  CHECK(theta_oracle(p) == theta_independent_oracle(SinhArcsinhParams::reference()));

  double prev = 0.0;
  for (double e2 = -2.0; e2 <= 2.0; e2 += 0.25) {
    auto q = SinhArcsinhParams::reference();
    q.eps2 = e2;
    const double t = theta_oracle(q);
    CHECK(t > 0.0);
    CHECK(t < 1.0);
    CHECK(t >= prev - 1e-10);
    prev = t;
  }

  // X = G1, Y = 2 G2: 2 G2 - G1 is a centred normal, so theta = 1/2 for any rho.
  const SinhArcsinhParams scaled{1.0, 2.0, 0.4, 0.0, 0.0, 1.0, 1.0};
  CHECK(theta_oracle(scaled) == Catch::Approx(0.5).margin(1e-9));
}

TEST_CASE("correlation oracle") {
  const auto p = SinhArcsinhParams::reference();
  CHECK(std::abs(correlation_oracle(p) - 0.743) < 0.005);

  for (double rho : {-0.5, 0.0, 0.3, 0.8}) {
    const SinhArcsinhParams normal{2.0, 0.5, rho, 0.0, 0.0, 1.0, 1.0};
    CHECK(correlation_oracle(normal) == Catch::Approx(rho).margin(1e-8));
  }

  // swapping the margin labels leaves the correlation unchanged
  const SinhArcsinhParams swapped{p.sigma2, p.sigma1, p.rho, p.eps2, p.eps1, p.delta2, p.delta1};
  CHECK(correlation_oracle(swapped) == Catch::Approx(correlation_oracle(p)).margin(1e-8));
}
