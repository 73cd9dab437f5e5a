#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "pxy/kernels.hpp"
#include "pxy/rng.hpp"

using namespace pxy;

namespace {

// Data with sample sd exactly 1: +/- a with a = sqrt((n-1)/n).
std::vector<double> unit_sd_data(std::size_t n) {
  const double a = std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n));
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (i % 2 == 0) ? a : -a;
  return v;
}

}  // namespace

TEST_CASE("silverman bandwidth formula") {
  const auto v = unit_sd_data(100);
  REQUIRE(std::abs(sample_sd(v) - 1.0) < 1e-14);
  const double expected = std::pow(4.0 / 300.0, 0.2);  // 0.42164...
  CHECK(std::abs(silverman_density_bw(v).value() - expected) < 1e-12);
  CHECK(std::abs(expected - 0.4216) < 1e-4);
}

TEST_CASE("cdf bandwidth formula") {
  const auto v = unit_sd_data(1000);
  CHECK(std::abs(cdf_bw(v).value() - 0.1587) < 1e-12);
}

TEST_CASE("diagonal 2d bandwidth formula") {
  const auto a = unit_sd_data(64);
  std::vector<Pair> p;
  for (std::size_t i = 0; i < 64; ++i) p.push_back({a[i], a[(i + 1) % 64]});
  const auto H = diagonal_bw_2d(PairedSample(p));
  CHECK(std::abs(H.h11() - 0.25) < 1e-12);  // h = 64^(-1/6) = 0.5
  CHECK(std::abs(H.h22() - 0.25) < 1e-12);
  CHECK(H.h12() == 0.0);
  CHECK(H.h11() * H.h22() - H.h12() * H.h12() > 0.0);
}

TEST_CASE("bandwidths scale with the data and ignore shifts") {
  RngStream rng(Seed{1}, 0);
  std::vector<double> v(57);
  for (auto& x : v) x = rng.normal() * 2.0 + 0.3;
  for (double c : {0.01, 0.5, 3.0, 1000.0}) {
    std::vector<double> scaled(v), shifted(v);
    for (auto& x : scaled) x *= c;
    for (auto& x : shifted) x += c;
    CHECK(silverman_density_bw(scaled).value() ==
          Catch::Approx(c * silverman_density_bw(v).value()).epsilon(1e-12));
    CHECK(cdf_bw(scaled).value() == Catch::Approx(c * cdf_bw(v).value()).epsilon(1e-12));
    CHECK(silverman_density_bw(shifted).value() ==
          Catch::Approx(silverman_density_bw(v).value()).epsilon(1e-9));
    CHECK(cdf_bw(shifted).value() == Catch::Approx(cdf_bw(v).value()).epsilon(1e-9));
  }
}

TEST_CASE("bandwidths shrink with n while n h (and n h^2 in 2d) grows") {
  double prev_h = INFINITY, prev_nh = 0.0, prev_nh2 = 0.0;
  for (std::size_t n : {10u, 100u, 1000u, 10000u, 100000u}) {
    const auto v = unit_sd_data(n);
    const double h = cdf_bw(v).value();
    CHECK(h < prev_h);
    CHECK(n * h > prev_nh);
    CHECK(silverman_density_bw(v).value() < std::pow(4.0 / 3.0, 0.2));
    std::vector<Pair> p;
    for (std::size_t i = 0; i < n; ++i) p.push_back({v[i], v[(i + 1) % n]});
    const double h2d = diagonal_bw_2d(PairedSample(p)).h11();  // h^2
    CHECK(n * h2d > prev_nh2);
    prev_h = h;
    prev_nh = n * h;
    prev_nh2 = n * h2d;
  }
}

TEST_CASE("bandwidth errors") {
  CHECK_THROWS_AS(silverman_density_bw(std::vector<double>{2, 2, 2}), DegenerateSample);
  CHECK_THROWS_AS(cdf_bw(std::vector<double>{2, 2}), DegenerateSample);
  CHECK_THROWS_AS(diagonal_bw_2d(PairedSample({{1, 0}, {1, 1}})), DegenerateSample);
  CHECK_THROWS_AS(Bandwidth1D(0.0), DomainError);
  CHECK_THROWS_AS(Bandwidth1D(-1.0), DomainError);
  CHECK_THROWS_AS(Bandwidth1D(INFINITY), DomainError);
  CHECK_THROWS_AS(BandwidthMatrix2D(1.0, 2.0, 1.0), DomainError);
  CHECK_THROWS_AS(BandwidthMatrix2D(-1.0, 0.0, 1.0), DomainError);
  CHECK_NOTHROW(BandwidthMatrix2D(1.0, 0.9, 1.0));
}
