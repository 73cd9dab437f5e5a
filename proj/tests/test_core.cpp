#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "pxy/core.hpp"
#include "pxy/rng.hpp"

using namespace pxy;
using Catch::Approx;

namespace {

PairedSample random_sample(std::uint64_t seed, std::size_t n) {
  RngStream rng(Seed{seed}, 0);
  std::vector<Pair> p(n);
  for (auto& q : p) q = {rng.normal() * 3.0 + 1.0, rng.normal() + 0.5 * rng.uniform()};
  return PairedSample(std::move(p));
}

}  // namespace

TEST_CASE("differences subtract x from y in order") {
  const auto z = differences(PairedSample({{1, 3}, {2, 2}, {5, 1}}));
  REQUIRE(z.size() == 3);
  CHECK(z[0] == 2.0);
  CHECK(z[1] == 0.0);
  CHECK(z[2] == -4.0);
}

TEST_CASE("differences of identical couples are zero") {
  const auto z = differences(PairedSample(std::vector<Pair>(5, {0.0, 0.0})));
  for (double v : z) CHECK(v == 0.0);
}

TEST_CASE("a constant shift between columns gives constant differences") {
  std::vector<Pair> p;
  for (int i = 0; i < 10; ++i) p.push_back({0.25 * i, 0.25 * i + 4.0});
  for (double v : differences(PairedSample(p))) CHECK(v == 4.0);
}

TEST_CASE("paired sample rejects bad input") {
  CHECK_THROWS_AS(PairedSample({{1.0, 2.0}}), InsufficientData);
  CHECK_THROWS_AS(PairedSample({{1.0, 2.0}, {NAN, 1.0}}), DataError);
  CHECK_THROWS_AS(PairedSample({{1.0, 2.0}, {1.0, INFINITY}}), DataError);
  CHECK_THROWS_AS(DiffSample({1.0}), InsufficientData);
}

TEST_CASE("sample_sd uses the n-1 denominator") {
  CHECK(sample_sd(std::vector<double>{1, 1, 1}) == 0.0);
  CHECK(sample_sd(std::vector<double>{0, 2}) == Approx(std::sqrt(2.0)).epsilon(1e-15));
  // sum of squared deviations about 2.5 is 5, divided by 3
  CHECK(sample_sd(std::vector<double>{1, 2, 3, 4}) == Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(sample_sd(std::vector<double>{1}), InsufficientData);
}

TEST_CASE("pearson correlation on lines and a zero-covariance set") {
  CHECK(pearson_correlation(PairedSample({{0, 1}, {1, 3}, {2, 5}, {3, 7}})) ==
        Approx(1.0).epsilon(1e-15));
  CHECK(pearson_correlation(PairedSample({{0, 1}, {1, -1}, {2, -3}})) ==
        Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(pearson_correlation(PairedSample({{0, 0}, {1, 1}, {2, 0}}))) < 1e-15);
  CHECK_THROWS_AS(pearson_correlation(PairedSample({{1, 0}, {1, 1}, {1, 2}})), DegenerateSample);
}

TEST_CASE("differences are invariant to a common shift and negate under swap") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto s = random_sample(seed, 30);
    const double c = 0.5 * static_cast<double>(seed);  // dyadic: shift is exact
    std::vector<Pair> shifted;
    for (const auto& p : s) shifted.push_back({p.x + c, p.y + c});
    const auto z = differences(s);
    const auto zs = differences(PairedSample(shifted));
    const auto zw = differences(s.swapped());
    for (std::size_t i = 0; i < s.size(); ++i) {
      // (y + c) - (x + c) can differ from y - x by rounding of the shifted inputs
      CHECK(zs[i] == Approx(z[i]).margin(1e-14));
      CHECK(zw[i] == -z[i]);
    }
  }
}

TEST_CASE("pearson correlation is invariant to positive affine maps") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto s = random_sample(seed, 40);
    std::vector<Pair> mapped;
    for (const auto& p : s) mapped.push_back({3.7 * p.x - 11.0, 0.02 * p.y + 5.0});
    CHECK(std::abs(pearson_correlation(PairedSample(mapped)) - pearson_correlation(s)) < 1e-12);
  }
}

TEST_CASE("differences shift exactly when the arithmetic is exact") {
  RngStream rng(Seed{3}, 0);
  std::vector<Pair> p(50);
  for (auto& q : p) q = {static_cast<double>(rng.below(1000)), static_cast<double>(rng.below(1000))};
  const PairedSample s(p);
  for (auto& q : p) {
    q.x += 17.0;
    q.y += 17.0;
  }
  const auto z = differences(s);
  const auto zs = differences(PairedSample(p));
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(zs[i] == z[i]);
}
