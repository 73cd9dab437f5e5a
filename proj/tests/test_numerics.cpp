#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "pxy/normal.hpp"
#include "pxy/quadrature.hpp"
#include "pxy/rng.hpp"

using namespace pxy;

namespace {

// Maclaurin series of erf in long double; accurate to ~1e-18 for |x| < 3.
long double erf_series(long double x) {
  long double sum = 0.0L, term = x;  // x^(2n+1) (-1)^n / n!
  for (int n = 0; n < 200; ++n) {
    const long double add = term / (2 * n + 1);
    sum += add;
    if (std::fabs(add) < 1e-22L) break;
    term *= -x * x / (n + 1);
  }
  return 2.0L / std::sqrt(std::numbers::pi_v<long double>) * sum;
}

long double phi_series(long double x) { return 0.5L * (1.0L + erf_series(x / std::sqrt(2.0L))); }

}  // namespace

TEST_CASE("normal_cdf anchor values") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(std::abs(normal_cdf(8.0) - 1.0) < 1e-12);
  CHECK(std::abs(normal_cdf(1.959964) - 0.975) < 1e-6);
}

TEST_CASE("normal_cdf agrees with the series oracle to 1e-12") {
  for (double x = -3.0; x <= 3.0; x += 0.0625) {
    CHECK(std::abs(normal_cdf(x) - static_cast<double>(phi_series(x))) < 1e-12);
  }
  CHECK(std::abs(normal_cdf(1.959964) - static_cast<double>(phi_series(1.959964L))) < 1e-13);
}

TEST_CASE("normal_cdf is monotone and symmetric") {
  double prev = 0.0;
  for (double x = -10.0; x <= 10.0; x += 0.01) {
    const double v = normal_cdf(x);
    CHECK(v >= prev);
    prev = v;
    CHECK(std::abs(normal_cdf(-x) + normal_cdf(x) - 1.0) < 1e-12);
  }
}

TEST_CASE("normal_quantile inverts normal_cdf") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(std::abs(normal_quantile(0.975) - 1.959964) < 1e-5);
  for (double p : {1e-12, 1e-8, 1e-4, 0.01, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.9, 0.975, 0.99,
                   0.99999}) {
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) < 1e-9);
    // 1 - p is rounded, so compare against the exactly representable mirror.
    const double pc = 1.0 - p, pm = 1.0 - pc;
    CHECK(std::abs(normal_quantile(pm) + normal_quantile(pc)) < 1e-9);
  }
  CHECK_THROWS_AS(normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS(normal_quantile(1.0), DomainError);
  CHECK_THROWS_AS(normal_quantile(-0.1), DomainError);
  CHECK_THROWS_AS(normal_quantile(NAN), DomainError);
}

TEST_CASE("adaptive_quad on polynomials and the normal density") {
  const QuadratureSpec spec{1e-12, 1000};
  CHECK(std::abs(adaptive_quad([](double) { return 1.0; }, 0.0, 1.0, spec) - 1.0) < 1e-12);
  CHECK(std::abs(adaptive_quad([](double x) { return x; }, 0.0, 1.0, spec) - 0.5) < 1e-12);
  CHECK(std::abs(adaptive_quad(normal_pdf, -INFINITY, INFINITY, spec) - 1.0) < 1e-10);
  CHECK(std::abs(adaptive_quad(normal_pdf, 0.0, INFINITY, spec) - 0.5) < 1e-10);
  CHECK(std::abs(adaptive_quad(normal_pdf, -INFINITY, 1.0, spec) - normal_cdf(1.0)) < 1e-10);
  // second moment of the standard normal
  CHECK(std::abs(adaptive_quad([](double x) { return x * x * normal_pdf(x); }, -INFINITY,
                               INFINITY, spec) -
                 1.0) < 1e-10);
}

TEST_CASE("adaptive_quad is linear and additive") {
  const QuadratureSpec spec{1e-11, 2000};
  auto f = [](double x) { return std::sin(3.0 * x) * std::exp(-x * x); };
  auto g = [](double x) { return std::cos(x) / (1.0 + x * x); };
  const double If = adaptive_quad(f, -2.0, 3.0, spec);
  const double Ig = adaptive_quad(g, -2.0, 3.0, spec);
  const double Ilin = adaptive_quad([&](double x) { return 2.0 * f(x) - 0.5 * g(x); }, -2.0, 3.0, spec);
  CHECK(std::abs(Ilin - (2.0 * If - 0.5 * Ig)) < 2.0 * spec.abs_tol * 3.0);
  const double left = adaptive_quad(f, -2.0, 0.7, spec);
  const double right = adaptive_quad(f, 0.7, 3.0, spec);
  CHECK(std::abs(left + right - If) < 3.0 * spec.abs_tol);
}

TEST_CASE("adaptive_quad reports non-convergence with its best estimate") {
  // 1/sqrt(x) has an integrable endpoint singularity; 3 subdivisions cannot reach 1e-14
  try {
    adaptive_quad([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {1e-14, 3});
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(std::abs(e.best_estimate() - 2.0) < 0.1);
    CHECK(e.error_estimate() > 1e-14);
  }
  CHECK_THROWS_AS(adaptive_quad([](double) { return 1.0; }, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(adaptive_quad([](double) { return 1.0; }, 0.0, 1.0, {0.0, 10}), DomainError);
}

TEST_CASE("rng streams are reproducible and distinct") {
  auto a = split_streams(Seed{42}, 3);
  auto b = split_streams(Seed{42}, 3);
  std::vector<std::uint64_t> a0, b0, a1;
  for (int i = 0; i < 16; ++i) {
    a0.push_back(a[0]());
    b0.push_back(b[0]());
    a1.push_back(a[1]());
  }
  CHECK(a0 == b0);
  CHECK(a0 != a1);

  auto single = split_streams(Seed{42}, 1);
  RngStream direct(Seed{42}, 0);
  REQUIRE(single.size() == 1);
  CHECK(single[0].stream_index() == 0);
  for (int i = 0; i < 16; ++i) CHECK(single[0]() == direct());

  CHECK_THROWS_AS(split_streams(Seed{1}, 0), DomainError);
}

TEST_CASE("rng stream prefixes differ across many streams and seeds") {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t s = 0; s < 20; ++s)
    for (std::uint64_t k = 0; k < 50; ++k) firsts.insert(RngStream(Seed{s}, k)());
  CHECK(firsts.size() == 1000);
}

TEST_CASE("rng derived variates have the right ranges and moments") {
  RngStream rng(Seed{9}, 3);
  double sum = 0.0, sum2 = 0.0, usum = 0.0;
  std::vector<int> counts(7, 0);
  const int m = 200000;
  for (int i = 0; i < m; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    usum += u;
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
    counts[rng.below(7)]++;
  }
  CHECK(std::abs(usum / m - 0.5) < 0.005);
  CHECK(std::abs(sum / m) < 0.01);
  CHECK(std::abs(sum2 / m - 1.0) < 0.02);
  for (int c : counts) CHECK(std::abs(c / double(m) - 1.0 / 7.0) < 0.005);
}

TEST_CASE("streams of different indices are uncorrelated") {
  RngStream a(Seed{5}, 0), b(Seed{5}, 1);
  const int m = 100000;
  double sab = 0.0;
  for (int i = 0; i < m; ++i) sab += (a.uniform() - 0.5) * (b.uniform() - 0.5);
  // sd of the mean product is 1/12/sqrt(m) ~ 2.6e-4
  CHECK(std::abs(sab / m) < 1.5e-3);
}
