#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "pxy/error.hpp"

namespace pxy {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  std::size_t max_subdivisions = 2000;
};

namespace detail {

struct Segment {
  double a, b, value, error;

  bool operator<(const Segment& o) const { return error < o.error; }
};

// 15-point Kronrod rule with its embedded 7-point Gauss rule.
template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * wk[7];
  double gauss = fc * wg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = h * xk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kronrod += wk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += wg[j / 2] * (f1 + f2);
  }
  kronrod *= h;
  gauss *= h;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

template <class F>
double adaptive_finite(F& f, double a, double b, const QuadratureSpec& spec) {
  std::priority_queue<Segment> heap;
  Segment first = gauss_kronrod_15(f, a, b);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  std::size_t used = 1;
  while (error > spec.abs_tol) {
    if (used >= spec.max_subdivisions)
      throw NonConvergence("adaptive_quad: subdivision limit reached (error estimate " +
                               std::to_string(error) + ")",
                           total, error);
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval cannot be split further in floating point.
      throw NonConvergence("adaptive_quad: interval underflow", total, error);
    }
    Segment left = gauss_kronrod_15(f, worst.a, mid);
    Segment right = gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++used;
  }
  // Re-sum to shed the drift from incremental updates.
  double sum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    heap.pop();
  }
  return sum;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b] to an absolute
/// tolerance. Either limit may be infinite; infinite ranges are mapped onto a
/// finite one with x = t / (1 - |t|), the inverse of t = x / (1 + |x|).
template <class F>
double adaptive_quad(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  if (!(spec.abs_tol > 0.0)) throw DomainError("adaptive_quad: abs_tol must be positive");
  if (spec.max_subdivisions == 0)
    throw DomainError("adaptive_quad: max_subdivisions must be positive");
  if (std::isnan(a) || std::isnan(b) || !(a < b))
    throw DomainError("adaptive_quad: need a < b");

  const bool finite_a = std::isfinite(a);
  const bool finite_b = std::isfinite(b);
  if (finite_a && finite_b) return detail::adaptive_finite(f, a, b, spec);

  auto to_t = [](double x) {
    if (std::isinf(x)) return x > 0 ? 1.0 : -1.0;
    return x / (1.0 + std::abs(x));
  };
  auto mapped = [&f](double t) {
    const double s = 1.0 - std::abs(t);
    const double x = t / s;
    const double v = f(x);
    return v / (s * s);
  };
  return detail::adaptive_finite(mapped, to_t(a), to_t(b), spec);
}

}  // namespace pxy
