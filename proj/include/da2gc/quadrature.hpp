#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace da2gc {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int max_intervals = 4000;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.000000000000000000000000000000000, 0.207784955007898467600689403773245,
    0.405845151377397166906606412076961, 0.586087235467691130294144845693013,
    0.741531185599394439863864773280788, 0.864864423359769072789712788640926,
    0.949107912342758524526189684047851, 0.991455371120812639206854697526329};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.209482141084727828012999174891714, 0.204432940075298892414161999234649,
    0.190350578064785409913256402421014, 0.169004726639267902826583426598550,
    0.140653259715525918745189590510238, 0.104790010322250183839876322541518,
    0.063092092629978553290700663189204, 0.022935322010529224963732008058970};
// Gauss weights for the 7-point rule; nodes are kKronrodNodes[0, 2, 4, 6].
inline constexpr std::array<double, 4> kGaussWeights = {
    0.417959183673469387755102040816327, 0.381830050505118944950369775488975,
    0.279705391489276667901467771423780, 0.129484966168869693270611432679082};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename F>
Segment gauss_kronrod_15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = kKronrodWeights[0] * fc;
  double gauss = kGaussWeights[0] * fc;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 0) gauss += kGaussWeights[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// The interval with the largest error estimate is bisected until the summed
/// error falls below max(abs_tol, rel_tol * |value|).
template <typename F>
QuadratureResult integrate(const F& f, double a, double b, const QuadratureOptions& opts = {}) {
  QuadratureResult result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  const double sign = b < a ? -1.0 : 1.0;
  if (b < a) std::swap(a, b);

  std::priority_queue<detail::Segment> heap;
  heap.push(detail::gauss_kronrod_15(f, a, b));
  result.evaluations = 15;
  double value = heap.top().value;
  double error = heap.top().error;

  while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value)) &&
         static_cast<int>(heap.size()) < opts.max_intervals) {
    const detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);
      break;
    }
    const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    result.evaluations += 30;
    heap.push(left);
    heap.push(right);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
  }
  // Exact re-sum; the running totals above only steer the refinement loop.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  result.value = sign * value;
  result.error = error;
  result.converged = error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
  return result;
}

/// Iterated integral of f(x, y) over [x0, x1] x [y0, y1], inner integral over y.
template <typename F>
QuadratureResult integrate_2d(const F& f, double x0, double x1, double y0, double y1,
                              const QuadratureOptions& opts = {}) {
  QuadratureOptions inner = opts;
  inner.rel_tol = opts.rel_tol * 0.1;
  bool inner_ok = true;
  int inner_evals = 0;
  auto outer = integrate(
      [&](double x) {
        auto r = integrate([&](double y) { return f(x, y); }, y0, y1, inner);
        inner_ok = inner_ok && r.converged;
        inner_evals += r.evaluations;
        return r.value;
      },
      x0, x1, opts);
  outer.evaluations = inner_evals;
  outer.converged = outer.converged && inner_ok;
  return outer;
}

}  // namespace da2gc
