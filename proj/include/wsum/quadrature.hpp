#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace wsum::quad {

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
};

namespace detail {

// Kronrod 15-point abscissae (nonnegative half) and weights, with the
// embedded 7-point Gauss weights on the odd-indexed nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gauss_kronrod15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b]: the
// segment with the largest error estimate is bisected until the summed
// estimate falls below abs_tol or max_intervals is reached.
template <class F>
Result integrate(const F& f, double a, double b, double abs_tol, int max_intervals = 4000) {
  if (!(b > a)) return {};
  std::priority_queue<detail::Segment> heap;
  heap.push(detail::gauss_kronrod15(f, a, b));
  double total = heap.top().value;
  double error = heap.top().error;
  int count = 1;
  while (error > abs_tol && count < max_intervals) {
    const detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // interval exhausted at machine precision; keep it but stop refining it
      heap.push({worst.a, worst.b, worst.value, 0.0});
      error -= worst.error;
      ++count;
      continue;
    }
    const auto left = detail::gauss_kronrod15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // resum to shed accumulated cancellation in the running totals
  double value = 0.0;
  double err = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {value, err, count};
}

}  // namespace wsum::quad
