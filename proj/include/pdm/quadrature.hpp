#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "pdm/errors.hpp"

namespace pdm::quad {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  std::size_t max_panels = 10000;
};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// One Gauss-Kronrod 7/15 panel. Returns the Kronrod estimate and |K15 - G7|.
template <class F>
Panel gauss_kronrod15(const F& f, double a, double b) {
  static constexpr double xk[8] = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr double wk[8] = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr double wg[4] = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k15 = wk[7] * fc;
  double g7 = wg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * xk[i];
    const double s = f(c - dx) + f(c + dx);
    k15 += wk[i] * s;
    if (i % 2 == 1) g7 += wg[i / 2] * s;
  }
  return {a, b, k15 * h, std::abs((k15 - g7) * h)};
}

// Globally adaptive bisection: always splits the panel with the largest error
// estimate until the summed estimate meets the tolerance. Running sums are
// re-added from the panel list before any decision so cancellation in the
// incremental updates cannot stall the loop.
template <class F>
double integrate(const F& f, double a, double b, const Options& opt = {}) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, opt);

  auto by_error = [](const Panel& x, const Panel& y) { return x < y; };
  std::vector<Panel> heap{gauss_kronrod15(f, a, b)};
  double total = heap.front().value;
  double error = heap.front().error;
  auto resum = [&]() {
    total = 0.0;
    error = 0.0;
    for (const Panel& p : heap) {
      total += p.value;
      error += p.error;
    }
  };
  auto done = [&]() {
    return error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) ||
           error <= 50.0 * 2.2e-16 * std::abs(total);  // roundoff floor
  };

  while (!done()) {
    if (heap.size() >= opt.max_panels) {
      resum();
      if (done()) break;
      throw QuadratureFailure("tolerance not reached within " +
                              std::to_string(opt.max_panels) + " panels");
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gauss_kronrod15(f, worst.a, mid);
    const Panel right = gauss_kronrod15(f, mid, worst.b);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    if (done()) resum();
  }
  return total;
}

}  // namespace pdm::quad
