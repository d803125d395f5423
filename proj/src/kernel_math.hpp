#pragma once

// Per-element arithmetic shared by the serial and OpenMP kernels. Keeping a
// single definition is what makes the two paths bitwise identical.

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pdm/kernels.hpp"

namespace pdm::kernels::detail {

struct OrderingPowers {
  double eta, eps, rho;
};

// Row i of the kinetic stencil: the (i, i+1) coupling through the half point
// i + 1/2. mi, mj are the full-point masses on either side.
inline double kinetic_off(double mi, double mj, double m_half, const OrderingPowers& p,
                          double inv_h2) {
  return -0.25 * std::pow(m_half, p.eps) *
         (std::pow(mi, p.eta) * std::pow(mj, p.rho) + std::pow(mi, p.rho) * std::pow(mj, p.eta)) *
         inv_h2;
}

inline double kinetic_diag(double mi, double m_left, double m_right, const OrderingPowers& p,
                           double inv_h2) {
  return 0.5 * std::pow(mi, p.eta + p.rho) * (std::pow(m_left, p.eps) + std::pow(m_right, p.eps)) *
         inv_h2;
}

inline double pivot_floor(const std::vector<double>& off_sq) {
  double mx = 1.0;
  for (double e : off_sq) mx = std::max(mx, e);
  return DBL_MIN * mx;
}

inline std::size_t sturm_count_impl(const std::vector<double>& d, const std::vector<double>& e2,
                                    double lambda, double pivmin) {
  std::size_t count = 0;
  double q = d[0] - lambda;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    q = d[i] - lambda - e2[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

struct Gershgorin {
  double lo, hi;
};

inline Gershgorin gershgorin(const Tridiagonal& t) {
  const std::size_t n = t.size();
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.upper[i - 1]);
    if (i + 1 < n) r += std::abs(t.upper[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double pad = 2.0 * DBL_EPSILON * std::max(std::abs(lo), std::abs(hi)) + DBL_MIN;
  return {lo - pad, hi + pad};
}

// k-th smallest eigenvalue (0-based).
inline double bisect_one(const std::vector<double>& d, const std::vector<double>& e2,
                         Gershgorin g, std::size_t k, double pivmin) {
  double lo = g.lo, hi = g.hi;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= 2.0 * DBL_EPSILON * std::max(std::abs(lo), std::abs(hi))) break;
    if (sturm_count_impl(d, e2, mid, pivmin) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Deterministic start vector, different per eigenvalue index.
inline double start_component(std::size_t i, std::size_t idx) {
  return 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 1.3 * static_cast<double>(idx) + 0.1);
}

// Inverse iteration for one eigenvalue; returns a unit 2-norm vector.
inline std::vector<double> inverse_one(const Tridiagonal& t, double lambda, std::size_t idx,
                                       double norm) {
  const std::size_t n = t.size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = start_component(i, idx);
  if (n == 1) {
    v[0] = 1.0;
    return v;
  }
  // Pivoted LU of (T - lambda I).
  std::vector<double> dl(t.lower), d(n), du(t.upper), du2(n, 0.0);
  std::vector<unsigned char> swapped(n, 0);
  for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - lambda;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] != 0.0) {
        const double fact = dl[i] / d[i];
        dl[i] = fact;
        d[i + 1] -= fact * du[i];
      } else {
        dl[i] = 0.0;
      }
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const double temp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = temp - fact * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  const double tiny = DBL_EPSILON * std::max(norm, DBL_MIN);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(d[i]) < tiny) d[i] = d[i] < 0.0 ? -tiny : tiny;
  }
  auto solve = [&](std::vector<double>& b) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped[i]) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl[i] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) {
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
  };
  auto normalize = [&](std::vector<double>& b) {
    double s = 0.0, mx = 0.0;
    for (double x : b) mx = std::max(mx, std::abs(x));
    if (mx == 0.0) return;
    for (double& x : b) x /= mx;
    for (double x : b) s += x * x;
    s = std::sqrt(s);
    for (double& x : b) x /= s;
  };
  normalize(v);
  for (int it = 0; it < 4; ++it) {
    solve(v);
    normalize(v);
  }
  // Fix the overall sign: first significant component positive.
  double mx = 0.0;
  for (double x : v) mx = std::max(mx, std::abs(x));
  for (double x : v) {
    if (std::abs(x) > 1e-3 * mx) {
      if (x < 0.0) {
        for (double& y : v) y = -y;
      }
      break;
    }
  }
  return v;
}

inline double residual_one(const Tridiagonal& t, double lambda, const std::vector<double>& v) {
  const std::size_t n = t.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = (t.diag[i] - lambda) * v[i];
    if (i > 0) r += t.lower[i - 1] * v[i - 1];
    if (i + 1 < n) r += t.upper[i] * v[i + 1];
    s += r * r;
  }
  return std::sqrt(s);
}

// Gram-Schmidt within clusters of numerically equal eigenvalues, in index
// order. Runs serially after the (possibly parallel) inverse iterations.
inline void orthogonalize_clusters(std::vector<std::vector<double>>& vecs,
                                   const std::vector<double>& lambda, double norm) {
  const double gap = 1e-10 * std::max(norm, 1.0);
  for (std::size_t j = 1; j < vecs.size(); ++j) {
    bool touched = false;
    for (std::size_t i = 0; i < j; ++i) {
      if (std::abs(lambda[i] - lambda[j]) > gap) continue;
      double dot = 0.0;
      for (std::size_t k = 0; k < vecs[j].size(); ++k) dot += vecs[i][k] * vecs[j][k];
      for (std::size_t k = 0; k < vecs[j].size(); ++k) vecs[j][k] -= dot * vecs[i][k];
      touched = true;
    }
    if (touched) {
      double s = 0.0;
      for (double x : vecs[j]) s += x * x;
      s = std::sqrt(s);
      if (s > 0.0) {
        for (double& x : vecs[j]) x /= s;
      }
    }
  }
}

}  // namespace pdm::kernels::detail

namespace pdm::kernels {

// One implementation per execution path; kernels.cpp dispatches on Exec.
#define PDM_KERNEL_DECLS                                                                  \
  GridSamples sample_grid(const MassProfile& mass,                                       \
                          const std::function<double(double, double)>& potential,        \
                          double x_lo, double dx, std::size_t n);                        \
  Tridiagonal assemble(const GridSamples& s, const OrderingParams& ordering, double dx);  \
  std::vector<double> eigenvalues_bisect(const Tridiagonal& t, std::size_t k);            \
  std::vector<std::vector<double>> eigenvectors_inverse(const Tridiagonal& t,            \
                                                        const std::vector<double>& lambda); \
  std::vector<double> residuals(const Tridiagonal& t, const std::vector<double>& lambda,  \
                                const std::vector<std::vector<double>>& vectors);

namespace serial {
PDM_KERNEL_DECLS
}
namespace omp {
PDM_KERNEL_DECLS
}

#undef PDM_KERNEL_DECLS

}  // namespace pdm::kernels
