#pragma once

// Reference computations that share no code with the library: closed-form
// mapped coordinates, finite-difference derivatives, and a Numerov shooting
// eigensolver for constant-mass problems.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// Fourth-order central differences.
inline double d1(const std::function<double(double)>& f, double x, double h = 1e-3) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

inline double d2(const std::function<double(double)>& f, double x, double h = 1e-3) {
  return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h);
}

// u(x) = int_0^x sqrt(m) for the catalog profiles.
inline double u_constant(double m0, double x) { return std::sqrt(m0) * x; }

inline double u_exponential(double m0, double lambda, double x) {
  return std::sqrt(m0) * 2.0 / lambda * (std::exp(lambda * x / 2.0) - 1.0);
}

inline double u_soliton(double m0, double lambda, double x) {
  return std::sqrt(m0) * 2.0 / lambda * std::atan(std::tanh(lambda * x / 2.0));
}

// sqrt(m) = sqrt(m0) (1 + (a - 1)/(1 + x^2))
inline double u_rational(double m0, double a, double x) {
  return std::sqrt(m0) * (x + (a - 1.0) * std::atan(x));
}

// Number of sign changes of the Numerov solution of -psi''/2 + V psi = E psi
// started with psi(lo) = 0 on `steps` intervals. Equals the number of
// Dirichlet eigenvalues on [lo, hi] below E.
inline int numerov_nodes(const std::vector<double>& v, double h, double e) {
  const std::size_t n = v.size();
  const double c = h * h / 12.0;
  auto f = [&](std::size_t i) { return 2.0 * (e - v[i]); };
  double p0 = 0.0, p1 = 1e-10;
  int nodes = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    // p0 = 0 at the start, where V may be infinite
    const double back = p0 == 0.0 ? 0.0 : p0 * (1.0 + c * f(i - 1));
    const double p2 = (2.0 * p1 * (1.0 - 5.0 * c * f(i)) - back) / (1.0 + c * f(i + 1));
    if ((p2 < 0.0) != (p1 < 0.0) && p2 != 0.0) ++nodes;
    p0 = p1;
    p1 = p2;
    if (std::abs(p1) > 1e200) {  // rescale to avoid overflow
      p0 *= 1e-200;
      p1 *= 1e-200;
    }
  }
  return nodes;
}

// Eigenvalue n of -psi''/2 + V(u) psi on [lo, hi] with Dirichlet ends, by
// bisection on the node count in [e_lo, e_hi].
inline double numerov_level(const std::function<double(double)>& V, double lo, double hi, int n,
                            double e_lo, double e_hi, std::size_t steps = 40000) {
  const double h = (hi - lo) / static_cast<double>(steps);
  std::vector<double> v(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) v[i] = V(lo + h * static_cast<double>(i));
  for (int it = 0; it < 200 && e_hi - e_lo > 1e-13 * std::max(1.0, std::abs(e_lo)); ++it) {
    const double mid = 0.5 * (e_lo + e_hi);
    if (numerov_nodes(v, h, mid) > n) e_hi = mid; else e_lo = mid;
  }
  return 0.5 * (e_lo + e_hi);
}

}  // namespace oracle
