#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "pdm/mass_profile.hpp"

// Data-parallel building blocks of the solver. Every kernel exists twice:
// a plain serial reference and an OpenMP version. Both produce bitwise
// identical results because each output element is computed by the same
// arithmetic independent of the others.
namespace pdm::kernels {

enum class Exec { Serial, Parallel };

// True when the library was built with OpenMP.
bool parallel_available();

// Symmetric tridiagonal matrix. `upper` and `lower` are assembled
// independently so asymmetry can be measured rather than assumed.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> upper;  // (i, i+1)
  std::vector<double> lower;  // (i+1, i)

  std::size_t size() const { return diag.size(); }
  double norm_inf() const;       // max absolute row sum
  double max_asymmetry() const;  // max |upper - lower|
};

// Samples on the interior points x_i = x_lo + i dx, i = 1..n-2, and on the
// half points between consecutive grid points.
struct GridSamples {
  std::vector<double> x;       // interior points
  std::vector<double> m;       // mass at interior points
  std::vector<double> m_half;  // mass at x_lo + (i + 1/2) dx, i = 0..n-2
  std::vector<double> u;       // mapped coordinate at interior points
  std::vector<double> v;       // potential at interior points
};

GridSamples sample_grid(const MassProfile& mass,
                        const std::function<double(double, double)>& potential,  // (x, u)
                        double x_lo, double dx, std::size_t n, Exec exec);

// Kinetic operator
//   T = -1/4 [m^eta D m^eps D m^rho + m^rho D m^eps D m^eta]
// on a staggered grid plus diag(v), Dirichlet ends removed.
Tridiagonal assemble(const GridSamples& s, const OrderingParams& ordering, double dx, Exec exec);

// Number of eigenvalues strictly below lambda (Sturm sequence).
std::size_t sturm_count(const std::vector<double>& diag, const std::vector<double>& off_sq,
                        double lambda);

// k smallest eigenvalues by bisection on Sturm counts, one independent
// search per index.
std::vector<double> eigenvalues_bisect(const Tridiagonal& t, std::size_t k, Exec exec);

// Unit 2-norm eigenvectors for the given eigenvalues by inverse iteration
// with a pivoted tridiagonal factorization. Vectors belonging to numerically
// equal eigenvalues are orthogonalized afterwards.
std::vector<std::vector<double>> eigenvectors_inverse(const Tridiagonal& t,
                                                      const std::vector<double>& lambda,
                                                      Exec exec);

// ||T v - lambda v||_2 for each pair.
std::vector<double> residuals(const Tridiagonal& t, const std::vector<double>& lambda,
                              const std::vector<std::vector<double>>& vectors, Exec exec);

}  // namespace pdm::kernels
