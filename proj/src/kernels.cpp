#include "pdm/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "kernel_math.hpp"
#include "pdm/errors.hpp"

namespace pdm::kernels {

bool parallel_available() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

double Tridiagonal::norm_inf() const {
  const std::size_t n = diag.size();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = std::abs(diag[i]);
    if (i > 0) r += std::abs(lower[i - 1]);
    if (i + 1 < n) r += std::abs(upper[i]);
    best = std::max(best, r);
  }
  return best;
}

double Tridiagonal::max_asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < upper.size(); ++i) worst = std::max(worst, std::abs(upper[i] - lower[i]));
  return worst;
}

namespace {
bool use_omp(Exec exec) { return exec == Exec::Parallel && parallel_available(); }
}  // namespace

GridSamples sample_grid(const MassProfile& mass,
                        const std::function<double(double, double)>& potential, double x_lo,
                        double dx, std::size_t n, Exec exec) {
  if (n < 3) throw GridTooCoarse("grid needs at least one interior point");
  return use_omp(exec) ? omp::sample_grid(mass, potential, x_lo, dx, n)
                       : serial::sample_grid(mass, potential, x_lo, dx, n);
}

Tridiagonal assemble(const GridSamples& s, const OrderingParams& ordering, double dx, Exec exec) {
  return use_omp(exec) ? omp::assemble(s, ordering, dx) : serial::assemble(s, ordering, dx);
}

std::size_t sturm_count(const std::vector<double>& diag, const std::vector<double>& off_sq,
                        double lambda) {
  if (diag.empty()) return 0;
  return detail::sturm_count_impl(diag, off_sq, lambda, detail::pivot_floor(off_sq));
}

std::vector<double> eigenvalues_bisect(const Tridiagonal& t, std::size_t k, Exec exec) {
  if (k > t.size()) throw ParameterError("requested more eigenvalues than the matrix dimension");
  return use_omp(exec) ? omp::eigenvalues_bisect(t, k) : serial::eigenvalues_bisect(t, k);
}

std::vector<std::vector<double>> eigenvectors_inverse(const Tridiagonal& t,
                                                      const std::vector<double>& lambda,
                                                      Exec exec) {
  return use_omp(exec) ? omp::eigenvectors_inverse(t, lambda)
                       : serial::eigenvectors_inverse(t, lambda);
}

std::vector<double> residuals(const Tridiagonal& t, const std::vector<double>& lambda,
                              const std::vector<std::vector<double>>& vectors, Exec exec) {
  return use_omp(exec) ? omp::residuals(t, lambda, vectors)
                       : serial::residuals(t, lambda, vectors);
}

}  // namespace pdm::kernels
