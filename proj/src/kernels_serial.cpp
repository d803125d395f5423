// Serial reference kernels.
#include <exception>

#include "kernel_math.hpp"

namespace pdm::kernels::serial {

namespace {

// Rethrows the error raised at the lowest index, so failures do not depend
// on scheduling.
void rethrow_first(const std::vector<std::exception_ptr>& errs) {
  for (const auto& e : errs) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

GridSamples sample_grid(const MassProfile& mass,
                        const std::function<double(double, double)>& potential, double x_lo,
                        double dx, std::size_t n) {
  const std::size_t ni = n - 2;
  GridSamples s;
  s.x.resize(ni);
  s.m.resize(ni);
  s.u.resize(ni);
  s.v.resize(ni);
  s.m_half.resize(n - 1);
  std::vector<std::exception_ptr> errs(n);
  const long long count = static_cast<long long>(n - 1);
  for (long long li = 0; li < count; ++li) {
    const std::size_t i = static_cast<std::size_t>(li);
    try {
      s.m_half[i] = mass.evaluate(x_lo + (static_cast<double>(i) + 0.5) * dx).m;
      if (i >= 1) {
        const double x = x_lo + static_cast<double>(i) * dx;
        s.x[i - 1] = x;
        s.m[i - 1] = mass.evaluate(x).m;
        s.u[i - 1] = mass.mapped_coordinate(x);
        s.v[i - 1] = potential(x, s.u[i - 1]);
      }
    } catch (...) {
      errs[i] = std::current_exception();
    }
  }
  rethrow_first(errs);
  return s;
}

Tridiagonal assemble(const GridSamples& s, const OrderingParams& ordering, double dx) {
  const std::size_t ni = s.x.size();
  const detail::OrderingPowers p{ordering.eta(), ordering.epsilon(), ordering.rho()};
  const double inv_h2 = 1.0 / (dx * dx);
  Tridiagonal t;
  t.diag.resize(ni);
  t.upper.resize(ni > 0 ? ni - 1 : 0);
  t.lower.resize(ni > 0 ? ni - 1 : 0);
  const long long count = static_cast<long long>(ni);
  for (long long li = 0; li < count; ++li) {
    const std::size_t i = static_cast<std::size_t>(li);
    // Interior point i sits at grid index i + 1; its half points are i and i + 1.
    t.diag[i] = detail::kinetic_diag(s.m[i], s.m_half[i], s.m_half[i + 1], p, inv_h2) + s.v[i];
    if (i + 1 < ni) {
      t.upper[i] = detail::kinetic_off(s.m[i], s.m[i + 1], s.m_half[i + 1], p, inv_h2);
      t.lower[i] = detail::kinetic_off(s.m[i + 1], s.m[i], s.m_half[i + 1], p, inv_h2);
    }
  }
  return t;
}

std::vector<double> eigenvalues_bisect(const Tridiagonal& t, std::size_t k) {
  std::vector<double> e2(t.upper.size());
  for (std::size_t i = 0; i < e2.size(); ++i) e2[i] = t.upper[i] * t.upper[i];
  const double pivmin = detail::pivot_floor(e2);
  const detail::Gershgorin g = detail::gershgorin(t);
  std::vector<double> out(k);
  const long long count = static_cast<long long>(k);
  for (long long li = 0; li < count; ++li) {
    const std::size_t i = static_cast<std::size_t>(li);
    out[i] = detail::bisect_one(t.diag, e2, g, i, pivmin);
  }
  return out;
}

std::vector<std::vector<double>> eigenvectors_inverse(const Tridiagonal& t,
                                                      const std::vector<double>& lambda) {
  const double norm = t.norm_inf();
  std::vector<std::vector<double>> out(lambda.size());
  const long long count = static_cast<long long>(lambda.size());
  for (long long li = 0; li < count; ++li) {
    const std::size_t i = static_cast<std::size_t>(li);
    out[i] = detail::inverse_one(t, lambda[i], i, norm);
  }
  detail::orthogonalize_clusters(out, lambda, norm);
  return out;
}

std::vector<double> residuals(const Tridiagonal& t, const std::vector<double>& lambda,
                              const std::vector<std::vector<double>>& vectors) {
  std::vector<double> out(lambda.size());
  const long long count = static_cast<long long>(lambda.size());
  for (long long li = 0; li < count; ++li) {
    const std::size_t i = static_cast<std::size_t>(li);
    out[i] = detail::residual_one(t, lambda[i], vectors[i]);
  }
  return out;
}

}  // namespace pdm::kernels::serial
