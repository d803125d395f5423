#include "pdm/su11_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdm/errors.hpp"

namespace pdm {

bool AlgebraSpec::on_ladder() const {
  const double n = N + j;
  return n > -1e-12 && std::abs(n - std::round(n)) < 1e-12;
}

std::string to_string(RungConvention c) {
  return c == RungConvention::AsPrinted ? "as-printed" : "derived";
}

RungConvention rung_convention_from_string(const std::string& name) {
  if (name == "as-printed") return RungConvention::AsPrinted;
  if (name == "derived") return RungConvention::Derived;
  throw ConfigError("unknown rung convention '" + name + "'; valid: as-printed, derived");
}

double rung_value(double N, RungConvention c) {
  return c == RungConvention::AsPrinted ? N : -N;
}

XJet x_jet(const MapJet& uj, const MassValues& mv) {
  const double s = std::sqrt(mv.m);
  const double u1 = s;
  const double u2 = mv.dm / (2.0 * s);
  const double u3 = mv.d2m / (2.0 * s) - mv.dm * mv.dm / (4.0 * mv.m * s);
  return {uj.r, uj.dr * u1, uj.d2r * u1 * u1 + uj.dr * u2,
          uj.d3r * u1 * u1 * u1 + 3.0 * uj.d2r * u1 * u2 + uj.dr * u3};
}

namespace {

GeneratorFunctions generators_at(const AlgebraSpec& spec, const CoordinateMap& map,
                                 const MassProfile& mass, double x, double u) {
  if (map.distance_to_singular(u, spec.a) < kSingularGuard) {
    std::ostringstream os;
    os << "map " << map.describe() << " is singular near u = " << u << " (x = " << x << ")";
    throw SingularPoint(os.str());
  }
  const MassValues mv = mass.evaluate(x);
  const XJet xj = x_jet(map.jet(u), mv);
  const double r = xj.r.real();
  const double r1 = xj.dr.real();
  const double r2 = xj.d2r.real();
  const double ar2 = spec.a * r * r;
  GeneratorFunctions out;
  out.h = r / r1;
  out.f = (1.0 + ar2) / (1.0 - ar2);
  out.c = -spec.b * r / (1.0 - ar2);
  out.g = (ar2 - 2.0) / (ar2 - 1.0) + mv.dm * r / (2.0 * mv.m * r1) -
          3.0 * r * r2 / (2.0 * r1 * r1);
  return out;
}

void require_real(const CoordinateMap& map) {
  if (map.is_complex()) {
    throw ComplexModel("map " + map.describe() + " is complex-valued; ladder operators act on real maps only");
  }
}

}  // namespace

GeneratorFunctions generator_functions(const AlgebraSpec& spec, const CoordinateMap& map,
                                       const MassProfile& mass, double x) {
  require_real(map);
  if (!mass.contains(x)) {
    std::ostringstream os;
    os << "x = " << x << " outside mass domain";
    throw DomainError(os.str());
  }
  return generators_at(spec, map, mass, x, mass.mapped_coordinate(x));
}

GridFunction GridFunction::sample(const std::function<double(double)>& fn, double x_lo,
                                  double x_hi, std::size_t n) {
  if (n < 2) throw GridTooCoarse("grid needs at least 2 points");
  GridFunction out;
  out.x_lo = x_lo;
  out.dx = (x_hi - x_lo) / static_cast<double>(n - 1);
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = fn(out.x(k));
  return out;
}

LadderGrid::LadderGrid(const AlgebraSpec& spec, const CoordinateMap& map,
                       const MassProfile& mass, double x_lo, double dx, std::size_t n)
    : x_lo_(x_lo), dx_(dx) {
  require_real(map);
  if (n < 8) throw GridTooCoarse("ladder grid needs at least 8 points");
  const double x_hi = x_lo + static_cast<double>(n - 1) * dx;
  if (!mass.contains(x_lo) || !mass.contains(x_hi)) {
    throw DomainError("ladder grid leaves the mass domain");
  }
  coeff_.resize(n);
  // u by accumulating short quadratures along the grid keeps the cost linear.
  double u = mass.mapped_coordinate(x_lo);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = x_lo + static_cast<double>(k) * dx;
    if (k > 0) {
      const double xp = x_lo + static_cast<double>(k - 1) * dx;
      u += quad::integrate([&](double t) { return std::sqrt(mass.evaluate_unchecked(t).m); },
                           xp, x, mass.quadrature_options());
    }
    coeff_[k] = generators_at(spec, map, mass, x, u);
  }
}

GridFunction LadderGrid::apply(Ladder dir, double M, const GridFunction& fn,
                               double g_shift) const {
  if (fn.size() != coeff_.size()) throw GridTooCoarse("grid function size does not match ladder grid");
  const std::size_t n = fn.size();
  const double sgn = dir == Ladder::Raise ? 1.0 : -1.0;
  const auto& v = fn.values;
  GridFunction out{fn.x_lo, fn.dx, std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    double d;
    if (k == 0) {
      d = (v[1] - v[0]) / dx_;
    } else if (k + 1 == n) {
      d = (v[n - 1] - v[n - 2]) / dx_;
    } else {
      d = (v[k + 1] - v[k - 1]) / (2.0 * dx_);
    }
    const auto& q = coeff_[k];
    out.values[k] = sgn * (q.h * d + (q.g + g_shift) * v[k]) + (q.f * M + q.c) * v[k];
  }
  return out;
}

GridFunction reduced_ladder_apply(const AlgebraSpec& spec, const CoordinateMap& map,
                                  const MassProfile& mass, double M, Ladder dir,
                                  const GridFunction& fn) {
  const LadderGrid grid(spec, map, mass, fn.x_lo, fn.dx, fn.size());
  return grid.apply(dir, M, fn);
}

namespace {

double interior_max(const std::vector<double>& v, std::size_t edge) {
  double m = 0.0;
  for (std::size_t k = edge; k + edge < v.size(); ++k) m = std::max(m, std::abs(v[k]));
  return m;
}

// J+ J- fn and J- J+ fn with rung bookkeeping: J- lowers the J0 eigenvalue
// by one, so the outer J+ acts on rung M - 1 (and symmetrically).
struct Products {
  GridFunction plus_minus;
  GridFunction minus_plus;
};

Products products(const LadderGrid& grid, double M, const GridFunction& fn,
                  double g_shift) {
  const GridFunction lo = grid.apply(Ladder::Lower, M, fn);
  const GridFunction hi = grid.apply(Ladder::Raise, M, fn, g_shift);
  return {grid.apply(Ladder::Raise, M - 1.0, lo, g_shift), grid.apply(Ladder::Lower, M + 1.0, hi)};
}

}  // namespace

double commutator_residual(const LadderGrid& grid, double N, const GridFunction& fn,
                           const AlgebraOptions& opt) {
  const double M = rung_value(N, opt.convention);
  const Products p = products(grid, M, fn, opt.perturb_g);
  std::vector<double> res(fn.size());
  for (std::size_t k = 0; k < res.size(); ++k) {
    res[k] = p.plus_minus.values[k] - p.minus_plus.values[k] + 2.0 * M * fn.values[k];
  }
  return interior_max(res, opt.edge);
}

double commutator_residual(const AlgebraSpec& spec, const CoordinateMap& map,
                           const MassProfile& mass, const GridFunction& fn,
                           const AlgebraOptions& opt) {
  const LadderGrid grid(spec, map, mass, fn.x_lo, fn.dx, fn.size());
  return commutator_residual(grid, spec.N, fn, opt);
}

double casimir_identity_residual(const LadderGrid& grid, double N, const GridFunction& fn,
                                 const AlgebraOptions& opt) {
  const double M = rung_value(N, opt.convention);
  const Products p = products(grid, M, fn, opt.perturb_g);
  std::vector<double> res(fn.size());
  for (std::size_t k = 0; k < res.size(); ++k) {
    const double v = fn.values[k];
    const double upper = -p.plus_minus.values[k] + M * M * v - M * v;
    const double lower = -p.minus_plus.values[k] + M * M * v + M * v;
    res[k] = upper - lower;
  }
  return interior_max(res, opt.edge);
}

double casimir_identity_residual(const AlgebraSpec& spec, const CoordinateMap& map,
                                 const MassProfile& mass, const GridFunction& fn,
                                 const AlgebraOptions& opt) {
  const LadderGrid grid(spec, map, mass, fn.x_lo, fn.dx, fn.size());
  return casimir_identity_residual(grid, spec.N, fn, opt);
}

double fitted_order(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

ConvergenceStudy algebra_convergence(const AlgebraSpec& spec, const CoordinateMap& map,
                                     const MassProfile& mass,
                                     const std::function<double(double)>& test_fn,
                                     double x_lo, double x_hi,
                                     const std::vector<std::size_t>& grids,
                                     const AlgebraOptions& opt) {
  ConvergenceStudy study;
  std::vector<double> dxs, com, cas;
  for (std::size_t n : grids) {
    const GridFunction fn = GridFunction::sample(test_fn, x_lo, x_hi, n);
    const LadderGrid grid(spec, map, mass, fn.x_lo, fn.dx, fn.size());
    ConvergenceRow row{n, fn.dx, commutator_residual(grid, spec.N, fn, opt),
                       casimir_identity_residual(grid, spec.N, fn, opt)};
    study.rows.push_back(row);
    dxs.push_back(row.dx);
    com.push_back(row.commutator);
    cas.push_back(row.casimir);
  }
  study.commutator_order = fitted_order(dxs, com);
  study.casimir_order = fitted_order(dxs, cas);
  return study;
}

}  // namespace pdm
