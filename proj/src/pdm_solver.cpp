#include "pdm/pdm_solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "pdm/errors.hpp"
#include "pdm/format.hpp"

namespace pdm {

Grid::Grid(double lo, double hi, std::size_t count) : x_min(lo), x_max(hi), n(count) {
  if (!(lo < hi)) throw ParameterError("grid requires x_min < x_max");
  if (count < 32) throw GridTooCoarse("grid requires at least 32 points, got " + std::to_string(count));
}

DiscretizedHamiltonian discretize(const MassProfile& mass, const OrderingParams& ordering,
                                  const std::function<double(double, double)>& potential,
                                  const Grid& grid, Exec exec) {
  if (!mass.contains(grid.x_min) || !mass.contains(grid.x_max)) {
    throw DomainError("grid [" + fmt_num(grid.x_min) + ", " + fmt_num(grid.x_max) +
                      "] leaves the mass domain");
  }
  kernels::GridSamples s = kernels::sample_grid(mass, potential, grid.x_min, grid.dx(), grid.n, exec);
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    if (!std::isfinite(s.v[i])) {
      throw SingularOnGrid("potential is not finite at x = " + fmt_num(s.x[i]));
    }
  }
  DiscretizedHamiltonian h{kernels::assemble(s, ordering, grid.dx(), exec),
                           grid,
                           std::move(s.x),
                           std::move(s.m),
                           std::move(s.u),
                           std::move(s.v),
                           ordering,
                           mass.id(),
                           "custom"};
  return h;
}

DiscretizedHamiltonian discretize(const PotentialModel& model, const Grid& grid, Exec exec) {
  if (model.is_complex()) {
    throw ComplexModel(model.name() + ": complex family: analytic evaluation only");
  }
  const MassProfile& mass = model.mass();
  if (!mass.contains(grid.x_min) || !mass.contains(grid.x_max)) {
    throw DomainError("grid [" + fmt_num(grid.x_min) + ", " + fmt_num(grid.x_max) +
                      "] leaves the mass domain of " + mass.id());
  }
  // Interior points must keep one spacing from every singular point.
  const double u_lo = mass.mapped_coordinate(grid.x_min);
  const double u_hi = mass.mapped_coordinate(grid.x_max);
  const double dx = grid.dx();
  for (double us : model.singular_u(u_lo, u_hi)) {
    const double xs = mass.inverse_mapped(us);
    const double k = std::round((xs - grid.x_min) / dx);
    if (k < 1.0 || k > static_cast<double>(grid.n - 2)) continue;
    const double nearest = grid.x(static_cast<std::size_t>(k));
    const double gap = std::min({std::abs(nearest - xs), xs - grid.x_min, grid.x_max - xs});
    if (gap < dx * (1.0 - 1e-9)) {
      throw SingularOnGrid(model.name() + ": grid point x = " + fmt_num(nearest) +
                           " lies within one spacing of a singular point at x = " + fmt_num(xs));
    }
  }
  auto pot = [&model](double x, double u) { return model.v_at(x, u).real(); };
  DiscretizedHamiltonian h = discretize(mass, model.ordering(), pot, grid, exec);
  h.model_id = model.id();
  return h;
}

SpectrumResult eigen_lowest(const DiscretizedHamiltonian& h, std::size_t k, bool keep_vectors,
                            Exec exec) {
  if (k == 0) throw ParameterError("k must be positive");
  if (k > h.dimension()) {
    throw ParameterError("k = " + std::to_string(k) + " exceeds the matrix dimension " +
                         std::to_string(h.dimension()));
  }
  SpectrumResult r;
  r.matrix_norm = h.norm();
  r.eigenvalues = kernels::eigenvalues_bisect(h.matrix, k, exec);
  auto vecs = kernels::eigenvectors_inverse(h.matrix, r.eigenvalues, exec);
  r.residuals = kernels::residuals(h.matrix, r.eigenvalues, vecs, exec);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(r.residuals[i] <= kResidualFactor * r.matrix_norm)) {
      std::ostringstream os;
      os << "eigenpair " << i << " residual " << fmt_num(r.residuals[i], 6) << " exceeds "
         << fmt_num(kResidualFactor, 3) << " * ||H|| after 4 inverse iterations";
      throw ConvergenceFailure(os.str());
    }
  }
  r.dx = h.grid.dx();
  r.grids = {h.grid.n};
  r.history = {r.eigenvalues};
  r.richardson = r.eigenvalues;
  if (keep_vectors) {
    const double scale = 1.0 / std::sqrt(r.dx);
    for (auto& v : vecs) {
      for (double& c : v) c *= scale;
    }
    r.eigenvectors = std::move(vecs);
    r.x = h.x;
    r.u = h.u;
  }
  return r;
}

namespace {

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// max_i |a_i - b_i| / max(1, |a_i|)
double scaled_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(a[i])));
  return d;
}

}  // namespace

SpectrumResult refine_until(const std::function<DiscretizedHamiltonian(const Grid&)>& build,
                            const Grid& base, std::size_t k, double target_tol, int max_doublings,
                            double threshold, bool keep_vectors, Exec exec) {
  if (!(target_tol >= 1e-8)) throw ParameterError("target_tol must be at least 1e-8");
  Grid grid = base;
  SpectrumResult last;
  std::vector<std::size_t> grids;
  std::vector<std::vector<double>> history;
  std::vector<std::string> warnings;
  std::vector<std::vector<double>> rich;
  auto extrapolate = [](const std::vector<double>& fine, const std::vector<double>& coarse) {
    std::vector<double> r(std::min(fine.size(), coarse.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = fine[i] + (fine[i] - coarse[i]) / 3.0;
    return r;
  };
  for (int it = 0;; ++it) {
    const DiscretizedHamiltonian h = build(grid);
    std::size_t kb = k;
    if (std::isfinite(threshold)) {
      std::vector<double> e2(h.matrix.upper.size());
      for (std::size_t i = 0; i < e2.size(); ++i) e2[i] = h.matrix.upper[i] * h.matrix.upper[i];
      kb = std::min(k, kernels::sturm_count(h.matrix.diag, e2, threshold));
    }
    kb = std::min(kb, h.dimension());
    if (kb == 0) throw ConvergenceFailure("no levels below the continuum threshold " + fmt_num(threshold));
    last = eigen_lowest(h, kb, keep_vectors, exec);
    grids.push_back(grid.n);
    history.push_back(last.eigenvalues);
    const std::size_t used = history.size();
    double change = INFINITY;
    if (used >= 2) rich.push_back(extrapolate(history[used - 1], history[used - 2]));
    if (rich.size() >= 2) {
      change = scaled_diff(rich[rich.size() - 1], rich[rich.size() - 2]);
      if (change < target_tol) break;
    }
    if (it >= max_doublings) {
      std::ostringstream os;
      os << "extrapolated eigenvalues still changing by " << fmt_num(change, 4) << " > "
         << fmt_num(target_tol, 4) << " after " << max_doublings << " doublings (n = " << grid.n << ")";
      throw BudgetExceeded(os.str());
    }
    grid = grid.doubled();
  }
  const std::size_t g = history.size();
  const auto& e2 = history[g - 1];
  const auto& e1 = history[g - 2];
  const auto& e0 = history[g - 3];
  const std::size_t kk = std::min({e0.size(), e1.size(), e2.size()});
  if (kk < k) {
    warnings.push_back("only " + std::to_string(kk) + " of " + std::to_string(k) +
                       " requested levels lie below the continuum threshold " + fmt_num(threshold) +
                       "; truncated");
  }
  last.eigenvalues.resize(kk);
  last.residuals.resize(kk);
  if (!last.eigenvectors.empty()) last.eigenvectors.resize(kk);
  last.richardson.assign(kk, 0.0);
  for (std::size_t i = 0; i < kk; ++i) last.richardson[i] = e2[i] + (e2[i] - e1[i]) / 3.0;
  const double d01 = max_diff(std::vector<double>(e0.begin(), e0.begin() + kk),
                              std::vector<double>(e1.begin(), e1.begin() + kk));
  const double d12 = max_diff(std::vector<double>(e1.begin(), e1.begin() + kk),
                              std::vector<double>(e2.begin(), e2.begin() + kk));
  last.order = (d01 > 0.0 && d12 > 0.0) ? std::log2(d01 / d12) : 0.0;
  last.last_change = d12;
  last.grids = std::move(grids);
  last.history = std::move(history);
  last.warnings = std::move(warnings);
  return last;
}

SpectrumResult refine_until(const PotentialModel& model, const Grid& base, std::size_t k,
                            double target_tol, int max_doublings, bool keep_vectors, Exec exec) {
  auto build = [&model, exec](const Grid& g) { return discretize(model, g, exec); };
  return refine_until(build, base, k, target_tol, max_doublings,
                      model.descriptor().continuum_threshold, keep_vectors, exec);
}

Grid default_grid(const PotentialModel& model, const SolverConfig& cfg) {
  const XDomain xd = x_domain_for(model, cfg.u_domain);
  return Grid(xd.lo, xd.hi, cfg.n);
}

double default_tolerance(const PotentialModel& model) {
  return model.mass().is_constant() ? 1e-4 : 1e-3;
}

ValidationReport validate_family(const PotentialModel& model, const SolverConfig& cfg,
                                 bool strict) {
  if (model.is_complex()) {
    throw ComplexModel(model.name() + ": complex family: analytic evaluation only");
  }
  ValidationReport rep;
  rep.family = model.name();
  rep.ordering = model.ordering().label();
  rep.model_id = model.id();
  rep.offset_policy = model.descriptor().offset;
  rep.tolerance = cfg.tolerance.value_or(default_tolerance(model));

  const XDomain xd = x_domain_for(model, cfg.u_domain);
  if (xd.clamped_lo || xd.clamped_hi) {
    rep.warnings.push_back("u-domain clamped to the mass domain [" + fmt_num(xd.lo) + ", " +
                           fmt_num(xd.hi) + "]");
  }
  const int n_an = model.descriptor().bound_count.value_or(static_cast<int>(cfg.k));
  const std::vector<Level> an = model.levels(n_an);
  const Grid base(xd.lo, xd.hi, cfg.n);
  const SpectrumResult res = refine_until(model, base, an.size(), cfg.target_tol,
                                          cfg.max_doublings, false, cfg.exec);
  rep.numeric = res.richardson;
  rep.order = res.order;
  rep.grid_n = res.grids.back();
  rep.warnings.insert(rep.warnings.end(), res.warnings.begin(), res.warnings.end());

  if (rep.offset_policy == OffsetPolicy::Fitted) {
    const std::size_t m = std::min(an.size(), rep.numeric.size());
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += rep.numeric[i] - an[i].E.real();
    rep.offset = m > 0 ? s / static_cast<double>(m) : 0.0;
  }
  rep.pass = !an.empty();
  std::string unmatched;
  for (const Level& lv : an) {
    const double ea = lv.E.real();
    const double target = ea + rep.offset;
    double best = INFINITY, best_e = NAN;
    for (double e : rep.numeric) {
      if (std::abs(e - target) < best) {
        best = std::abs(e - target);
        best_e = e;
      }
    }
    LevelReport lr{lv.n, ea, best_e, best, best / std::max(std::abs(ea), 1e-12), false};
    lr.pass = lr.rel_err <= rep.tolerance;
    if (!lr.pass) {
      rep.pass = false;
      unmatched += (unmatched.empty() ? "" : ", ") + std::string("n=") + std::to_string(lv.n) +
                   " (E=" + fmt_num(ea) + ")";
    }
    rep.levels.push_back(lr);
  }
  if (strict && !rep.pass) {
    throw MatchFailure(model.name() + ": unmatched analytic levels: " + unmatched);
  }
  return rep;
}

SweepResult ordering_sweep(const PotentialModel& model, const std::vector<OrderingParams>& orderings,
                           const SolverConfig& cfg) {
  if (orderings.size() < 2) throw ParameterError("ordering sweep needs at least 2 orderings");
  if (model.is_complex()) {
    throw ComplexModel(model.name() + ": complex family: analytic evaluation only");
  }
  SweepResult out;
  out.orderings = orderings;
  if (model.mass().is_constant()) {
    out.warnings.push_back("constant mass: ordering independence holds trivially");
  }
  const Grid base = default_grid(model, cfg);
  const std::size_t count = orderings.size();
  out.spectra.resize(count);
  std::vector<std::exception_ptr> errs(count);
  const bool outer = cfg.exec == Exec::Parallel && kernels::parallel_available();
  const long long lc = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) if (outer)
  for (long long li = 0; li < lc; ++li) {
    const std::size_t i = static_cast<std::size_t>(li);
    try {
      const PotentialModel mo = with_ordering(model, orderings[i]);
      out.spectra[i] = refine_until(mo, base, cfg.k, cfg.target_tol, cfg.max_doublings, false,
                                    outer ? Exec::Serial : cfg.exec);
    } catch (...) {
      errs[i] = std::current_exception();
    }
  }
  for (const auto& e : errs) {
    if (e) std::rethrow_exception(e);
  }
  out.levels = cfg.k;
  for (const auto& s : out.spectra) out.levels = std::min(out.levels, s.richardson.size());
  out.deviation.assign(count, std::vector<double>(count, 0.0));
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = 0; b < count; ++b) {
      double d = 0.0;
      for (std::size_t l = 0; l < out.levels; ++l) {
        d = std::max(d, std::abs(out.spectra[a].richardson[l] - out.spectra[b].richardson[l]));
      }
      out.deviation[a][b] = d;
      out.max_deviation = std::max(out.max_deviation, d);
    }
  }
  return out;
}

int count_nodes(const std::vector<double>& f) {
  double peak = 0.0;
  for (double v : f) peak = std::max(peak, std::abs(v));
  const double floor = 1e-6 * peak;
  int nodes = 0;
  int sign = 0;
  for (double v : f) {
    if (std::abs(v) <= floor) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (sign != 0 && s != sign) ++nodes;
    sign = s;
  }
  return nodes;
}

std::vector<TransformedState> eigenvector_transform(const SpectrumResult& result,
                                                    const PotentialModel& model) {
  if (result.eigenvectors.empty()) {
    throw ParameterError("eigenvector transform needs retained eigenvectors");
  }
  const CoordinateMap& map = model.selector().map;
  std::vector<TransformedState> out;
  for (std::size_t s = 0; s < result.eigenvectors.size(); ++s) {
    TransformedState st{static_cast<int>(s), result.eigenvalues[s], result.eigenvectors[s], {}, 0};
    st.reduced.resize(st.psi.size());
    for (std::size_t i = 0; i < st.psi.size(); ++i) {
      const double x = result.x[i];
      const MassValues mv = model.mass().evaluate(x);
      const XJet xj = x_jet(map.jet(result.u[i]), mv);
      if (std::abs(xj.r) == 0.0 || !std::isfinite(std::abs(xj.r))) {
        throw SingularOnGrid("r vanishes or diverges at x = " + fmt_num(x));
      }
      st.reduced[i] = -xj.dr * xj.dr / (2.0 * mv.m * xj.r * xj.r) * st.psi[i];
    }
    st.nodes = count_nodes(st.psi);
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace pdm
