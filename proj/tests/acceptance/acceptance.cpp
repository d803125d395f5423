// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Expected values are closed forms written out here, not read from the library.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pdm/pdm_solver.hpp"
#include "pdm/report.hpp"
#include "pdm/su11_algebra.hpp"

using namespace pdm;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void verdict(int id, const std::string& name, bool ok, const std::string& detail, double seconds) {
  std::printf("%s %d %s: %s (%.2f s)\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

FamilyParams fp(double b, double N, std::optional<double> j = std::nullopt) {
  FamilyParams p;
  p.b = b;
  p.N = N;
  p.j = j;
  return p;
}

MassProfile catalog_mass(MassKind kind, double shape, const UDomain& ud) {
  const MassDomain d = covering_domain(kind, 1.0, shape, ud.lo, ud.hi);
  switch (kind) {
    case MassKind::Exponential: return MassProfile::exponential(1.0, shape, d);
    case MassKind::Soliton: return MassProfile::soliton(1.0, shape, d);
    case MassKind::Rational: return MassProfile::rational(1.0, shape, d);
    default: return MassProfile::constant(1.0, d);
  }
}

PotentialModel model_with(Family f, const FamilyParams& p, MassKind kind, double shape,
                          OrderingParams o = OrderingParams()) {
  const PotentialModel probe = build_family(f, p, MassProfile::constant(1.0), o);
  return build_family(f, p, catalog_mass(kind, shape, probe.default_u_domain()), o);
}

// Lowest k refined levels, compared level by level with `expect`.
double worst_rel(const std::vector<double>& got, const std::vector<double>& expect) {
  if (got.size() < expect.size()) return INFINITY;
  double w = 0.0;
  for (std::size_t i = 0; i < expect.size(); ++i) {
    w = std::max(w, std::abs(got[i] - expect[i]) / std::abs(expect[i]));
  }
  return w;
}

const std::vector<double> kCoulomb = {-0.5, -0.125, -1.0 / 18.0};
const std::vector<double> kMorse = {-49.0 / 8, -25.0 / 8, -9.0 / 8, -1.0 / 8};

void coulomb_anchor() {
  const auto t0 = Clock::now();
  const PotentialModel m = model_with(Family::Coulomb, fp(0, 0, 0.0), MassKind::Constant, 0.0);
  SolverConfig cfg;
  cfg.u_domain = UDomain{0.0, 60.0};
  cfg.k = 3;
  const ValidationReport rep = validate_family(m, cfg);
  const double err = worst_rel(rep.numeric, kCoulomb);
  const bool ok = err <= 1e-4 && rep.offset_policy == OffsetPolicy::Forbidden && rep.offset == 0.0;
  const double s = since(t0);
  verdict(1, "coulomb anchor", ok && s < 10.0,
          "max rel err " + sci(err) + ", offset " + sci(rep.offset) + ", grid " + std::to_string(rep.grid_n), s);
}

void morse_anchor() {
  const auto t0 = Clock::now();
  const PotentialModel m = model_with(Family::Morse, fp(-4, 4), MassKind::Constant, 0.0);
  const SpectrumResult r = refine_until(m, default_grid(m, {}), 4, 1e-6);
  const double err = worst_rel(r.richardson, kMorse);
  // count bound levels on the finest grid against the far-end asymptote
  const Grid g = default_grid(m, {});
  const Grid fine(g.x_min, g.x_max, r.grids.back());
  const double threshold = m.v(g.x_max);
  const SpectrumResult many = eigen_lowest(discretize(m, fine), 8);
  int bound = 0;
  for (double e : many.eigenvalues) bound += e < threshold;
  const double s = since(t0);
  verdict(2, "morse anchor", err <= 1e-4 && bound == 4 && s < 10.0,
          "max rel err " + sci(err) + ", bound levels " + std::to_string(bound), s);
}

void oscillator_spacing() {
  const auto t0 = Clock::now();
  const PotentialModel m = model_with(Family::Oscillator, fp(0.25, 0), MassKind::Constant, 0.0);
  SolverConfig cfg;
  cfg.k = 5;
  const ValidationReport rep = validate_family(m, cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < rep.numeric.size(); ++i) {
    worst = std::max(worst, std::abs(rep.numeric[i + 1] - rep.numeric[i] - 0.5) / 0.5);
  }
  const bool ok = rep.numeric.size() == 5 && worst <= 1e-4;
  verdict(3, "oscillator spacing", ok, "max rel gap err " + sci(worst) + ", offset " + sci(rep.offset),
          since(t0));
}

void master_consistency() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<Family, FamilyParams>> fams = {
      {Family::Coulomb, fp(0, 0, 0.0)},  {Family::Oscillator, fp(0.25, 0)},
      {Family::Morse, fp(-4, 4)},        {Family::PoschlTeller, fp(8, 5)},
      {Family::GenPoschlTeller, fp(6, 2)}, {Family::Scarf, fp(3, 3)},
      {Family::Eckart, fp(10, 1, 0.0)},  {Family::Hulthen, fp(20, 1, 0.0)},
      {Family::RosenMorse, fp(2, 1, 4.0)},
  };
  double worst_const = 0.0, worst_var = 0.0;
  for (const auto& [f, p] : fams) {
    worst_const = std::max(worst_const, consistency_check(model_with(f, p, MassKind::Constant, 0.0), 1000));
    for (MassKind k : {MassKind::Exponential, MassKind::Soliton}) {
      worst_var = std::max(worst_var, consistency_check(model_with(f, p, k, 0.2), 1000));
    }
  }
  const double s = since(t0);
  verdict(4, "master-formula consistency", worst_const <= 1e-10 && worst_var <= 1e-8 && s < 30.0,
          "constant " + sci(worst_const) + ", varying " + sci(worst_var), s);
}

void ordering_independence() {
  const auto t0 = Clock::now();
  std::vector<OrderingParams> presets;
  for (auto name : OrderingParams::preset_names()) presets.push_back(OrderingParams::preset(name));
  SolverConfig cfg;
  cfg.k = 4;
  double worst = 0.0, control = INFINITY;
  for (const auto& [f, p] : {std::pair{Family::Morse, fp(-4, 4)}, std::pair{Family::Eckart, fp(10, 1, 0.0)}}) {
    for (const auto& [kind, shape] : {std::pair{MassKind::Exponential, 0.5}, std::pair{MassKind::Rational, 2.0}}) {
      PotentialModel m = model_with(f, p, kind, shape);
      worst = std::max(worst, ordering_sweep(m, presets, cfg).max_deviation);
      m.set_suppress_vm(true);
      control = std::min(control, ordering_sweep(m, presets, cfg).max_deviation);
    }
  }
  const double s = since(t0);
  verdict(5, "ordering independence", worst <= 1e-3 && control > 1e-2 && s < 60.0,
          "max deviation " + sci(worst) + ", weakest suppressed-V_m control " + sci(control), s);
}

void mass_isospectrality() {
  const auto t0 = Clock::now();
  const PotentialModel c = model_with(Family::Coulomb, fp(0, 0, 0.0), MassKind::Exponential, 0.2);
  const PotentialModel m = model_with(Family::Morse, fp(-4, 4), MassKind::Exponential, 0.2);
  const double ec = worst_rel(refine_until(c, default_grid(c, {}), 3, 1e-6).richardson, kCoulomb);
  const double em = worst_rel(refine_until(m, default_grid(m, {}), 4, 1e-6).richardson, kMorse);
  verdict(6, "mass isospectrality", ec <= 1e-3 && em <= 1e-3,
          "coulomb " + sci(ec) + ", morse " + sci(em), since(t0));
}

void algebra_verification() {
  const auto t0 = Clock::now();
  const std::vector<CoordinateMap> maps = {
      CoordinateMap::identity(),          CoordinateMap::half_square(),
      CoordinateMap::exponential(1.0),    CoordinateMap(MapKind::CothHalf, 1.0),
      CoordinateMap(MapKind::CothQuarter, 1.0), CoordinateMap(MapKind::CotHalf, 0.3),
  };
  const std::vector<MassProfile> masses = {MassProfile::constant(1.0), MassProfile::rational(1.0, 2.0),
                                           MassProfile::exponential(1.0, 0.3), MassProfile::soliton(1.0, 0.3)};
  const std::vector<std::size_t> grids = {200, 400, 800, 1600};
  auto bump = [](double x) { return std::exp(-(x - 3.25) * (x - 3.25) / (2 * 1.1 * 1.1)); };
  double lo = INFINITY, hi = -INFINITY;
  for (const CoordinateMap& map : maps) {
    for (const MassProfile& mass : masses) {
      const double o = algebra_convergence({0.0, 1.0, 0.0, 1.0}, map, mass, bump, 0.5, 6.0, grids).commutator_order;
      lo = std::min(lo, o);
      hi = std::max(hi, o);
    }
  }
  AlgebraOptions bad;
  bad.perturb_g = 0.1;
  const double broken = algebra_convergence({0.0, 1.0, 0.0, 1.0}, CoordinateMap::identity(),
                                            MassProfile::exponential(1.0, 0.3), bump, 0.5, 6.0, grids, bad)
                            .commutator_order;
  const bool control_fails = !(broken >= 1.8 && broken <= 2.2);
  verdict(7, "algebra verification", lo >= 1.8 && hi <= 2.2 && control_fails,
          "orders in [" + sci(lo) + ", " + sci(hi) + "], perturbed-g order " + sci(broken), since(t0));
}

void quadrature_oracle() {
  const auto t0 = Clock::now();
  const MassProfile c = MassProfile::constant(1.7);
  const MassProfile e = MassProfile::exponential(1.3, 0.2);
  const MassProfile s = MassProfile::soliton(0.8, 0.2);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double x = -9.5 + static_cast<double>(i);
    auto rel = [](double got, double want) { return std::abs(got - want) / std::abs(want); };
    worst = std::max(worst, rel(c.mapped_coordinate(x), oracle::u_constant(1.7, x)));
    worst = std::max(worst, rel(e.mapped_coordinate(x), oracle::u_exponential(1.3, 0.2, x)));
    worst = std::max(worst, rel(s.mapped_coordinate(x), oracle::u_soliton(0.8, 0.2, x)));
  }
  verdict(8, "quadrature oracle", worst <= 1e-10, "max rel err " + sci(worst), since(t0));
}

void infrastructure() {
  const auto t0 = Clock::now();
  double asym = 0.0;
  for (auto name : OrderingParams::preset_names()) {
    for (const auto& [kind, shape] : {std::pair{MassKind::Exponential, 0.5}, std::pair{MassKind::Soliton, 0.2},
                                      std::pair{MassKind::Rational, 2.0}}) {
      const PotentialModel m = model_with(Family::Morse, fp(-4, 4), kind, shape, OrderingParams::preset(name));
      const DiscretizedHamiltonian h = discretize(m, default_grid(m, {}));
      asym = std::max(asym, h.asymmetry() / h.norm());
    }
  }

  // -psi''/2 on [0, 1]: E_n = (n pi)^2 / 2
  const MassProfile unit = MassProfile::constant(1.0);
  auto box = [&](const Grid& g) { return discretize(unit, OrderingParams(), [](double, double) { return 0.0; }, g); };
  const SpectrumResult r = refine_until(box, Grid(0.0, 1.0, 101), 3, 1e-8);
  double box_err = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const double exact = std::pow(n * std::numbers::pi, 2) / 2.0;
    box_err = std::max(box_err, std::abs(r.richardson[n - 1] - exact) / exact);
  }

  auto report_text = [] {
    const PotentialModel m = model_with(Family::Eckart, fp(10, 1, 0.0), MassKind::Exponential, 0.2,
                                        OrderingParams::preset("li-kuhn"));
    const ValidationReport v = validate_family(m, {});
    return report::validation_table(v, 17).csv() + report::validation_json(v, 17).dump();
  };
  const bool deterministic = report_text() == report_text();

  const bool ok = asym <= 1e-14 && std::abs(r.order - 2.0) <= 0.2 && box_err <= 1e-8 && deterministic;
  verdict(9, "infrastructure", ok,
          "asymmetry " + sci(asym) + " of norm, box order " + sci(r.order) + " err " + sci(box_err) +
              ", reports " + (deterministic ? "identical" : "differ"),
          since(t0));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria = {
      coulomb_anchor,        morse_anchor,       oscillator_spacing,   master_consistency, ordering_independence,
      mass_isospectrality, algebra_verification, quadrature_oracle, infrastructure,
  };
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      verdict(static_cast<int>(i + 1), "criterion", false, std::string("threw: ") + e.what(), 0.0);
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
