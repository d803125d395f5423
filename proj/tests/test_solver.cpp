#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pdm/errors.hpp"
#include "pdm/pdm_solver.hpp"

using namespace pdm;
namespace kn = pdm::kernels;

namespace {

constexpr double kPi = std::numbers::pi;

FamilyParams fp(double b, double N, std::optional<double> j = std::nullopt, bool trig = false) {
  FamilyParams p;
  p.b = b;
  p.N = N;
  p.j = j;
  p.trig = trig;
  return p;
}

PotentialModel with_exponential_mass(Family f, const FamilyParams& p, double lambda,
                                     OrderingParams o = OrderingParams()) {
  const PotentialModel probe = build_family(f, p, MassProfile::constant(1.0), o);
  const UDomain ud = probe.default_u_domain();
  return build_family(f, p,
                      MassProfile::exponential(1.0, lambda,
                                               covering_domain(MassKind::Exponential, 1.0, lambda, ud.lo, ud.hi)),
                      o);
}

}  // namespace

TEST_CASE("tridiagonal eigenvalues by hand") {
  kn::Tridiagonal diag{{3.0, 1.0, 2.0}, {0.0, 0.0}, {0.0, 0.0}};
  const auto e = kn::eigenvalues_bisect(diag, 2, kn::Exec::Serial);
  REQUIRE(e.size() == 2);
  CHECK(e[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e[1] == doctest::Approx(2.0).epsilon(1e-14));

  kn::Tridiagonal pair{{2.0, 2.0}, {1.0}, {1.0}};
  const auto ep = kn::eigenvalues_bisect(pair, 2, kn::Exec::Serial);
  CHECK(ep[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ep[1] == doctest::Approx(3.0).epsilon(1e-14));
  const auto v = kn::eigenvectors_inverse(pair, ep, kn::Exec::Serial);
  CHECK(std::abs(v[0][0]) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(v[0][0] * v[0][1] < 0.0);
  CHECK(kn::sturm_count({2.0, 2.0}, {1.0}, 2.0) == 1);
  CHECK_THROWS_AS(kn::eigenvalues_bisect(pair, 3, kn::Exec::Serial), ParameterError);
}

TEST_CASE("particle in a box converges at second order") {
  const MassProfile m = MassProfile::constant(1.0);
  auto build = [&](const Grid& g) {
    return discretize(m, OrderingParams(), [](double, double) { return 0.0; }, g);
  };
  const SpectrumResult r = refine_until(build, Grid(0.0, 1.0, 101), 3, 1e-8);
  for (std::size_t n = 0; n < 3; ++n) {
    const double exact = std::pow((n + 1) * kPi, 2) / 2.0;
    CHECK(r.richardson[n] == doctest::Approx(exact).epsilon(1e-8));
  }
  CHECK(r.order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("assembled Hamiltonians are symmetric") {
  for (const char* o : {"ben-daniel-duke", "zhu-kroemer", "gora-williams", "li-kuhn"}) {
    const PotentialModel model = with_exponential_mass(Family::Morse, fp(-4, 4), 0.5, OrderingParams::preset(o));
    const DiscretizedHamiltonian h = discretize(model, default_grid(model, {}));
    CHECK(h.asymmetry() <= 1e-14 * h.norm());
  }
}

TEST_CASE("serial and parallel kernels agree bitwise") {
  const PotentialModel model = with_exponential_mass(Family::Morse, fp(-4, 4), 0.3, OrderingParams::preset("li-kuhn"));
  const Grid g = default_grid(model, {});
  const DiscretizedHamiltonian hs = discretize(model, g, Exec::Serial);
  const DiscretizedHamiltonian hp = discretize(model, g, Exec::Parallel);
  CHECK(hs.matrix.diag == hp.matrix.diag);
  CHECK(hs.matrix.upper == hp.matrix.upper);
  CHECK(hs.u == hp.u);
  const SpectrumResult rs = eigen_lowest(hs, 4, true, Exec::Serial);
  const SpectrumResult rp = eigen_lowest(hs, 4, true, Exec::Parallel);
  CHECK(rs.eigenvalues == rp.eigenvalues);
  CHECK(rs.eigenvectors == rp.eigenvectors);
  CHECK(rs.residuals == rp.residuals);
}

TEST_CASE("validation is deterministic") {
  const PotentialModel model = with_exponential_mass(Family::Eckart, fp(10, 1, 0.0), 0.2);
  const ValidationReport a = validate_family(model, {});
  const ValidationReport b = validate_family(model, {});
  CHECK(a.numeric == b.numeric);
  CHECK(a.offset == b.offset);
  CHECK(a.grid_n == b.grid_n);
}

TEST_CASE("numeric levels match a Numerov shooting oracle in the mapped coordinate") {
  // The mass model is isospectral with the constant-mass problem in u, which
  // the oracle solves independently of the matrix solver.
  struct Item {
    Family f;
    FamilyParams p;
  };
  for (const Item& it : {Item{Family::Morse, fp(-4, 4)}, Item{Family::PoschlTeller, fp(8, 5)},
                         Item{Family::RosenMorse, fp(2, 1, 4.0)}}) {
    const PotentialModel model = with_exponential_mass(it.f, it.p, 0.2, OrderingParams::preset("zhu-kroemer"));
    CAPTURE(model.id());
    SolverConfig cfg;
    cfg.k = 3;
    const Grid g = default_grid(model, cfg);
    const SpectrumResult r = refine_until(model, g, cfg.k, 1e-6);
    const double u_lo = model.mass().mapped_coordinate(g.x_min);
    const double u_hi = model.mass().mapped_coordinate(g.x_max);
    auto V = [&](double u) { return model.v_closed_u(u).real(); };
    for (std::size_t n = 0; n < r.richardson.size(); ++n) {
      // fine steps: the 1/u^2 wall of poschl-teller costs Numerov its fourth order
      const double e = oracle::numerov_level(V, u_lo, u_hi, static_cast<int>(n), -100.0, 100.0, 400000);
      CHECK(r.richardson[n] == doctest::Approx(e).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("every real family validates at constant mass") {
  struct Item {
    Family f;
    FamilyParams p;
  };
  const std::vector<Item> items = {
      {Family::Coulomb, fp(0, 0, 0.0)},
      {Family::Oscillator, fp(0.25, 0)},
      {Family::Morse, fp(-4, 4)},
      {Family::PoschlTeller, fp(8, 5)},
      {Family::PoschlTeller, fp(8, 5, std::nullopt, true)},
      {Family::GenPoschlTeller, fp(6, 2)},
      {Family::GenPoschlTeller, fp(6, 2, std::nullopt, true)},
      {Family::Scarf, fp(3, 3)},
      {Family::Scarf, fp(3, 3, std::nullopt, true)},
      {Family::Eckart, fp(10, 1, 0.0)},
      {Family::Eckart, fp(10, 1, 1.0, true)},
      {Family::Hulthen, fp(20, 1, 0.0)},
      {Family::RosenMorse, fp(2, 1, 4.0)},
      {Family::RosenMorse, fp(2, 1, 1.0, true)},
  };
  for (const Item& it : items) {
    const FamilySelector sel = select_family(it.f, it.p.trig);
    const PotentialModel probe = build_family(sel, it.p, MassProfile::constant(1.0), OrderingParams());
    const UDomain ud = probe.default_u_domain();
    const PotentialModel model = build_family(
        sel, it.p, MassProfile::constant(1.0, covering_domain(MassKind::Constant, 1.0, 0.0, ud.lo, ud.hi)),
        OrderingParams());
    CAPTURE(model.id());
    const ValidationReport rep = validate_family(model, {});
    CHECK(rep.pass);
    if (rep.offset_policy == OffsetPolicy::Forbidden) CHECK(rep.offset == 0.0);
  }
}

TEST_CASE("morse under an exponential mass keeps its constant-mass spectrum") {
  const PotentialModel model = with_exponential_mass(Family::Morse, fp(-4, 4), 0.2);
  const ValidationReport rep = validate_family(model, {}, true);
  CHECK(rep.pass);
  REQUIRE(rep.levels.size() == 4);
  for (const LevelReport& l : rep.levels) CHECK(l.rel_err <= 1e-3);
}

TEST_CASE("ordering sweep") {
  std::vector<OrderingParams> all;
  for (auto name : OrderingParams::preset_names()) all.push_back(OrderingParams::preset(name));
  SolverConfig cfg;

  const PotentialModel flat = build_family(Family::Morse, fp(-4, 4), MassProfile::constant(1.0, {-5, 45}),
                                           OrderingParams());
  const SweepResult trivial = ordering_sweep(flat, all, cfg);
  CHECK(trivial.max_deviation <= 1e-12);
  CHECK_FALSE(trivial.warnings.empty());

  PotentialModel model = with_exponential_mass(Family::Morse, fp(-4, 4), 0.5);
  const SweepResult sw = ordering_sweep(model, all, cfg);
  CHECK(sw.max_deviation <= 1e-3);
  model.set_suppress_vm(true);
  const SweepResult broken = ordering_sweep(model, all, cfg);
  CHECK(broken.max_deviation > 1e-2);
  CHECK_THROWS_AS(ordering_sweep(model, {all[0]}, cfg), ParameterError);
}

TEST_CASE("eigenvectors: normalization, nodes and the reduced transform") {
  const PotentialModel model =
      build_family(Family::Coulomb, fp(0, 0, 0.0), MassProfile::constant(1.0, {-1, 61}), OrderingParams());
  const SpectrumResult r = refine_until(model, default_grid(model, {}), 3, 1e-5, 6, true);
  REQUIRE(r.eigenvectors.size() == 3);
  for (const auto& psi : r.eigenvectors) {
    double s = 0.0;
    for (double v : psi) s += v * v * r.dx;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto states = eigenvector_transform(r, model);
  for (const TransformedState& st : states) CHECK(st.nodes == st.n);
  // R = -r'^2/(2 m r^2) psi with r = u, m = 1
  const std::size_t i = r.x.size() / 3;
  CHECK(states[0].reduced[i].real() ==
        doctest::Approx(-r.eigenvectors[0][i] / (2.0 * r.u[i] * r.u[i])));
}

TEST_CASE("solver errors") {
  const PotentialModel coulomb =
      build_family(Family::Coulomb, fp(0, 0, 0.0), MassProfile::constant(1.0), OrderingParams());
  CHECK_THROWS_AS(discretize(coulomb, Grid(-1.0, 1.0, 100)), SingularOnGrid);
  const PotentialModel pts =
      build_family(Family::PtScarf, fp(3, 3), MassProfile::constant(1.0, {-45, 45}), OrderingParams());
  CHECK_THROWS_AS(discretize(pts, Grid(-1.0, 1.0, 100)), ComplexModel);
  CHECK_THROWS_AS(validate_family(pts, {}), ComplexModel);
  CHECK_THROWS_AS(Grid(0.0, 1.0, 10), GridTooCoarse);
  const PotentialModel morse =
      build_family(Family::Morse, fp(-4, 4), MassProfile::constant(1.0, {-5, 45}), OrderingParams());
  CHECK_THROWS_AS(refine_until(morse, default_grid(morse, {}), 4, 1e-8, 2), BudgetExceeded);
  CHECK_THROWS_AS(eigen_lowest(discretize(morse, Grid(0.0, 5.0, 40)), 100), ParameterError);
}
