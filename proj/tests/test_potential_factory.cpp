#include <doctest.h>

#include <cmath>

#include "pdm/errors.hpp"
#include "pdm/potential_factory.hpp"

using namespace pdm;

namespace {

struct Case {
  Family family;
  FamilyParams params;
};

FamilyParams fp(double b, double N, std::optional<double> j = std::nullopt, bool trig = false) {
  FamilyParams p;
  p.b = b;
  p.N = N;
  p.j = j;
  p.trig = trig;
  return p;
}

const std::vector<Case> kHyperbolic = {
    {Family::Coulomb, fp(0, 0, 0.0)},        {Family::Oscillator, fp(0.25, 0)},
    {Family::Morse, fp(-4, 4)},              {Family::PoschlTeller, fp(8, 5)},
    {Family::GenPoschlTeller, fp(6, 2)},     {Family::Scarf, fp(3, 3)},
    {Family::Eckart, fp(10, 1, 0.0)},        {Family::Hulthen, fp(20, 1, 0.0)},
    {Family::RosenMorse, fp(2, 1, 4.0)},
};

const std::vector<Case> kTrig = {
    {Family::PoschlTeller, fp(8, 5, std::nullopt, true)},
    {Family::GenPoschlTeller, fp(6, 2, std::nullopt, true)},
    {Family::Scarf, fp(3, 3, std::nullopt, true)},
    {Family::Eckart, fp(10, 1, 1.0, true)},
    {Family::RosenMorse, fp(2, 1, 1.0, true)},
};

MassProfile covering(MassKind kind, const PotentialModel& probe) {
  const UDomain ud = probe.default_u_domain();
  const MassDomain d = covering_domain(kind, 1.0, 0.2, ud.lo, ud.hi);
  switch (kind) {
    case MassKind::Exponential: return MassProfile::exponential(1.0, 0.2, d);
    case MassKind::Soliton: return MassProfile::soliton(1.0, 0.2, d);
    case MassKind::Rational: return MassProfile::rational(1.0, 0.2, d);
    default: return MassProfile::constant(1.0, d);
  }
}

PotentialModel make(const Case& c, MassKind kind,
                    OrderingParams ordering = OrderingParams::preset("zhu-kroemer")) {
  const PotentialModel probe = build_family(c.family, c.params, MassProfile::constant(1.0), ordering);
  return build_family(c.family, c.params, covering(kind, probe), ordering);
}

}  // namespace

TEST_CASE("family catalog") {
  int trig = 0, complex = 0;
  for (Family f : all_families()) {
    CHECK(family_from_string(to_string(f)) == f);
    const FamilyInfo info = family_info(f);
    CHECK_FALSE(info.potential.empty());
    CHECK(info.trig == !info.potential_trig.empty());
    trig += info.trig;
    complex += info.complex;
  }
  CHECK(all_families().size() == 10);
  CHECK(trig == 5);
  CHECK(complex == 1);
  CHECK_THROWS_AS(family_from_string("yukawa"), ConfigError);
  CHECK_THROWS_AS(select_family(Family::Coulomb, true), ParameterError);
}

TEST_CASE("master formula by hand") {
  // a = 0, r = u, m = 1, j = 0, b = 1, N = 1: (1/2 + 1/r) r'^2 at r = 2 gives 1.
  const MasterParams p{0.0, 1.0, 1.0, 0.0};
  const cplx v = master_potential(p, CoordinateMap::identity(), MassProfile::constant(1.0),
                                  OrderingParams(), 2.0);
  CHECK(v.real() == doctest::Approx(1.0));
  CHECK(v.imag() == 0.0);
}

TEST_CASE("closed forms agree with the master formula for every real family") {
  for (const Case& c : kHyperbolic) {
    CAPTURE(to_string(c.family));
    CHECK(consistency_check(make(c, MassKind::Constant)) <= 1e-10);
    CHECK(consistency_check(make(c, MassKind::Exponential)) <= 1e-8);
    CHECK(consistency_check(make(c, MassKind::Soliton)) <= 1e-8);
  }
}

TEST_CASE("trigonometric variants agree with the master formula inside the cell") {
  for (const Case& c : kTrig) {
    for (MassKind kind : {MassKind::Constant, MassKind::Exponential}) {
      const PotentialModel m = make(c, kind);
      CAPTURE(m.id());
      const XDomain xd = x_domain_for(m);
      const double pad = 0.05 * (xd.hi - xd.lo);
      CHECK(consistency_check(m, xd.lo + pad, xd.hi - pad, 1000) <= 1e-8);
    }
  }
}

TEST_CASE("a = 0 maps satisfy the lambda condition") {
  std::vector<double> us;
  for (double u = 0.3; u < 5.0; u += 0.37) us.push_back(u);
  for (Family f : {Family::Coulomb, Family::Oscillator, Family::Morse}) {
    CHECK(lambda_condition_residual(select_family(f, false, 1.3), us) <= 1e-13);
  }
  CHECK_THROWS_AS(lambda_condition_residual(select_family(Family::Eckart, false), us), WrongClass);
}

TEST_CASE("analytic spectra") {
  const MassProfile m = MassProfile::constant(1.0);
  const PotentialModel coulomb = build_family(Family::Coulomb, fp(0, 0), m, OrderingParams());
  CHECK(coulomb.analytic_energy(0).real() == doctest::Approx(-0.5));
  CHECK(coulomb.analytic_energy(2).real() == doctest::Approx(-1.0 / 18.0));
  CHECK(coulomb.descriptor().offset == OffsetPolicy::Forbidden);

  const PotentialModel morse = build_family(Family::Morse, fp(-4, 4), m, OrderingParams());
  REQUIRE(morse.descriptor().bound_count == 4);
  const double expect[] = {-49.0 / 8, -25.0 / 8, -9.0 / 8, -1.0 / 8};
  for (int n = 0; n < 4; ++n) CHECK(morse.analytic_energy(n).real() == doctest::Approx(expect[n]));
  CHECK_THROWS_AS(morse.level(4), IndexError);

  const PotentialModel osc = build_family(Family::Oscillator, fp(0.25, 0), m, OrderingParams());
  for (int n = 0; n < 5; ++n) {
    CHECK((osc.analytic_energy(n + 1) - osc.analytic_energy(n)).real() == doctest::Approx(0.5));
  }
}

TEST_CASE("scarf, generalized Poschl-Teller and PT-symmetric scarf share a spectrum") {
  const MassProfile m = MassProfile::constant(1.0);
  const PotentialModel scarf = build_family(Family::Scarf, fp(8, 3), m, OrderingParams());
  const PotentialModel gpt = build_family(Family::GenPoschlTeller, fp(8, 3), m, OrderingParams());
  const PotentialModel pts = build_family(Family::PtScarf, fp(8, 3), m, OrderingParams());
  REQUIRE(scarf.descriptor().bound_count == gpt.descriptor().bound_count);
  REQUIRE(scarf.descriptor().bound_count == pts.descriptor().bound_count);
  for (int n = 0; n < *scarf.descriptor().bound_count; ++n) {
    CHECK(scarf.analytic_energy(n).real() == doctest::Approx(gpt.analytic_energy(n).real()));
    CHECK(scarf.analytic_energy(n).real() == doctest::Approx(pts.analytic_energy(n).real()));
  }
}

TEST_CASE("complex family evaluates analytically only") {
  const PotentialModel pts =
      build_family(Family::PtScarf, fp(3, 3), MassProfile::constant(1.0), OrderingParams());
  CHECK(pts.is_complex());
  CHECK(pts.v_complex(0.7).imag() != 0.0);
  CHECK_THROWS_AS(pts.v(0.7), ComplexModel);
}

TEST_CASE("parameter ranges are enforced") {
  const MassProfile m = MassProfile::constant(1.0);
  CHECK_THROWS_AS(build_family(Family::Morse, fp(4, 4), m, OrderingParams()), ParameterError);
  CHECK_THROWS_AS(build_family(Family::Coulomb, fp(0, 0, -1.0), m, OrderingParams()), ParameterError);
  CHECK_THROWS_AS(build_family(Family::RosenMorse, fp(2, 1, 0.0), m, OrderingParams()), ParameterError);
  CHECK_THROWS_AS(build_family(Family::PoschlTeller, fp(0.5, 0, std::nullopt, true), m, OrderingParams()),
                  ParameterError);
  CHECK_THROWS_AS(build_family(Family::Hulthen, fp(1, 1, 0.0), m, OrderingParams()), ParameterError);
}

TEST_CASE("changing the ordering moves only the mass term") {
  const Case c{Family::Morse, fp(-4, 4)};
  const PotentialModel bdd = make(c, MassKind::Exponential, OrderingParams::preset("ben-daniel-duke"));
  const PotentialModel zk = with_ordering(bdd, OrderingParams::preset("zhu-kroemer"));
  const PotentialModel gw = with_ordering(bdd, OrderingParams::preset("gora-williams"));
  for (double x : {-1.0, 0.5, 2.0}) {
    const MassValues mv = bdd.mass().evaluate(x);
    const double du = u_m(mv, zk.ordering()) - u_m(mv, bdd.ordering());
    CHECK((zk.v(x) - bdd.v(x)) == doctest::Approx(du));
    // BenDaniel-Duke and Gora-Williams differ by lambda^2/4 exp(-lambda x) for m = exp(lambda x)
    CHECK((gw.v(x) - bdd.v(x)) == doctest::Approx(0.04 / 4.0 * std::exp(-0.2 * x)));
  }
}

TEST_CASE("covering domains span the requested mapped interval") {
  const MassDomain d = covering_domain(MassKind::Exponential, 1.0, 0.2, -3.0, 40.0);
  const MassProfile m = MassProfile::exponential(1.0, 0.2, d);
  CHECK(m.u_range().first <= -3.0);
  CHECK(m.u_range().second >= 40.0);
}
