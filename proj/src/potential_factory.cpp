#include "pdm/potential_factory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "pdm/errors.hpp"
#include "pdm/format.hpp"

namespace pdm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
const cplx kI{0.0, 1.0};

double casimir(double j) { return j * (j + 1.0); }

int count_while(const std::function<bool(int)>& bound) {
  int n = 0;
  while (n < 100000 && bound(n)) ++n;
  return n;
}

[[noreturn]] void bad(const std::string& family, const std::string& what) {
  throw ParameterError(family + ": " + what);
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Coulomb: return "coulomb";
    case Family::Oscillator: return "oscillator";
    case Family::Morse: return "morse";
    case Family::PoschlTeller: return "poschl-teller";
    case Family::GenPoschlTeller: return "gen-poschl-teller";
    case Family::Scarf: return "scarf";
    case Family::PtScarf: return "pt-scarf";
    case Family::Eckart: return "eckart";
    case Family::Hulthen: return "hulthen";
    case Family::RosenMorse: return "rosen-morse";
  }
  return "unknown";
}

std::array<Family, 10> all_families() {
  return {Family::Coulomb,      Family::Oscillator, Family::Morse,   Family::PoschlTeller,
          Family::GenPoschlTeller, Family::Scarf, Family::PtScarf, Family::Eckart,
          Family::Hulthen,      Family::RosenMorse};
}

Family family_from_string(std::string_view name) {
  std::string valid;
  for (Family f : all_families()) {
    if (to_string(f) == name) return f;
    if (!valid.empty()) valid += ", ";
    valid += to_string(f);
  }
  throw ConfigError("unknown family '" + std::string(name) + "'; valid: " + valid);
}

bool has_trig_variant(Family f) {
  switch (f) {
    case Family::PoschlTeller:
    case Family::GenPoschlTeller:
    case Family::Scarf:
    case Family::Eckart:
    case Family::RosenMorse: return true;
    default: return false;
  }
}

// ---------------------------------------------------------------------------
// Master formula

cplx master_potential_at(const MasterParams& p, const CoordinateMap& map,
                         const MassProfile& mass, const OrderingParams& ordering, double x,
                         double u) {
  if (map.distance_to_singular(u, p.a) < kSingularGuard) {
    throw SingularPoint("map " + map.describe() + " is singular near u = " + fmt_num(u));
  }
  const MassValues mv = mass.evaluate(x);
  const XJet xj = x_jet(map.jet(u), mv);
  const cplx r = xj.r, r1 = xj.dr, r2 = xj.d2r, r3 = xj.d3r;
  const double m = mv.m;
  const cplx r1sq = r1 * r1;
  const cplx shape = 3.0 * r2 * r2 / (8.0 * m * r1sq) - r3 / (4.0 * m * r1);
  const double L = casimir(p.j);
  cplx ladder;
  if (p.a == 0.0) {
    ladder = (p.b * p.b / 2.0 + L / (2.0 * r * r) + p.b * p.N / r) * r1sq / m;
  } else {
    const cplx q = 1.0 - p.a * r * r;
    ladder = (2.0 * p.b * p.N +
              r * (p.b * p.b + p.a * (4.0 * p.N * p.N - 1.0) + 2.0 * p.a * p.b * p.N * r)) *
                 r1sq / (2.0 * m * r * q * q) +
             L * r1sq / (2.0 * m * r * r);
  }
  return ladder + shape + v_m(mv, ordering);
}

cplx master_potential(const MasterParams& p, const CoordinateMap& map, const MassProfile& mass,
                      const OrderingParams& ordering, double x) {
  if (!mass.contains(x)) throw DomainError("x = " + fmt_num(x) + " outside mass domain");
  return master_potential_at(p, map, mass, ordering, x, mass.mapped_coordinate(x));
}

cplx master_potential(const AlgebraSpec& spec, const CoordinateMap& map,
                      const MassProfile& mass, const OrderingParams& ordering, double x) {
  return master_potential(MasterParams{spec.a, spec.b, spec.N, spec.j}, map, mass, ordering,
                          x);
}

// ---------------------------------------------------------------------------
// Family catalog

FamilySelector select_family(Family f, bool trig, double alpha) {
  if (trig && !has_trig_variant(f)) {
    bad(std::string(to_string(f)), "no trigonometric variant");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) bad(std::string(to_string(f)), "requires alpha > 0");
  FamilySelector s;
  s.family = f;
  s.trig = trig;
  switch (f) {
    case Family::Coulomb:
      s.map = CoordinateMap::identity();
      s.lambda = LambdaTriple{1.0, 0.0, 0.0};
      break;
    case Family::Oscillator:
      s.map = CoordinateMap::half_square();
      s.lambda = LambdaTriple{0.0, 0.5, 0.0};
      break;
    case Family::Morse:
      s.map = CoordinateMap::exponential(alpha);
      // lambda2 = 1/alpha^2 keeps alpha free.
      s.lambda = LambdaTriple{0.0, 0.0, 1.0 / (alpha * alpha)};
      break;
    case Family::PoschlTeller:
      s.map = trig ? CoordinateMap::signed_exponential(2.0 * alpha, kPi / 2.0)
                   : CoordinateMap::exponential(2.0 * alpha);
      s.a = 1.0;
      break;
    case Family::GenPoschlTeller:
      s.map = trig ? CoordinateMap::signed_exponential(alpha, kPi / 2.0)
                   : CoordinateMap::exponential(alpha);
      s.a = 1.0;
      break;
    case Family::Scarf:
      s.map = trig ? CoordinateMap::signed_exponential(alpha, kPi / 2.0)
                   : CoordinateMap::exponential(alpha);
      s.a = -1.0;
      break;
    case Family::PtScarf:
      s.map = CoordinateMap::exponential(alpha);
      s.a = -1.0;
      break;
    case Family::Eckart:
      s.map = trig ? CoordinateMap(MapKind::CotHalf, alpha) : CoordinateMap(MapKind::CothHalf, alpha);
      s.a = trig ? -1.0 : 1.0;
      break;
    case Family::Hulthen:
      s.map = CoordinateMap(MapKind::CothQuarter, alpha);
      s.a = 1.0;
      break;
    case Family::RosenMorse:
      s.map = trig ? CoordinateMap(MapKind::CotShifted, alpha)
                   : CoordinateMap(MapKind::CothShifted, alpha);
      s.a = 1.0;
      break;
  }
  return s;
}

double lambda_condition_residual(const FamilySelector& selector,
                                 const std::vector<double>& u_samples) {
  if (!selector.lambda || selector.a != 0.0) {
    throw WrongClass("lambda condition applies to the a = 0 class only (family " +
                     std::string(to_string(selector.family)) + ")");
  }
  const LambdaTriple& l = *selector.lambda;
  double worst = 0.0;
  for (double u : u_samples) {
    const MapJet jt = selector.map.jet(u);
    const cplx lhs = (l.l0 + l.l1 / jt.r + l.l2 / (jt.r * jt.r)) * jt.dr * jt.dr;
    worst = std::max(worst, std::abs(lhs - 1.0));
  }
  return worst;
}

PotentialModel::PotentialModel(FamilySelector sel, FamilyParams params, MassProfile mass,
                               OrderingParams ordering)
    : sel_(std::move(sel)), params_(params), mass_(std::move(mass)), ordering_(ordering) {}

std::string PotentialModel::name() const {
  std::string n(to_string(sel_.family));
  if (sel_.trig) n += "-trig";
  return n;
}

std::string PotentialModel::id() const {
  std::string s = name() + "(";
  const FamilyParams& p = params_;
  switch (sel_.family) {
    case Family::Coulomb: s += "Ze2=" + fmt_num(p.Ze2) + ",j=" + fmt_num(*p.j); break;
    case Family::Oscillator: s += "b=" + fmt_num(p.b) + ",j=" + fmt_num(*p.j); break;
    default:
      s += "alpha=" + fmt_num(p.alpha) + ",b=" + fmt_num(p.b) + ",N=" + fmt_num(p.N);
      if (desc_.running == Running::N) s += ",j=" + fmt_num(*p.j);
      break;
  }
  s += ")|" + mass_.id() + "|eta=" + fmt_num(ordering_.eta()) +
       ",epsilon=" + fmt_num(ordering_.epsilon());
  if (suppress_vm_) s += "|no-vm";
  return s;
}

Level PotentialModel::level(int n) const {
  if (n < 0) throw IndexError("level index must be non-negative");
  if (desc_.bound_count && n >= *desc_.bound_count) {
    throw IndexError(name() + " has " + std::to_string(*desc_.bound_count) +
                     " bound levels; index " + std::to_string(n) + " requested");
  }
  const FamilyParams& p = params_;
  const double a2 = p.alpha * p.alpha;
  const double P = p.b * p.N;
  const double dn = static_cast<double>(n);
  const double j = p.j.value_or(0.0);
  Level lv{n, p.N, j, 0.0, 0.0};
  switch (sel_.family) {
    case Family::Coulomb: {
      lv.N = dn + j + 1.0;
      lv.b = -p.Ze2 / lv.N;
      lv.E = -p.Ze2 * p.Ze2 / (2.0 * lv.N * lv.N);
      break;
    }
    case Family::Oscillator:
      lv.N = dn + j + 1.0;
      lv.b = -p.b;
      lv.E = 2.0 * p.b * lv.N;
      break;
    case Family::Morse:
      lv.j = std::abs(p.N) - dn - 1.0;
      lv.b = p.b;
      lv.E = -a2 / 8.0 * std::pow(2.0 * lv.j + 1.0, 2);
      break;
    case Family::PoschlTeller: {
      lv.b = -p.b;
      const double lo = std::abs(p.b - 2.0 * p.N), hi = std::abs(p.b + 2.0 * p.N);
      const double t = sel_.trig ? (hi + lo) / 2.0 + 1.0 + 2.0 * dn : (hi - lo) / 2.0 - 1.0 - 2.0 * dn;
      lv.j = (t - 1.0) / 2.0;
      lv.E = (sel_.trig ? 1.0 : -1.0) * a2 / 2.0 * t * t;
      break;
    }
    case Family::GenPoschlTeller: {
      lv.b = -p.b;
      const double t = sel_.trig
                           ? 2.0 * std::max(std::abs(p.b) / 2.0, std::abs(p.N)) + 1.0 + 2.0 * dn
                           : 2.0 * std::min(std::abs(p.b) / 2.0, std::abs(p.N)) - 1.0 - 2.0 * dn;
      lv.j = (t - 1.0) / 2.0;
      lv.E = (sel_.trig ? 1.0 : -1.0) * a2 / 8.0 * t * t;
      break;
    }
    case Family::Scarf:
      if (sel_.trig) {
        lv.b = kI * p.b;
        const double t = 2.0 * std::max(std::abs(p.b) / 2.0, std::abs(p.N)) + 1.0 + 2.0 * dn;
        lv.j = (t - 1.0) / 2.0;
        lv.E = a2 / 8.0 * t * t;
      } else {
        lv.b = -p.b;
        lv.j = std::abs(p.N) - dn - 1.0;
        lv.E = -a2 / 8.0 * std::pow(2.0 * lv.j + 1.0, 2);
      }
      break;
    case Family::PtScarf:
      lv.b = kI * p.b;
      lv.j = std::abs(p.N) - dn - 1.0;
      lv.E = -a2 / 8.0 * std::pow(2.0 * lv.j + 1.0, 2);
      break;
    case Family::Eckart: {
      lv.N = dn + j + 1.0;
      const double bn = P / lv.N;
      lv.b = -bn;
      lv.E = -a2 / 8.0 * (bn * bn + (sel_.trig ? -4.0 : 4.0) * lv.N * lv.N);
      break;
    }
    case Family::Hulthen: {
      lv.N = dn + j + 1.0;
      const double bn = P / lv.N;
      lv.b = -bn;
      lv.E = -a2 / 32.0 * std::pow(bn - 2.0 * lv.N, 2);
      break;
    }
    case Family::RosenMorse: {
      lv.N = sel_.trig ? dn + j + 1.0 : j - dn;
      const double bn = P / lv.N;
      lv.b = sel_.trig ? cplx(-kI * bn) : cplx(-bn);
      lv.E = -a2 / 8.0 * (bn * bn + (sel_.trig ? -4.0 : 4.0) * lv.N * lv.N);
      break;
    }
  }
  return lv;
}

cplx PotentialModel::analytic_energy(int n) const { return level(n).E; }

std::vector<Level> PotentialModel::levels(int max_levels) const {
  const int count = desc_.bound_count ? std::min(*desc_.bound_count, max_levels) : max_levels;
  std::vector<Level> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int n = 0; n < count; ++n) out.push_back(level(n));
  return out;
}

MasterParams PotentialModel::master_params() const {
  const Level lv = level(0);
  return {sel_.a, lv.b, lv.N, lv.j};
}

cplx PotentialModel::v_closed_u(double u) const {
  const FamilyParams& p = params_;
  const double al = p.alpha;
  const double a2 = al * al;
  const double b = p.b, N = p.N, P = b * N;
  const double L = casimir(p.j.value_or(0.0));
  const double s = al * u;
  switch (sel_.family) {
    case Family::Coulomb:
      return -p.Ze2 / u + L / (2.0 * u * u);
    case Family::Oscillator:
      return b * b * u * u / 2.0 + (3.0 + 16.0 * L) / (8.0 * u * u);
    case Family::Morse:
      return P * a2 * std::exp(-s) + b * b * a2 / 2.0 * std::exp(-2.0 * s);
    case Family::PoschlTeller: {
      const double cm = (std::pow(b - 2.0 * N, 2) - 1.0) * a2 / 8.0;
      const double cp = (std::pow(b + 2.0 * N, 2) - 1.0) * a2 / 8.0;
      if (sel_.trig) return cm / std::pow(std::sin(s), 2) + cp / std::pow(std::cos(s), 2);
      return cm / std::pow(std::sinh(s), 2) - cp / std::pow(std::cosh(s), 2);
    }
    case Family::GenPoschlTeller: {
      const double c2 = (b * b + 4.0 * N * N - 1.0) * a2 / 8.0;
      if (sel_.trig) {
        const double sn = std::sin(s);
        return c2 / (sn * sn) - a2 / 2.0 * P * std::cos(s) / (sn * sn);
      }
      const double sh = std::sinh(s);
      return c2 / (sh * sh) - a2 / 2.0 * P * std::cosh(s) / (sh * sh);
    }
    case Family::Scarf: {
      if (sel_.trig) {
        const double cs = std::cos(s);
        return (b * b + 4.0 * N * N - 1.0) * a2 / 8.0 / (cs * cs) +
               a2 / 2.0 * P * std::sin(s) / (cs * cs);
      }
      const double ch = std::cosh(s);
      return (b * b - 4.0 * N * N + 1.0) * a2 / 8.0 / (ch * ch) -
             a2 / 2.0 * P * std::sinh(s) / (ch * ch);
    }
    case Family::PtScarf: {
      const double ch = std::cosh(s);
      return -(b * b + 4.0 * N * N - 1.0) * a2 / 8.0 / (ch * ch) +
             kI * (a2 / 2.0 * P * std::sinh(s) / (ch * ch));
    }
    case Family::Eckart:
      if (sel_.trig) {
        const double sn = std::sin(s);
        return a2 / 2.0 * P * std::cos(s) / sn + a2 / 2.0 * L / (sn * sn);
      } else {
        const double sh = std::sinh(s);
        return -a2 / 2.0 * P * std::cosh(s) / sh + a2 / 2.0 * L / (sh * sh);
      }
    case Family::Hulthen: {
      const double y = std::exp(-s);
      const double q = -std::expm1(-s);  // 1 - y without cancellation
      return (L - P / 2.0) * a2 * y / (2.0 * q) + L * a2 * y * y / (2.0 * q * q);
    }
    case Family::RosenMorse:
      if (sel_.trig) {
        const double cs = std::cos(s);
        return -a2 / 2.0 * P * std::tan(s) + a2 / 2.0 * L / (cs * cs);
      } else {
        const double ch = std::cosh(s);
        return -a2 / 2.0 * P * std::tanh(s) - a2 / 2.0 * L / (ch * ch);
      }
  }
  return 0.0;
}

cplx PotentialModel::v_at(double x, double u) const {
  const MassValues mv = mass_.evaluate(x);
  const double um = suppress_vm_ ? u_m(mv, ordering_) - v_m(mv, ordering_) : u_m(mv, ordering_);
  return v_closed_u(u) + um;
}

cplx PotentialModel::v_complex(double x) const {
  if (!mass_.contains(x)) throw DomainError("x = " + fmt_num(x) + " outside mass domain");
  return v_at(x, mass_.mapped_coordinate(x));
}

double PotentialModel::v(double x) const {
  if (complex_) throw ComplexModel(name() + ": complex family: analytic evaluation only");
  return v_complex(x).real();
}

UDomain PotentialModel::default_u_domain() const {
  const FamilyParams& p = params_;
  const double al = p.alpha;
  switch (sel_.family) {
    case Family::Coulomb: return {0.0, 60.0 / p.Ze2};
    case Family::Oscillator: return {0.0, 10.0 / std::sqrt(p.b)};
    case Family::Morse: {
      const double u0 = -std::log(-p.N / p.b) / al;
      return {u0 - 3.0 / al, u0 + 40.0 / al};
    }
    case Family::PoschlTeller:
      return sel_.trig ? UDomain{0.0, kPi / (2.0 * al)} : UDomain{0.0, 40.0 / al};
    case Family::GenPoschlTeller:
    case Family::Eckart:
      return sel_.trig ? UDomain{0.0, kPi / al} : UDomain{0.0, 40.0 / al};
    case Family::Scarf:
    case Family::RosenMorse:
      return sel_.trig ? UDomain{-kPi / (2.0 * al), kPi / (2.0 * al)}
                       : UDomain{-40.0 / al, 40.0 / al};
    case Family::PtScarf: return {-40.0 / al, 40.0 / al};
    case Family::Hulthen: return {0.0, 60.0 / al};
  }
  return {0.0, 1.0};
}

std::vector<double> PotentialModel::singular_u(double lo, double hi) const {
  return sel_.map.singular_points(sel_.a, lo, hi);
}

FamilyInfo family_info(Family f) {
  FamilyInfo i{f, "", "", "", "", "", has_trig_variant(f), f == Family::PtScarf};
  const FamilySelector sel = select_family(f, false);
  i.map = sel.map.describe();
  switch (f) {
    case Family::Coulomb:
      i.potential = "-Ze2/u + j(j+1)/(2u^2)";
      i.spectrum = "E = -(Ze^2)^2/(2N^2), N = n + j + 1";
      i.parameters = "Ze2 > 0, j >= 0 (default 0)";
      break;
    case Family::Oscillator:
      i.potential = "b^2 u^2/2 + (3 + 16 j(j+1))/(8u^2)";
      i.spectrum = "E = 2bN + const, N = n + j + 1";
      i.parameters = "b > 0, j >= -1/4 (default -1/4)";
      break;
    case Family::Morse:
      i.potential = "alpha^2 bN e^{-alpha u} + alpha^2 b^2/2 e^{-2 alpha u}";
      i.spectrum = "E = -alpha^2/8 (1 + 2j)^2, j = |N| - n - 1";
      i.parameters = "alpha > 0, bN < 0, |N| > 1/2";
      break;
    case Family::PoschlTeller:
      i.potential = "alpha^2/8 [((b-2N)^2 - 1)/sinh^2 - ((b+2N)^2 - 1)/cosh^2](alpha u)";
      i.potential_trig = "alpha^2/8 [((b-2N)^2 - 1)/sin^2 + ((b+2N)^2 - 1)/cos^2](alpha u)";
      i.spectrum = "E = -+alpha^2/2 (1 + 2j)^2 + const, 2j + 1 = (|b+2N| -+ |b-2N|)/2 -+ (1 + 2n)";
      i.parameters = "alpha > 0, |b - 2N| >= 1 (trig: also |b + 2N| >= 1)";
      break;
    case Family::GenPoschlTeller:
      i.potential = "alpha^2/8 (b^2 + 4N^2 - 1)/sinh^2(alpha u) - alpha^2 bN/2 cosh/sinh^2(alpha u)";
      i.potential_trig = "alpha^2/8 (b^2 + 4N^2 - 1)/sin^2(alpha u) - alpha^2 bN/2 cos/sin^2(alpha u)";
      i.spectrum = "E = -+alpha^2/8 (1 + 2j)^2 + const, 2j + 1 = 2 min|max(|b|/2, |N|) -+ (1 + 2n)";
      i.parameters = "alpha > 0, bN > 0 (trig: |b -+ 2N| >= 1)";
      break;
    case Family::Scarf:
      i.potential = "alpha^2/8 (b^2 - 4N^2 + 1)/cosh^2(alpha u) - alpha^2 bN/2 sinh/cosh^2(alpha u)";
      i.potential_trig = "alpha^2/8 (b^2 + 4N^2 - 1)/cos^2(alpha u) + alpha^2 bN/2 sin/cos^2(alpha u)";
      i.spectrum = "E = -alpha^2/8 (1 + 2j)^2 + const, j = |N| - n - 1";
      i.parameters = "alpha > 0, |N| > 1/2 (trig: |b -+ 2N| >= 1)";
      break;
    case Family::PtScarf:
      i.potential = "-alpha^2/8 (b^2 + 4N^2 - 1)/cosh^2(alpha u) + i alpha^2 bN/2 sinh/cosh^2(alpha u)";
      i.spectrum = "E = -alpha^2/8 (1 + 2j)^2 + const, j = |N| - n - 1 (analytic only)";
      i.parameters = "alpha > 0, |N| > 1/2";
      break;
    case Family::Eckart:
      i.potential = "-alpha^2 bN/2 coth(alpha u) + alpha^2 j(j+1)/(2 sinh^2(alpha u))";
      i.potential_trig = "alpha^2 bN/2 cot(alpha u) + alpha^2 j(j+1)/(2 sin^2(alpha u))";
      i.spectrum = "E = -alpha^2/8 (b^2 +- 4N^2) + const, N = n + j + 1 at fixed bN";
      i.parameters = "alpha > 0, j >= 0 (default 0), bN > 2(j+1)^2";
      break;
    case Family::Hulthen:
      i.potential = "alpha^2 (j(j+1) - bN/2) y/(2(1-y)) + alpha^2 j(j+1) y^2/(2(1-y)^2), y = e^{-alpha u}";
      i.spectrum = "E = -alpha^2/32 (b - 2N)^2 + const, N = n + j + 1 at fixed bN";
      i.parameters = "alpha > 0, j >= 0 (default 0), bN > 2(j+1)^2";
      break;
    case Family::RosenMorse:
      i.potential = "-alpha^2 bN/2 tanh(alpha u) - alpha^2 j(j+1)/(2 cosh^2(alpha u))";
      i.potential_trig = "-alpha^2 bN/2 tan(alpha u) + alpha^2 j(j+1)/(2 cos^2(alpha u))";
      i.spectrum = "E = -alpha^2/8 (b^2 + 4N^2) + const, N = j - n at fixed bN";
      i.parameters = "alpha > 0, j > 0, |bN| < 2j^2";
      break;
  }
  return i;
}

// ---------------------------------------------------------------------------
// Construction and range checks

namespace {

SpectrumDescriptor describe(const FamilySelector& sel, const FamilyParams& p) {
  const std::string fam(to_string(sel.family));
  const double a2 = p.alpha * p.alpha;
  const double P = p.b * p.N;
  const double j = p.j.value_or(0.0);
  const double absN = std::abs(p.N);
  const double lo = std::abs(p.b - 2.0 * p.N), hi = std::abs(p.b + 2.0 * p.N);
  SpectrumDescriptor d{Running::j, "", "", std::nullopt, 0.0, OffsetPolicy::Fitted};
  auto need_levels = [&](int count) {
    if (count < 1) bad(fam, "parameters support no bound states");
    d.bound_count = count;
  };
  auto need_singular_strength = [&]() {
    if (lo < 1.0 || hi < 1.0) bad(fam, "trigonometric variant requires |b - 2N| >= 1 and |b + 2N| >= 1");
  };
  auto need_j = [&](double min, bool strict) {
    if (!p.j) bad(fam, "requires j");
    if (strict ? !(*p.j > min) : !(*p.j >= min)) {
      bad(fam, std::string("requires j ") + (strict ? "> " : ">= ") + fmt_num(min));
    }
  };
  switch (sel.family) {
    case Family::Coulomb:
      if (!(p.Ze2 > 0.0)) bad(fam, "requires Ze2 > 0");
      need_j(0.0, false);
      d.running = Running::N;
      d.mapping = "N = n + j + 1, b = -Ze2/N";
      d.energy_formula = "E = -(Ze^2)^2 / (2 N^2)";
      d.offset = OffsetPolicy::Forbidden;
      break;
    case Family::Oscillator:
      if (!(p.b > 0.0)) bad(fam, "requires b > 0");
      need_j(-0.25, false);
      d.running = Running::N;
      d.mapping = "N = n + j + 1";
      d.energy_formula = "E = 2 b N";
      d.continuum_threshold = kInf;
      break;
    case Family::Morse:
      if (!(P < 0.0)) bad(fam, "requires bN < 0 for binding");
      need_levels(count_while([&](int n) { return absN - n - 0.5 > 0.0; }));
      d.mapping = "j = |N| - n - 1";
      d.energy_formula = "E = -alpha^2/8 (1 + 2j)^2";
      d.offset = OffsetPolicy::Forbidden;
      break;
    case Family::PoschlTeller:
      if (sel.trig) {
        need_singular_strength();
        d.mapping = "2j + 1 = (|b + 2N| + |b - 2N|)/2 + 1 + 2n";
        d.energy_formula = "E = alpha^2/2 (1 + 2j)^2";
        d.continuum_threshold = kInf;
      } else {
        if (lo < 1.0) bad(fam, "requires |b - 2N| >= 1");
        need_levels(count_while([&](int n) { return (hi - lo) / 2.0 - 1.0 - 2.0 * n > 0.0; }));
        d.mapping = "2j + 1 = (|b + 2N| - |b - 2N|)/2 - 1 - 2n";
        d.energy_formula = "E = -alpha^2/2 (1 + 2j)^2";
      }
      break;
    case Family::GenPoschlTeller:
      if (sel.trig) {
        need_singular_strength();
        d.mapping = "2j + 1 = 2 max(|b|/2, |N|) + 1 + 2n";
        d.energy_formula = "E = alpha^2/8 (4A + (1 + 2j)^2), A = 0";
        d.continuum_threshold = kInf;
      } else {
        if (!(P > 0.0)) bad(fam, "requires bN > 0 for binding");
        const double A = std::min(std::abs(p.b) / 2.0, absN) - 0.5;
        need_levels(count_while([&](int n) { return n < A; }));
        d.mapping = "2j + 1 = 2 min(|b|/2, |N|) - 1 - 2n";
        d.energy_formula = "E = -alpha^2/8 (4A + (1 + 2j)^2), A = 0";
      }
      break;
    case Family::Scarf:
      if (sel.trig) {
        need_singular_strength();
        d.mapping = "2j + 1 = 2 max(|b|/2, |N|) + 1 + 2n";
        d.energy_formula = "E = alpha^2/8 (1 + 2j)^2";
        d.continuum_threshold = kInf;
      } else {
        need_levels(count_while([&](int n) { return absN - n - 0.5 > 0.0; }));
        d.mapping = "j = |N| - n - 1";
        d.energy_formula = "E = -alpha^2/8 (1 + 2j)^2";
      }
      break;
    case Family::PtScarf:
      need_levels(count_while([&](int n) { return absN - n - 0.5 > 0.0; }));
      d.mapping = "j = |N| - n - 1";
      d.energy_formula = "E = -alpha^2/8 (1 + 2j)^2";
      break;
    case Family::Eckart:
      need_j(0.0, false);
      d.running = Running::N;
      d.mapping = "N = n + j + 1 at fixed bN";
      if (sel.trig) {
        d.energy_formula = "E = -alpha^2/8 (b^2 - 4N^2)";
        d.continuum_threshold = kInf;
      } else {
        need_levels(count_while([&](int n) { return P > 2.0 * std::pow(n + j + 1.0, 2); }));
        d.energy_formula = "E = -alpha^2/8 (b^2 + 4N^2)";
        d.continuum_threshold = -a2 * P / 2.0;
      }
      break;
    case Family::Hulthen:
      need_j(0.0, false);
      need_levels(count_while([&](int n) { return P > 2.0 * std::pow(n + j + 1.0, 2); }));
      d.running = Running::N;
      d.mapping = "N = n + j + 1 at fixed bN";
      d.energy_formula = "E = -alpha^2/32 (b - 2N)^2";
      break;
    case Family::RosenMorse:
      need_j(0.0, true);
      d.running = Running::N;
      if (sel.trig) {
        d.mapping = "N = n + j + 1 at fixed bN";
        d.energy_formula = "E = -alpha^2/8 (b^2 - 4N^2)";
        d.continuum_threshold = kInf;
      } else {
        need_levels(count_while([&](int n) {
          const double Nn = j - n;
          return Nn > 0.0 && std::abs(P) < 2.0 * Nn * Nn;
        }));
        d.mapping = "N = j - n at fixed bN";
        d.energy_formula = "E = -alpha^2/8 (b^2 + 4N^2)";
        d.continuum_threshold = -a2 * std::abs(P) / 2.0;
      }
      break;
  }
  return d;
}

}  // namespace

PotentialModel build_family(const FamilySelector& selector, const FamilyParams& params,
                            const MassProfile& mass, const OrderingParams& ordering) {
  const std::string fam(to_string(selector.family));
  if ((selector.a == 0.0) != selector.lambda.has_value()) {
    bad(fam, "selector must carry a lambda triple exactly when a = 0");
  }
  FamilyParams p = params;
  p.trig = selector.trig;
  for (double v : {p.alpha, p.b, p.N, p.Ze2}) {
    if (!std::isfinite(v)) bad(fam, "parameters must be finite");
  }
  if (p.j && std::abs(*p.j) > 1e3) bad(fam, "|j| must not exceed 1000");
  if (!p.j) {
    switch (selector.family) {
      case Family::Coulomb:
      case Family::Eckart:
      case Family::Hulthen: p.j = 0.0; break;
      case Family::Oscillator: p.j = -0.25; break;
      default: break;
    }
  }
  PotentialModel model(selector, p, mass, ordering);
  model.desc_ = describe(selector, p);
  model.complex_ = selector.family == Family::PtScarf;
  return model;
}

PotentialModel build_family(Family f, const FamilyParams& params, const MassProfile& mass,
                            const OrderingParams& ordering) {
  return build_family(select_family(f, params.trig, params.alpha), params, mass, ordering);
}

PotentialModel with_ordering(const PotentialModel& model, const OrderingParams& ordering) {
  PotentialModel out = build_family(model.selector(), model.params(), model.mass(), ordering);
  out.set_suppress_vm(model.suppress_vm());
  return out;
}

PotentialModel with_mass(const PotentialModel& model, const MassProfile& mass) {
  PotentialModel out = build_family(model.selector(), model.params(), mass, model.ordering());
  out.set_suppress_vm(model.suppress_vm());
  return out;
}

XDomain x_domain_for(const PotentialModel& model, std::optional<UDomain> u) {
  const UDomain ud = u.value_or(model.default_u_domain());
  const auto [u_min, u_max] = model.mass().u_range();
  XDomain out{0.0, 0.0};
  if (ud.lo < u_min) {
    out.lo = model.mass().domain().lo;
    out.clamped_lo = true;
  } else {
    out.lo = model.mass().inverse_mapped(ud.lo);
  }
  if (ud.hi > u_max) {
    out.hi = model.mass().domain().hi;
    out.clamped_hi = true;
  } else {
    out.hi = model.mass().inverse_mapped(ud.hi);
  }
  return out;
}

double consistency_check(const PotentialModel& model, double x_lo, double x_hi, std::size_t n) {
  if (n < 3) throw GridTooCoarse("consistency grid needs at least 3 points");
  const MasterParams mp = model.master_params();
  const cplx E = model.analytic_energy(0);
  const MassProfile& mass = model.mass();
  const double dx = (x_hi - x_lo) / static_cast<double>(n - 1);
  double worst = 0.0;
  double u = mass.mapped_coordinate(x_lo);
  double xp = x_lo;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double x = x_lo + static_cast<double>(k) * dx;
    u += quad::integrate([&](double t) { return std::sqrt(mass.evaluate_unchecked(t).m); }, xp,
                         x, mass.quadrature_options());
    xp = x;
    if (model.selector().map.distance_to_singular(u, mp.a) < kSingularGuard) continue;
    const cplx lhs = model.v_at(x, u) - E;
    const cplx rhs = master_potential_at(mp, model.selector().map, mass, model.ordering(), x, u);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double consistency_check(const PotentialModel& model, std::size_t n) {
  const XDomain xd = x_domain_for(model);
  return consistency_check(model, xd.lo, xd.hi, n);
}

MassDomain covering_domain(MassKind kind, double m0, double shape, double u_lo, double u_hi) {
  MassProfile probe = MassProfile::constant(m0, {-1.0, 1.0});
  switch (kind) {
    case MassKind::Constant: break;
    case MassKind::Rational: probe = MassProfile::rational(m0, shape, {-1.0, 1.0}); break;
    case MassKind::Exponential: probe = MassProfile::exponential(m0, shape, {-1.0, 1.0}); break;
    case MassKind::Soliton: probe = MassProfile::soliton(m0, shape, {-1.0, 1.0}); break;
  }
  auto sane = [&](double x) {
    const double m = probe.evaluate_unchecked(x).m;
    return m >= 1e-6 * m0 && m <= 1e6 * m0;
  };
  auto u_of = [&](double x) {
    return quad::integrate([&](double t) { return std::sqrt(probe.evaluate_unchecked(t).m); }, 0.0,
                           x, probe.quadrature_options());
  };
  auto grow = [&](double target, double sign) {
    double x = sign;
    // A small safety margin keeps the u-interval strictly inside the domain.
    while (sign * u_of(x) < sign * target + 1e-9 * (1.0 + std::abs(target)) &&
           std::abs(x) < 4096.0 && sane(2.0 * x)) {
      x *= 2.0;
    }
    return x;
  };
  return {std::min(-1.0, grow(std::min(u_lo, 0.0), -1.0)), std::max(1.0, grow(std::max(u_hi, 0.0), 1.0))};
}

}  // namespace pdm
