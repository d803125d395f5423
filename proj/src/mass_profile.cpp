#include "pdm/mass_profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdm/errors.hpp"

namespace pdm {

namespace {

constexpr std::size_t kKnotIntervals = 1024;
constexpr std::size_t kPositivityScan = 1000;

struct Preset {
  std::string_view name;
  double eta;
  double epsilon;
};

constexpr std::array<Preset, 4> kPresets = {{
    {"ben-daniel-duke", 0.0, -1.0},
    {"zhu-kroemer", -0.5, 0.0},
    {"gora-williams", -1.0, 0.0},
    {"li-kuhn", 0.0, -0.5},
}};

std::string format_number(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::string_view to_string(MassKind kind) {
  switch (kind) {
    case MassKind::Constant: return "constant";
    case MassKind::Rational: return "rational";
    case MassKind::Exponential: return "exponential";
    case MassKind::Soliton: return "soliton";
  }
  return "unknown";
}

std::array<std::string_view, 4> mass_kind_names() {
  return {"constant", "rational", "exponential", "soliton"};
}

MassKind mass_kind_from_string(std::string_view name) {
  if (name == "constant") return MassKind::Constant;
  if (name == "rational") return MassKind::Rational;
  if (name == "exponential") return MassKind::Exponential;
  if (name == "soliton") return MassKind::Soliton;
  throw ConfigError("unknown mass kind '" + std::string(name) +
                    "'; valid kinds: constant, rational, exponential, soliton");
}

OrderingParams OrderingParams::preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (p.name == name) return {p.eta, p.epsilon};
  }
  throw ConfigError("unknown ordering preset '" + std::string(name) +
                    "'; valid presets: ben-daniel-duke, zhu-kroemer, gora-williams, li-kuhn");
}

std::array<std::string_view, 4> OrderingParams::preset_names() {
  return {kPresets[0].name, kPresets[1].name, kPresets[2].name, kPresets[3].name};
}

std::string OrderingParams::label() const {
  for (const auto& p : kPresets) {
    if (p.eta == eta_ && p.epsilon == epsilon_) return std::string(p.name);
  }
  return "custom";
}

MassProfile::MassProfile(MassKind kind, double m0, double shape, Domain domain)
    : kind_(kind), m0_(m0), shape_(shape), domain_(domain) {
  if (!(m0 > 0.0) || !std::isfinite(m0)) {
    throw ParameterError("mass scale m0 must be positive and finite");
  }
  if (!std::isfinite(shape)) throw ParameterError("mass shape parameter must be finite");
  if (!(domain.lo < domain.hi)) throw DomainError("mass domain requires lo < hi");
  if (domain.lo > 0.0 || domain.hi < 0.0) {
    throw DomainError("mass domain must contain x = 0 (origin of the mapped coordinate)");
  }
  check_positive();
  build_knots();
}

MassProfile MassProfile::constant(double m0, Domain domain) {
  return MassProfile(MassKind::Constant, m0, 0.0, domain);
}

MassProfile MassProfile::rational(double m0, double a, Domain domain) {
  return MassProfile(MassKind::Rational, m0, a, domain);
}

MassProfile MassProfile::exponential(double m0, double lambda, Domain domain) {
  return MassProfile(MassKind::Exponential, m0, lambda, domain);
}

MassProfile MassProfile::soliton(double m0, double lambda, Domain domain) {
  return MassProfile(MassKind::Soliton, m0, lambda, domain);
}

bool MassProfile::is_constant() const {
  switch (kind_) {
    case MassKind::Constant: return true;
    case MassKind::Rational: return shape_ == 1.0;
    case MassKind::Exponential:
    case MassKind::Soliton: return shape_ == 0.0;
  }
  return false;
}

std::string MassProfile::id() const {
  std::string s(to_string(kind_));
  s += "(m0=" + format_number(m0_);
  switch (kind_) {
    case MassKind::Constant: break;
    case MassKind::Rational: s += ",alpha=" + format_number(shape_); break;
    case MassKind::Exponential:
    case MassKind::Soliton: s += ",lambda=" + format_number(shape_); break;
  }
  s += ")";
  return s;
}

MassValues MassProfile::evaluate_unchecked(double x) const {
  switch (kind_) {
    case MassKind::Constant:
      return {m0_, 0.0, 0.0};
    case MassKind::Rational: {
      const double a = shape_;
      const double d = 1.0 + x * x;
      const double q = (a + x * x) / d;
      const double dq = 2.0 * x * (1.0 - a) / (d * d);
      const double d2q = 2.0 * (1.0 - a) * (1.0 - 3.0 * x * x) / (d * d * d);
      return {m0_ * q * q, 2.0 * m0_ * q * dq, 2.0 * m0_ * (dq * dq + q * d2q)};
    }
    case MassKind::Exponential: {
      const double m = m0_ * std::exp(shape_ * x);
      return {m, shape_ * m, shape_ * shape_ * m};
    }
    case MassKind::Soliton: {
      const double l = shape_;
      const double t = std::tanh(l * x);
      const double sech = 1.0 / std::cosh(l * x);
      const double s2 = sech * sech;
      const double m = m0_ * s2;
      return {m, -2.0 * l * m * t, 2.0 * l * l * m * (2.0 * t * t - s2)};
    }
  }
  return {0.0, 0.0, 0.0};
}

MassValues MassProfile::evaluate(double x) const {
  if (!contains(x)) {
    throw DomainError("x = " + format_number(x) + " outside mass domain [" +
                      format_number(domain_.lo) + ", " + format_number(domain_.hi) + "]");
  }
  return evaluate_unchecked(x);
}

void MassProfile::check_positive() const {
  for (std::size_t i = 0; i <= kPositivityScan; ++i) {
    const double x = domain_.lo + (domain_.hi - domain_.lo) * static_cast<double>(i) /
                                      static_cast<double>(kPositivityScan);
    const MassValues mv = evaluate_unchecked(x);
    if (!(mv.m > 0.0) || !std::isfinite(mv.m) || !std::isfinite(mv.dm) ||
        !std::isfinite(mv.d2m)) {
      throw ParameterError("mass profile " + id() + " is not positive and finite at x = " +
                           format_number(x));
    }
  }
}

void MassProfile::build_knots() {
  const double width = domain_.hi - domain_.lo;
  const auto segments = [&](double len) -> std::size_t {
    if (len <= 0.0) return 0;
    return std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(kKnotIntervals * len / width)));
  };
  const std::size_t n_neg = segments(-domain_.lo);
  const std::size_t n_pos = segments(domain_.hi);

  knot_x_.assign(n_neg + n_pos + 1, 0.0);
  knot_u_.assign(n_neg + n_pos + 1, 0.0);
  for (std::size_t i = 0; i < n_neg; ++i) {
    knot_x_[i] = domain_.lo * static_cast<double>(n_neg - i) / static_cast<double>(n_neg);
  }
  for (std::size_t i = 1; i <= n_pos; ++i) {
    knot_x_[n_neg + i] = domain_.hi * static_cast<double>(i) / static_cast<double>(n_pos);
  }

  auto sqrt_m = [this](double x) { return std::sqrt(evaluate_unchecked(x).m); };
  quad::Options panel = quad_;
  panel.rel_tol = 1e-13;
  for (std::size_t i = n_neg; i > 0; --i) {
    knot_u_[i - 1] = knot_u_[i] - quad::integrate(sqrt_m, knot_x_[i - 1], knot_x_[i], panel);
  }
  for (std::size_t i = n_neg + 1; i < knot_x_.size(); ++i) {
    knot_u_[i] = knot_u_[i - 1] + quad::integrate(sqrt_m, knot_x_[i - 1], knot_x_[i], panel);
  }
}

double MassProfile::mapped_coordinate(double x) const {
  if (!contains(x)) {
    throw DomainError("x = " + format_number(x) + " outside mass domain");
  }
  if (kind_ == MassKind::Constant) return std::sqrt(m0_) * x;
  auto it = std::upper_bound(knot_x_.begin(), knot_x_.end(), x);
  std::size_t k = (it == knot_x_.begin()) ? 0 : static_cast<std::size_t>(it - knot_x_.begin()) - 1;
  if (k + 1 < knot_x_.size() && (knot_x_[k + 1] - x) < (x - knot_x_[k])) ++k;
  auto sqrt_m = [this](double s) { return std::sqrt(evaluate_unchecked(s).m); };
  return knot_u_[k] + quad::integrate(sqrt_m, knot_x_[k], x, quad_);
}

double MassProfile::inverse_mapped(double u) const {
  const auto [u_lo, u_hi] = u_range();
  const double slack = 1e-12 * std::max(1.0, std::abs(u));
  if (u < u_lo - slack || u > u_hi + slack) {
    throw DomainError("u = " + format_number(u) + " outside mapped range [" +
                      format_number(u_lo) + ", " + format_number(u_hi) + "]");
  }
  if (kind_ == MassKind::Constant) return std::clamp(u / std::sqrt(m0_), domain_.lo, domain_.hi);
  if (u <= u_lo) return domain_.lo;
  if (u >= u_hi) return domain_.hi;

  auto it = std::upper_bound(knot_u_.begin(), knot_u_.end(), u);
  const std::size_t k = static_cast<std::size_t>(it - knot_u_.begin()) - 1;
  double lo = knot_x_[k];
  double hi = knot_x_[k + 1];
  const double du = knot_u_[k + 1] - knot_u_[k];

  // Cubic Hermite guess for x(u) with exact slopes dx/du = 1/sqrt(m).
  const double t = (u - knot_u_[k]) / du;
  const double s0 = du / std::sqrt(evaluate_unchecked(lo).m);
  const double s1 = du / std::sqrt(evaluate_unchecked(hi).m);
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  double x = std::clamp(h00 * lo + h10 * s0 + h01 * hi + h11 * s1, lo, hi);

  // Safeguarded Newton: u(x) is strictly increasing with u'(x) = sqrt(m).
  auto sqrt_m = [this](double s) { return std::sqrt(evaluate_unchecked(s).m); };
  for (int iter = 0; iter < 100; ++iter) {
    const double f = knot_u_[k] + quad::integrate(sqrt_m, knot_x_[k], x, quad_) - u;
    if (f > 0.0) hi = x; else lo = x;
    double next = x - f / sqrt_m(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= 1e-12 * std::max(1.0, std::abs(x)) || hi - lo <= 1e-15 * std::max(1.0, std::abs(x))) {
      break;
    }
  }
  return x;
}

double v_m(const MassValues& mv, const OrderingParams& o) {
  const double eta = o.eta();
  const double eps = o.epsilon();
  const double coef = 4.0 * eps * (1.0 + eta) + (1.0 + 2.0 * eta) * (1.0 + 2.0 * eta);
  return (coef * mv.dm * mv.dm / (2.0 * mv.m) - eps * mv.d2m) / (4.0 * mv.m * mv.m);
}

double v_m(const MassProfile& profile, const OrderingParams& ordering, double x) {
  return v_m(profile.evaluate(x), ordering);
}

double u_m(const MassValues& mv, const OrderingParams& o) {
  const double m2 = mv.m * mv.m;
  return 5.0 * mv.dm * mv.dm / (32.0 * m2 * mv.m) - mv.d2m / (8.0 * m2) + v_m(mv, o);
}

double u_m(const MassProfile& profile, const OrderingParams& ordering, double x) {
  return u_m(profile.evaluate(x), ordering);
}

}  // namespace pdm
