#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pdm/quadrature.hpp"

namespace pdm {

enum class MassKind { Constant, Rational, Exponential, Soliton };

std::string_view to_string(MassKind kind);
MassKind mass_kind_from_string(std::string_view name);  // throws ConfigError
std::array<std::string_view, 4> mass_kind_names();

// m(x) and its first two derivatives at one point.
struct MassValues {
  double m;
  double dm;
  double d2m;
};

// von Roos exponents. rho is always derived from eta + epsilon + rho = -1.
class OrderingParams {
 public:
  OrderingParams() = default;
  OrderingParams(double eta, double epsilon) : eta_(eta), epsilon_(epsilon) {}

  double eta() const { return eta_; }
  double epsilon() const { return epsilon_; }
  double rho() const { return -1.0 - eta_ - epsilon_; }

  // ben-daniel-duke | zhu-kroemer | gora-williams | li-kuhn
  static OrderingParams preset(std::string_view name);
  static std::array<std::string_view, 4> preset_names();

  // Preset name when the exponents match one exactly, otherwise "custom".
  std::string label() const;

  bool operator==(const OrderingParams&) const = default;

 private:
  double eta_ = 0.0;
  double epsilon_ = -1.0;
};

struct MassDomain {
  double lo = -20.0;
  double hi = 20.0;
};

// Closed-form position-dependent mass on a finite domain containing x = 0.
//
// Construction checks positivity on a dense scan and eagerly tabulates the
// mapped coordinate u(x) = int_0^x sqrt(m) dx on a knot table, so every
// later query is a pure function of immutable state.
class MassProfile {
 public:
  using Domain = MassDomain;

  static MassProfile constant(double m0, Domain domain = {});
  // m = m0 (a + x^2)^2 / (1 + x^2)^2
  static MassProfile rational(double m0, double a, Domain domain = {});
  // m = m0 exp(lambda x)
  static MassProfile exponential(double m0, double lambda, Domain domain = {});
  // m = m0 sech^2(lambda x)
  static MassProfile soliton(double m0, double lambda, Domain domain = {});

  MassKind kind() const { return kind_; }
  double m0() const { return m0_; }
  // alpha for rational, lambda for exponential and soliton, 0 for constant.
  double shape() const { return shape_; }
  Domain domain() const { return domain_; }
  bool is_constant() const;
  std::string id() const;

  bool contains(double x) const { return x >= domain_.lo && x <= domain_.hi; }

  MassValues evaluate(double x) const;
  MassValues evaluate_unchecked(double x) const;

  double mapped_coordinate(double x) const;
  double inverse_mapped(double u) const;
  std::pair<double, double> u_range() const { return {knot_u_.front(), knot_u_.back()}; }

  const quad::Options& quadrature_options() const { return quad_; }

 private:
  MassProfile(MassKind kind, double m0, double shape, Domain domain);
  void check_positive() const;
  void build_knots();

  MassKind kind_;
  double m0_;
  double shape_;
  Domain domain_;
  quad::Options quad_;
  std::vector<double> knot_x_;
  std::vector<double> knot_u_;
};

// Ordering-dependent correction
//   V_m = 1/(4 m^2) [ (4 eps (1 + eta) + (1 + 2 eta)^2) m'^2 / (2 m) - eps m'' ].
double v_m(const MassValues& mv, const OrderingParams& ordering);
double v_m(const MassProfile& profile, const OrderingParams& ordering, double x);

// Mass term added to every constructed potential, evaluated in the expanded
// form 5 m'^2/(32 m^3) - m''/(8 m^2) + V_m, which is regular where m' = 0.
double u_m(const MassValues& mv, const OrderingParams& ordering);
double u_m(const MassProfile& profile, const OrderingParams& ordering, double x);

}  // namespace pdm
