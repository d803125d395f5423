#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdm/coordinate_map.hpp"
#include "pdm/mass_profile.hpp"
#include "pdm/su11_algebra.hpp"

namespace pdm {

enum class Family {
  Coulomb,
  Oscillator,
  Morse,
  PoschlTeller,
  GenPoschlTeller,
  Scarf,
  PtScarf,
  Eckart,
  Hulthen,
  RosenMorse,
};

std::string_view to_string(Family f);
Family family_from_string(std::string_view name);  // throws ConfigError
std::array<Family, 10> all_families();
bool has_trig_variant(Family f);

// Reference entry for one family: closed-form potential in u, bound-state
// spectrum, parameter range, and which realizations exist.
struct FamilyInfo {
  Family family;
  std::string potential;
  std::string potential_trig;  // empty when there is no oscillatory variant
  std::string spectrum;
  std::string parameters;
  std::string map;
  bool trig = false;
  bool complex = false;
};
FamilyInfo family_info(Family f);

// Master-formula parameters. b is complex because several oscillatory and
// PT-symmetric realizations need an imaginary ladder constant.
struct MasterParams {
  double a = 0.0;
  cplx b = 0.0;
  double N = 0.0;
  double j = 0.0;
};

// V(x) - E from the general expression
//   (2bN + r(b^2 + a(4N^2 - 1) + 2abNr)) r'^2 / (2 m r (1 - a r^2)^2)
//   + j(j+1) r'^2 / (2 m r^2) + 3 r''^2 / (8 m r'^2) - r''' / (4 m r') + V_m
// with x-derivatives of r taken through u. For a = 0 the reduced form
//   (b^2/2 + j(j+1)/(2 r^2) + bN/r) r'^2/m + 3 r''^2/(8 m r'^2) - r'''/(4 m r') + V_m
// is evaluated instead.
cplx master_potential(const MasterParams& p, const CoordinateMap& map, const MassProfile& mass,
                      const OrderingParams& ordering, double x);
cplx master_potential(const AlgebraSpec& spec, const CoordinateMap& map,
                      const MassProfile& mass, const OrderingParams& ordering, double x);
// Same, with u(x) already known.
cplx master_potential_at(const MasterParams& p, const CoordinateMap& map,
                         const MassProfile& mass, const OrderingParams& ordering, double x,
                         double u);

// (lambda0, lambda1, lambda2) with (lambda0 + lambda1/r + lambda2/r^2) (dr/du)^2 = 1.
struct LambdaTriple {
  double l0 = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
};

struct FamilyParams {
  double alpha = 1.0;
  double b = 0.0;
  double N = 0.0;
  std::optional<double> j;
  double Ze2 = 1.0;
  bool trig = false;
};

// Which quantum number moves with the level index n.
enum class Running { N, j };
enum class OffsetPolicy { Forbidden, Fitted };

struct Level {
  int n;
  double N;
  double j;
  cplx b;  // ladder constant of this level
  cplx E;
};

struct SpectrumDescriptor {
  Running running;
  std::string mapping;         // n -> (N, j) rule
  std::string energy_formula;  // analytic E in terms of b, N, j and alpha
  std::optional<int> bound_count;  // nullopt: infinitely many levels
  double continuum_threshold;      // +inf for confining potentials
  OffsetPolicy offset;
};

struct FamilySelector {
  Family family = Family::Coulomb;
  bool trig = false;
  CoordinateMap map;
  double a = 0.0;
  std::optional<LambdaTriple> lambda;  // populated exactly when a == 0
};

// Interval in u on which a family is solved. Open ends sit on singular points
// of V and become Dirichlet boundaries.
struct UDomain {
  double lo;
  double hi;
};

class PotentialModel {
 public:
  const FamilySelector& selector() const { return sel_; }
  const FamilyParams& params() const { return params_; }
  const MassProfile& mass() const { return mass_; }
  const OrderingParams& ordering() const { return ordering_; }
  const SpectrumDescriptor& descriptor() const { return desc_; }
  bool is_complex() const { return complex_; }
  std::string id() const;
  std::string name() const;  // family tag plus "-trig" for oscillatory variants

  // Closed-form family potential as a function of u (no mass term).
  cplx v_closed_u(double u) const;
  // V(x) = V_closed(u(x)) + U_m(x).
  cplx v_complex(double x) const;
  double v(double x) const;  // throws ComplexModel for complex models
  // Same as v with u(x) supplied by the caller.
  cplx v_at(double x, double u) const;

  // The suppress flag drops V_m from U_m; used only to show that V_m is the
  // term that restores ordering independence.
  void set_suppress_vm(bool on) { suppress_vm_ = on; }
  bool suppress_vm() const { return suppress_vm_; }

  Level level(int n) const;
  cplx analytic_energy(int n) const;
  // Levels n = 0.. up to the bound count (or max_levels when unbounded).
  std::vector<Level> levels(int max_levels) const;

  // Master-formula parameters matching the closed form for the ground level.
  MasterParams master_params() const;

  UDomain default_u_domain() const;
  std::vector<double> singular_u(double lo, double hi) const;

 private:
  friend PotentialModel build_family(const FamilySelector&, const FamilyParams&,
                                     const MassProfile&, const OrderingParams&);
  PotentialModel(FamilySelector sel, FamilyParams params, MassProfile mass,
                 OrderingParams ordering);

  FamilySelector sel_;
  FamilyParams params_;
  MassProfile mass_;
  OrderingParams ordering_;
  SpectrumDescriptor desc_;
  bool complex_ = false;
  bool suppress_vm_ = false;
};

// Selector for a family tag; fills in the map template, a, and lambda triple
// (scaled by alpha where the template depends on it).
FamilySelector select_family(Family f, bool trig, double alpha = 1.0);

// Throws ParameterError when the parameters leave the bound-state range.
PotentialModel build_family(const FamilySelector& selector, const FamilyParams& params,
                            const MassProfile& mass, const OrderingParams& ordering);
PotentialModel build_family(Family f, const FamilyParams& params, const MassProfile& mass,
                            const OrderingParams& ordering);

// Same model with another ordering (the closed form changes through U_m).
PotentialModel with_ordering(const PotentialModel& model, const OrderingParams& ordering);
PotentialModel with_mass(const PotentialModel& model, const MassProfile& mass);

// max over samples of |(lambda0 + lambda1/r + lambda2/r^2) (dr/du)^2 - 1|.
double lambda_condition_residual(const FamilySelector& selector,
                                 const std::vector<double>& u_samples);

// x-interval covering the model's default u-domain within its mass domain.
struct XDomain {
  double lo;
  double hi;
  bool clamped_lo = false;
  bool clamped_hi = false;
};
XDomain x_domain_for(const PotentialModel& model, std::optional<UDomain> u = std::nullopt);

// max over the grid of |(V_closed(x) - E) - master(x)|, skipping the end
// points (which may sit on singularities) and any point within the singular
// guard.
double consistency_check(const PotentialModel& model, double x_lo, double x_hi,
                         std::size_t n = 1000);
double consistency_check(const PotentialModel& model, std::size_t n = 1000);

// Mass domain, grown outward from [-1, 1], whose u-range covers [u_lo, u_hi]
// while m stays within [1e-6, 1e6] m0.
MassDomain covering_domain(MassKind kind, double m0, double shape, double u_lo, double u_hi);

}  // namespace pdm
