#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pdm/coordinate_map.hpp"
#include "pdm/mass_profile.hpp"

namespace pdm {

// su(1,1) representation parameters: deformation a, ladder constant b,
// Casimir parameter j (eigenvalue j(j+1)) and J0 label N.
struct AlgebraSpec {
  double a = 0.0;
  double b = 0.0;
  double j = 0.0;
  double N = 0.0;

  double casimir() const { return j * (j + 1.0); }
  // True when N + j is a non-negative integer.
  bool on_ladder() const;
};

// How the J0 eigenvalue of e^{-i N phi} R(x) relates to N.
//   AsPrinted: J0 |jN> = N |jN>.
//   Derived:   J0 = -i d/dphi acting on e^{-i N phi} gives -N.
enum class RungConvention { AsPrinted, Derived };

std::string to_string(RungConvention c);
RungConvention rung_convention_from_string(const std::string& name);
double rung_value(double N, RungConvention c);

struct GeneratorFunctions {
  double h;  // coefficient of d/dx
  double f;  // coefficient of J0
  double c;  // additive ladder term
  double g;  // gauge function
};

// Mapped-coordinate jet converted to x-derivatives r', r'', r''' through
// u'(x) = sqrt(m).
struct XJet {
  cplx r, dr, d2r, d3r;
};
XJet x_jet(const MapJet& uj, const MassValues& mv);

// Minimum distance (in u) to a map singularity before evaluation is refused.
inline constexpr double kSingularGuard = 1e-6;

GeneratorFunctions generator_functions(const AlgebraSpec& spec, const CoordinateMap& map,
                                       const MassProfile& mass, double x);

// Samples on the uniform grid x_k = x_lo + k dx, k = 0..n-1.
struct GridFunction {
  double x_lo = 0.0;
  double dx = 1.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double x(std::size_t k) const { return x_lo + static_cast<double>(k) * dx; }
  static GridFunction sample(const std::function<double(double)>& fn, double x_lo,
                             double x_hi, std::size_t n);
};

enum class Ladder { Raise, Lower };

// Generator coefficients tabulated on a grid, reused across operator
// applications.
class LadderGrid {
 public:
  LadderGrid(const AlgebraSpec& spec, const CoordinateMap& map, const MassProfile& mass,
             double x_lo, double dx, std::size_t n);

  std::size_t size() const { return coeff_.size(); }
  double x_lo() const { return x_lo_; }
  double dx() const { return dx_; }
  const GeneratorFunctions& at(std::size_t k) const { return coeff_[k]; }

  // (+-h d/dx +- (g + shift) + f M + c) fn, with M the J0 eigenvalue of the
  // input rung. Central differences inside, one-sided at the two ends.
  GridFunction apply(Ladder dir, double M, const GridFunction& fn, double g_shift = 0.0) const;

 private:
  double x_lo_;
  double dx_;
  std::vector<GeneratorFunctions> coeff_;
};

GridFunction reduced_ladder_apply(const AlgebraSpec& spec, const CoordinateMap& map,
                                  const MassProfile& mass, double M, Ladder dir,
                                  const GridFunction& fn);

struct AlgebraOptions {
  RungConvention convention = RungConvention::AsPrinted;
  // Added to g in the raising operator only. A shift applied symmetrically to
  // both ladders cancels from [J+, J-] identically, so it cannot act as a
  // negative control.
  double perturb_g = 0.0;
  // Points excluded from each end of the residual norm.
  std::size_t edge = 2;
};

// max |([J+, J-] + 2 J0) fn| over the interior.
double commutator_residual(const LadderGrid& grid, double N, const GridFunction& fn,
                           const AlgebraOptions& opt = {});
double commutator_residual(const AlgebraSpec& spec, const CoordinateMap& map,
                           const MassProfile& mass, const GridFunction& fn,
                           const AlgebraOptions& opt = {});

// max |((-J+J- + J0^2 - J0) - (-J-J+ + J0^2 + J0)) fn| over the interior.
double casimir_identity_residual(const LadderGrid& grid, double N, const GridFunction& fn,
                                 const AlgebraOptions& opt = {});
double casimir_identity_residual(const AlgebraSpec& spec, const CoordinateMap& map,
                                 const MassProfile& mass, const GridFunction& fn,
                                 const AlgebraOptions& opt = {});

struct ConvergenceRow {
  std::size_t n;
  double dx;
  double commutator;
  double casimir;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double commutator_order;  // least-squares slope of log residual vs log dx
  double casimir_order;
};

ConvergenceStudy algebra_convergence(const AlgebraSpec& spec, const CoordinateMap& map,
                                     const MassProfile& mass,
                                     const std::function<double(double)>& test_fn,
                                     double x_lo, double x_hi,
                                     const std::vector<std::size_t>& grids,
                                     const AlgebraOptions& opt = {});

// Slope of the least-squares line through (log x, log y).
double fitted_order(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace pdm
