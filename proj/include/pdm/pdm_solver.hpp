#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdm/kernels.hpp"
#include "pdm/potential_factory.hpp"

namespace pdm {

using kernels::Exec;

struct Grid {
  double x_min;
  double x_max;
  std::size_t n;  // points including both Dirichlet ends

  Grid(double x_min, double x_max, std::size_t n);
  double dx() const { return (x_max - x_min) / static_cast<double>(n - 1); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
  // Same end points, twice as many intervals.
  Grid doubled() const { return Grid(x_min, x_max, 2 * (n - 1) + 1); }
};

struct DiscretizedHamiltonian {
  kernels::Tridiagonal matrix;  // interior points only
  Grid grid;
  std::vector<double> x;  // interior points
  std::vector<double> m;  // mass at interior points
  std::vector<double> u;  // mapped coordinate at interior points
  std::vector<double> v;  // potential at interior points
  OrderingParams ordering;
  std::string mass_id;
  std::string model_id;

  std::size_t dimension() const { return matrix.size(); }
  double norm() const { return matrix.norm_inf(); }
  double asymmetry() const { return matrix.max_asymmetry(); }
};

// Assemble the von Roos Hamiltonian on a grid for an arbitrary real potential
// V(x, u). The ends of the grid are Dirichlet boundaries.
DiscretizedHamiltonian discretize(const MassProfile& mass, const OrderingParams& ordering,
                                  const std::function<double(double, double)>& potential,
                                  const Grid& grid, Exec exec = Exec::Parallel);
// Same for a family model; interior points must stay at least one spacing
// away from the model's singular points.
DiscretizedHamiltonian discretize(const PotentialModel& model, const Grid& grid,
                                  Exec exec = Exec::Parallel);

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> residuals;    // ||H v - E v||_2 with ||v||_2 = 1
  double matrix_norm = 0.0;
  // Grid functions psi normalized to sum psi^2 dx = 1 (empty unless kept).
  std::vector<std::vector<double>> eigenvectors;
  std::vector<double> x;  // interior grid points for the vectors
  std::vector<double> u;
  double dx = 0.0;

  // Refinement metadata.
  std::vector<std::size_t> grids;           // point counts used
  std::vector<std::vector<double>> history;  // eigenvalues per grid
  std::vector<double> richardson;            // extrapolated eigenvalues
  double order = 0.0;                        // observed convergence order
  double last_change = 0.0;                  // max change between the last two grids
  std::vector<std::string> warnings;
};

inline constexpr double kResidualFactor = 1e-8;

SpectrumResult eigen_lowest(const DiscretizedHamiltonian& h, std::size_t k, bool keep_vectors = false,
                            Exec exec = Exec::Parallel);

struct SolverConfig {
  std::optional<UDomain> u_domain;  // defaults to the family's domain
  std::size_t n = 500;               // base grid point count
  std::size_t k = 4;                 // levels to solve for
  double target_tol = 1e-5;          // refinement stop criterion, see refine_until
  int max_doublings = 6;
  std::optional<double> tolerance;  // validation tolerance (relative)
  bool keep_vectors = false;
  Exec exec = Exec::Parallel;
};

// Doubles the grid until two successive Richardson-extrapolated eigenvalue
// sets differ by less than target_tol, measured as |dE| / max(1, |E|) over the
// levels. At least three grids are always used so an observed order exists.
// Levels below the continuum threshold only; the count is truncated (with a
// warning) when fewer than k are bound on the grid.
SpectrumResult refine_until(const std::function<DiscretizedHamiltonian(const Grid&)>& build,
                            const Grid& base, std::size_t k, double target_tol,
                            int max_doublings = 6, double threshold = INFINITY,
                            bool keep_vectors = false, Exec exec = Exec::Parallel);
SpectrumResult refine_until(const PotentialModel& model, const Grid& base, std::size_t k,
                            double target_tol, int max_doublings = 6, bool keep_vectors = false,
                            Exec exec = Exec::Parallel);

// Grid spanning the model's domain (or the configured u-domain) with n points.
Grid default_grid(const PotentialModel& model, const SolverConfig& cfg);

struct LevelReport {
  int n;
  double e_analytic;
  double e_numeric;
  double abs_err;
  double rel_err;
  bool pass;
};

struct ValidationReport {
  std::string family;
  std::string ordering;
  std::string model_id;
  std::vector<LevelReport> levels;
  double offset = 0.0;
  OffsetPolicy offset_policy = OffsetPolicy::Fitted;
  double tolerance = 0.0;
  bool pass = false;
  double order = 0.0;
  std::size_t grid_n = 0;
  std::vector<double> numeric;  // every numeric level below the continuum
  std::vector<std::string> warnings;
};

// Tolerance used when the config does not set one: 1e-4 relative for a
// constant mass, 1e-3 otherwise.
double default_tolerance(const PotentialModel& model);

// Throws MatchFailure listing unmatched analytic levels when `strict` is set;
// otherwise the failure is recorded in the report.
ValidationReport validate_family(const PotentialModel& model, const SolverConfig& cfg,
                                 bool strict = false);

struct SweepResult {
  std::vector<OrderingParams> orderings;
  std::vector<SpectrumResult> spectra;
  std::vector<std::vector<double>> deviation;  // pairwise max |E_a - E_b| over k levels
  double max_deviation = 0.0;
  std::size_t levels = 0;  // levels compared
  std::vector<std::string> warnings;
};

SweepResult ordering_sweep(const PotentialModel& model, const std::vector<OrderingParams>& orderings,
                           const SolverConfig& cfg);

struct TransformedState {
  int n;
  double energy;
  std::vector<double> psi;
  std::vector<cplx> reduced;  // R = -r'^2 / (2 m r^2) psi
  int nodes;
};

// Needs eigenvectors; throws SingularOnGrid where r = 0 on the grid.
std::vector<TransformedState> eigenvector_transform(const SpectrumResult& result,
                                                    const PotentialModel& model);

// Sign changes of a grid function, ignoring samples below 1e-8 of its peak.
int count_nodes(const std::vector<double>& f);

}  // namespace pdm
