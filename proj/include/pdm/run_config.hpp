#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdm/pdm_solver.hpp"
#include "pdm/potential_factory.hpp"
#include "pdm/su11_algebra.hpp"

namespace pdm {

struct FamilyConfig {
  std::string name = "coulomb";
  bool trig = false;
  double alpha = 1.0;
  double b = 0.0;
  double N = 0.0;
  std::optional<double> j;
  double Ze2 = 1.0;
};

struct MassConfig {
  std::string kind = "constant";
  double m0 = 1.0;
  std::optional<double> shape;        // kind default when absent
  std::optional<MassDomain> domain;   // covers the family's u-domain when absent
};

// Either a preset name or explicit exponents.
struct OrderingSpec {
  std::string preset = "ben-daniel-duke";
  std::optional<double> eta;
  std::optional<double> epsilon;
  OrderingParams params() const;
  std::string label() const;
};

struct SolverOptions {
  std::optional<UDomain> u_domain;
  std::size_t n = 500;
  std::size_t k = 4;
  double target_tol = 1e-5;
  int max_doublings = 6;
  std::optional<double> tolerance;
  bool serial = false;
};

struct PotentialOptions {
  std::optional<std::pair<double, double>> x_range;  // model's x-domain when absent
  std::size_t points = 201;
};

struct AlgebraConfig {
  std::string map = "identity";
  double scale = 1.0;
  double phase = 0.0;
  double a = 0.0;
  double b = 1.0;
  double N = 1.0;
  double j = 0.0;
  std::string convention = "as-printed";
  std::pair<double, double> x_range{0.5, 6.0};
  std::vector<std::size_t> grids{200, 400, 800, 1600};
  double min_order = 1.8;
};

struct OutputConfig {
  std::string format = "csv";  // csv | json
  std::string path;            // stdout when empty
  int precision = 12;
};

struct DebugConfig {
  bool suppress_vm = false;  // drop V_m from the potential
  double perturb_g = 0.0;    // shift g in the raising operator
};

struct RunConfig {
  FamilyConfig family;
  MassConfig mass;
  OrderingSpec ordering;
  std::vector<OrderingSpec> sweep;  // all four presets when empty
  SolverOptions solver;
  PotentialOptions potential;
  AlgebraConfig algebra;
  OutputConfig output;
  DebugConfig debug;
};

// Throws ConfigError on unknown keys, wrong types, or invalid values.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
// Effective configuration with every default materialized.
nlohmann::json to_json(const RunConfig& cfg);

std::vector<OrderingSpec> effective_sweep(const RunConfig& cfg);

// Objects built from a config.
MassProfile make_mass(const MassConfig& mc, MassDomain domain);
double default_shape(MassKind kind);
PotentialModel make_model(const RunConfig& cfg);
PotentialModel make_model(const RunConfig& cfg, const OrderingSpec& ordering);
SolverConfig make_solver_config(const RunConfig& cfg);
AlgebraSpec make_algebra_spec(const AlgebraConfig& ac);
CoordinateMap make_map(const AlgebraConfig& ac);

}  // namespace pdm
