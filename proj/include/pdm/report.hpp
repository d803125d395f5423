#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pdm/pdm_solver.hpp"
#include "pdm/su11_algebra.hpp"

namespace pdm::report {

inline constexpr const char* kSchemaVersion = "1";

// Value rounded to `precision` significant digits; null for nan and inf.
nlohmann::json number(double v, int precision);

// {"schema_version", "command", "config", "result"}
nlohmann::json envelope(const std::string& command, const nlohmann::json& config,
                        const nlohmann::json& result);

// Rows of text cells under a fixed header.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string csv() const;
};

nlohmann::json validation_json(const ValidationReport& r, int precision);
// family, ordering, n, E_analytic, E_numeric, abs_err, rel_err, offset, grid_n
Table validation_table(const ValidationReport& r, int precision);

nlohmann::json spectrum_json(const SpectrumResult& r, int precision);
// n, E_numeric, E_extrapolated, residual, grid_n
Table spectrum_table(const SpectrumResult& r, int precision);

nlohmann::json sweep_json(const SweepResult& r, double tolerance, int precision);
// ordering, eta, epsilon, rho, n, E_numeric, max_deviation
Table sweep_table(const SweepResult& r, int precision);

nlohmann::json algebra_json(const ConvergenceStudy& s, double min_order, int precision);
// n, dx, commutator, casimir
Table algebra_table(const ConvergenceStudy& s, int precision);

struct PotentialRow {
  double x, u, m;
  cplx v;
  double vm, um;
};
std::vector<PotentialRow> potential_rows(const PotentialModel& model, double x_lo, double x_hi,
                                         std::size_t points);
nlohmann::json potential_json(const std::vector<PotentialRow>& rows, bool complex, int precision);
// x, u, m, V, V_m, U_m; complex models split V into V_re and V_im
Table potential_table(const std::vector<PotentialRow>& rows, bool complex, int precision);

nlohmann::json families_json();
std::string families_text();

}  // namespace pdm::report
