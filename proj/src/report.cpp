#include "pdm/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "pdm/errors.hpp"
#include "pdm/format.hpp"

namespace pdm::report {

using nlohmann::json;

json number(double v, int precision) {
  if (!std::isfinite(v)) return nullptr;
  const std::string s = fmt_num(v, precision);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

json envelope(const std::string& command, const json& config, const json& result) {
  return json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"config", config},
              {"result", result}};
}

std::string Table::csv() const {
  std::ostringstream os;
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
    os << '\n';
  }
  return os.str();
}

namespace {

json numbers(const std::vector<double>& v, int precision) {
  json out = json::array();
  for (double x : v) out.push_back(number(x, precision));
  return out;
}

std::string offset_name(OffsetPolicy p) { return p == OffsetPolicy::Forbidden ? "forbidden" : "fitted"; }

json ordering_json(const OrderingParams& o, int precision) {
  return json{{"label", o.label()},
              {"eta", number(o.eta(), precision)},
              {"epsilon", number(o.epsilon(), precision)},
              {"rho", number(o.rho(), precision)}};
}

}  // namespace

json validation_json(const ValidationReport& r, int precision) {
  json levels = json::array();
  for (const LevelReport& l : r.levels) {
    levels.push_back({{"n", l.n},
                      {"E_analytic", number(l.e_analytic, precision)},
                      {"E_numeric", number(l.e_numeric, precision)},
                      {"abs_err", number(l.abs_err, precision)},
                      {"rel_err", number(l.rel_err, precision)},
                      {"pass", l.pass}});
  }
  return json{{"family", r.family},
              {"ordering", r.ordering},
              {"model", r.model_id},
              {"pass", r.pass},
              {"tolerance", number(r.tolerance, precision)},
              {"offset", number(r.offset, precision)},
              {"offset_policy", offset_name(r.offset_policy)},
              {"order", number(r.order, precision)},
              {"grid_n", r.grid_n},
              {"levels", levels},
              {"numeric", numbers(r.numeric, precision)},
              {"warnings", r.warnings}};
}

Table validation_table(const ValidationReport& r, int precision) {
  Table t{{"family", "ordering", "n", "E_analytic", "E_numeric", "abs_err", "rel_err", "offset",
           "grid_n"},
          {}};
  for (const LevelReport& l : r.levels) {
    t.rows.push_back({r.family, r.ordering, std::to_string(l.n), fmt_num(l.e_analytic, precision),
                      fmt_num(l.e_numeric, precision), fmt_num(l.abs_err, precision),
                      fmt_num(l.rel_err, precision), fmt_num(r.offset, precision),
                      std::to_string(r.grid_n)});
  }
  return t;
}

json spectrum_json(const SpectrumResult& r, int precision) {
  json history = json::array();
  for (std::size_t g = 0; g < r.history.size(); ++g) {
    history.push_back({{"grid_n", r.grids[g]}, {"eigenvalues", numbers(r.history[g], precision)}});
  }
  return json{{"eigenvalues", numbers(r.eigenvalues, precision)},
              {"extrapolated", numbers(r.richardson, precision)},
              {"residuals", numbers(r.residuals, precision)},
              {"matrix_norm", number(r.matrix_norm, precision)},
              {"order", number(r.order, precision)},
              {"last_change", number(r.last_change, precision)},
              {"grid_n", r.grids.empty() ? 0 : r.grids.back()},
              {"history", history},
              {"warnings", r.warnings}};
}

Table spectrum_table(const SpectrumResult& r, int precision) {
  Table t{{"n", "E_numeric", "E_extrapolated", "residual", "grid_n"}, {}};
  const std::size_t grid_n = r.grids.empty() ? 0 : r.grids.back();
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    const double rich = i < r.richardson.size() ? r.richardson[i] : r.eigenvalues[i];
    const double res = i < r.residuals.size() ? r.residuals[i] : 0.0;
    t.rows.push_back({std::to_string(i), fmt_num(r.eigenvalues[i], precision),
                      fmt_num(rich, precision), fmt_num(res, precision), std::to_string(grid_n)});
  }
  return t;
}

json sweep_json(const SweepResult& r, double tolerance, int precision) {
  json spectra = json::array();
  for (std::size_t a = 0; a < r.orderings.size(); ++a) {
    json s = spectrum_json(r.spectra[a], precision);
    s["ordering"] = ordering_json(r.orderings[a], precision);
    spectra.push_back(std::move(s));
  }
  json dev = json::array();
  for (const auto& row : r.deviation) dev.push_back(numbers(row, precision));
  return json{{"levels", r.levels},
              {"max_deviation", number(r.max_deviation, precision)},
              {"tolerance", number(tolerance, precision)},
              {"pass", r.max_deviation <= tolerance},
              {"deviation", dev},
              {"spectra", spectra},
              {"warnings", r.warnings}};
}

Table sweep_table(const SweepResult& r, int precision) {
  Table t{{"ordering", "eta", "epsilon", "rho", "n", "E_numeric", "max_deviation"}, {}};
  for (std::size_t a = 0; a < r.orderings.size(); ++a) {
    const OrderingParams& o = r.orderings[a];
    const std::vector<double>& e = r.spectra[a].richardson;
    for (std::size_t i = 0; i < r.levels && i < e.size(); ++i) {
      double worst = 0.0;
      for (std::size_t b = 0; b < r.orderings.size(); ++b) {
        if (b != a && i < r.spectra[b].richardson.size()) {
          worst = std::max(worst, std::abs(e[i] - r.spectra[b].richardson[i]));
        }
      }
      t.rows.push_back({o.label(), fmt_num(o.eta(), precision), fmt_num(o.epsilon(), precision),
                        fmt_num(o.rho(), precision), std::to_string(i), fmt_num(e[i], precision),
                        fmt_num(worst, precision)});
    }
  }
  return t;
}

json algebra_json(const ConvergenceStudy& s, double min_order, int precision) {
  json rows = json::array();
  for (const ConvergenceRow& r : s.rows) {
    rows.push_back({{"n", r.n},
                    {"dx", number(r.dx, precision)},
                    {"commutator", number(r.commutator, precision)},
                    {"casimir", number(r.casimir, precision)}});
  }
  return json{{"commutator_order", number(s.commutator_order, precision)},
              {"casimir_order", number(s.casimir_order, precision)},
              {"min_order", number(min_order, precision)},
              {"pass", s.commutator_order >= min_order},
              {"rows", rows}};
}

Table algebra_table(const ConvergenceStudy& s, int precision) {
  Table t{{"n", "dx", "commutator", "casimir"}, {}};
  for (const ConvergenceRow& r : s.rows) {
    t.rows.push_back({std::to_string(r.n), fmt_num(r.dx, precision),
                      fmt_num(r.commutator, precision), fmt_num(r.casimir, precision)});
  }
  return t;
}

std::vector<PotentialRow> potential_rows(const PotentialModel& model, double x_lo, double x_hi,
                                         std::size_t points) {
  const MassProfile& mass = model.mass();
  if (!mass.contains(x_lo) || !mass.contains(x_hi)) {
    throw DomainError("x range [" + fmt_num(x_lo) + ", " + fmt_num(x_hi) +
                      "] leaves the mass domain of " + mass.id());
  }
  std::vector<PotentialRow> rows;
  rows.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = points == 1 ? x_lo
                                 : x_lo + (x_hi - x_lo) * static_cast<double>(i) /
                                              static_cast<double>(points - 1);
    const MassValues mv = mass.evaluate(x);
    const double u = mass.mapped_coordinate(x);
    const double vm = v_m(mv, model.ordering());
    const double um = u_m(mv, model.ordering());
    if (model.suppress_vm()) {
      rows.push_back({x, u, mv.m, model.v_at(x, u), 0.0, um - vm});
    } else {
      rows.push_back({x, u, mv.m, model.v_at(x, u), vm, um});
    }
  }
  return rows;
}

json potential_json(const std::vector<PotentialRow>& rows, bool complex, int precision) {
  json out = json::array();
  for (const PotentialRow& r : rows) {
    json row{{"x", number(r.x, precision)}, {"u", number(r.u, precision)},
             {"m", number(r.m, precision)}};
    if (complex) {
      row["V_re"] = number(r.v.real(), precision);
      row["V_im"] = number(r.v.imag(), precision);
    } else {
      row["V"] = number(r.v.real(), precision);
    }
    row["V_m"] = number(r.vm, precision);
    row["U_m"] = number(r.um, precision);
    out.push_back(std::move(row));
  }
  return json{{"complex", complex}, {"rows", out}};
}

Table potential_table(const std::vector<PotentialRow>& rows, bool complex, int precision) {
  Table t;
  t.columns = complex ? std::vector<std::string>{"x", "u", "m", "V_re", "V_im", "V_m", "U_m"}
                      : std::vector<std::string>{"x", "u", "m", "V", "V_m", "U_m"};
  for (const PotentialRow& r : rows) {
    std::vector<std::string> cells{fmt_num(r.x, precision), fmt_num(r.u, precision),
                                   fmt_num(r.m, precision)};
    cells.push_back(fmt_num(r.v.real(), precision));
    if (complex) cells.push_back(fmt_num(r.v.imag(), precision));
    cells.push_back(fmt_num(r.vm, precision));
    cells.push_back(fmt_num(r.um, precision));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

json families_json() {
  json list = json::array();
  for (Family f : all_families()) {
    const FamilyInfo i = family_info(f);
    list.push_back({{"name", std::string(to_string(f))},
                    {"potential", i.potential},
                    {"potential_trig", i.trig ? json(i.potential_trig) : json(nullptr)},
                    {"spectrum", i.spectrum},
                    {"parameters", i.parameters},
                    {"map", i.map},
                    {"trig", i.trig},
                    {"complex", i.complex}});
  }
  return json{{"schema_version", kSchemaVersion}, {"families", list}};
}

std::string families_text() {
  std::ostringstream os;
  for (Family f : all_families()) {
    const FamilyInfo i = family_info(f);
    os << to_string(f);
    if (i.trig) os << " [trig variant]";
    if (i.complex) os << " [complex: analytic only]";
    os << "\n  V(u)       " << i.potential << '\n';
    if (i.trig) os << "  V(u) trig  " << i.potential_trig << '\n';
    os << "  spectrum   " << i.spectrum << '\n';
    os << "  parameters " << i.parameters << '\n';
    os << "  map        " << i.map << '\n';
  }
  return os.str();
}

}  // namespace pdm::report
