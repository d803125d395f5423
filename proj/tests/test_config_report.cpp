#include <doctest.h>

#include <sstream>

#include "pdm/errors.hpp"
#include "pdm/format.hpp"
#include "pdm/report.hpp"
#include "pdm/run_config.hpp"

using namespace pdm;
using nlohmann::json;

TEST_CASE("number formatting is fixed-precision and locale free") {
  CHECK(fmt_num(0.1) == "0.1");
  CHECK(fmt_num(1.0 / 3.0) == "0.333333333333");
  CHECK(fmt_num(-0.0) == "0");
  CHECK(fmt_num(1e-20, 3) == "1e-20");
  CHECK(fmt_num(NAN) == "nan");
  CHECK(fmt_num(-INFINITY) == "-inf");
  CHECK(report::number(1.0 / 3.0, 4).get<double>() == 0.3333);
  CHECK(report::number(NAN, 4).is_null());
}

TEST_CASE("empty config materializes every default") {
  const RunConfig c = parse_config(json::object());
  const json e = to_json(c);
  CHECK(e["family"]["name"] == "coulomb");
  CHECK(e["mass"]["kind"] == "constant");
  CHECK(e["ordering"] == "ben-daniel-duke");
  CHECK(e["sweep"].size() == 4);
  CHECK(e["solver"]["n"] == 500);
  CHECK(e["output"]["precision"] == 12);
  CHECK(e["mass"]["domain"].is_null());
  // the echoed config parses back to itself
  CHECK(to_json(parse_config(e)) == e);
}

TEST_CASE("unknown keys and bad values are rejected") {
  CHECK_THROWS_AS(parse_config(json{{"famly", json::object()}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"solver", {{"grid", 3}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"solver", {{"n", "big"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"solver", {{"n", 4}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"family", {{"name", "yukawa"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"ordering", "weyl"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"ordering", {{"eta", 0.1}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"output", {{"format", "xml"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"mass", {{"domain", {1, 0}}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
}

TEST_CASE("explicit ordering exponents") {
  const RunConfig c = parse_config(json{{"ordering", {{"eta", -0.25}, {"epsilon", -0.5}}}});
  CHECK(c.ordering.params() == OrderingParams(-0.25, -0.5));
  CHECK(c.ordering.label() == "custom");
  CHECK(to_json(c)["ordering"]["eta"] == -0.25);
}

TEST_CASE("models built from a config") {
  const RunConfig c = parse_config(json{{"family", {{"name", "morse"}, {"b", -4}, {"N", 4}}},
                                        {"mass", {{"kind", "exponential"}, {"shape", 0.2}}}});
  const PotentialModel m = make_model(c);
  CHECK(m.name() == "morse");
  CHECK(m.mass().kind() == MassKind::Exponential);
  const UDomain ud = m.default_u_domain();
  CHECK(m.mass().u_range().first <= ud.lo);
  CHECK(m.mass().u_range().second >= ud.hi);
  CHECK(make_solver_config(c).k == 4);
}

TEST_CASE("validation CSV has the fixed column order") {
  ValidationReport r;
  r.family = "coulomb";
  r.ordering = "ben-daniel-duke";
  r.grid_n = 1997;
  r.levels.push_back({0, -0.5, -0.4999999, 1e-7, 2e-7, true});
  const std::string csv = report::validation_table(r, 12).csv();
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "family,ordering,n,E_analytic,E_numeric,abs_err,rel_err,offset,grid_n");
  CHECK(row == "coulomb,ben-daniel-duke,0,-0.5,-0.4999999,1e-07,2e-07,0,1997");
}

TEST_CASE("json reports carry the schema version and the config") {
  const json cfg = to_json(parse_config(json::object()));
  const json env = report::envelope("validate", cfg, json::object());
  CHECK(env["schema_version"] == "1");
  CHECK(env["command"] == "validate");
  CHECK(env["config"] == cfg);
  const json fam = report::families_json();
  CHECK(fam["schema_version"] == "1");
  CHECK(fam["families"].size() == 10);
}

TEST_CASE("potential table for a complex family splits V") {
  const PotentialModel m = build_family(Family::PtScarf, [] {
    FamilyParams p;
    p.b = 3;
    p.N = 3;
    return p;
  }(), MassProfile::constant(1.0), OrderingParams());
  const auto rows = report::potential_rows(m, -1.0, 1.0, 5);
  const report::Table t = report::potential_table(rows, true, 12);
  CHECK(t.columns == std::vector<std::string>{"x", "u", "m", "V_re", "V_im", "V_m", "U_m"});
  CHECK(t.rows.size() == 5);
  CHECK(rows[2].v.imag() == 0.0);  // sinh(0) = 0
}

TEST_CASE("named spellings of the family and shape keys") {
  const RunConfig c = parse_config(json::parse(R"({
    "family": {"family": "morse", "alpha": 1.0, "b": -4, "N": 4, "j": null, "trig": false},
    "mass": {"kind": "exponential", "m0": 1.0, "lambda": 0.5, "domain": [-8, 8]}})"));
  CHECK(c.family.name == "morse");
  CHECK(*c.mass.shape == 0.5);
  CHECK(to_json(c)["mass"]["shape"] == 0.5);
  CHECK(*parse_config(json{{"mass", {{"kind", "rational"}, {"alpha", 3.0}}}}).mass.shape == 3.0);
  CHECK_THROWS_AS(parse_config(json{{"mass", {{"kind", "rational"}, {"lambda", 3.0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"mass", {{"kind", "soliton"}, {"lambda", 0.3}, {"shape", 0.3}}}}),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"family", {{"family", "morse"}, {"name", "morse"}}}}), ConfigError);
}

TEST_CASE("unknown mass kinds list the valid ones") {
  try {
    parse_config(json{{"mass", {{"kind", "gaussian"}}}});
    FAIL("accepted an unknown kind");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("soliton") != std::string::npos);
  }
}
