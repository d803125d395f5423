#include "pdm/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "pdm/errors.hpp"

namespace pdm {

using nlohmann::json;

namespace {

// Reads fields of one JSON object and rejects keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& at(const std::string& key) { return j_.at(key); }

  std::string where(const std::string& key = "") const {
    std::string p = path_.empty() ? "config" : path_;
    return key.empty() ? p : p + "." + key;
  }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(where(key) + " must be a number");
    out = v.get<double>();
  }

  void number(const std::string& key, std::optional<double>& out) {
    if (!has(key)) return;
    double v = 0.0;
    number(key, v);
    out = v;
  }

  void count(const std::string& key, std::size_t& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError(where(key) + " must be a non-negative integer");
    }
    out = v.get<std::size_t>();
  }

  void integer(const std::string& key, int& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(where(key) + " must be an integer");
    out = v.get<int>();
  }

  void flag(const std::string& key, bool& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(where(key) + " must be true or false");
    out = v.get<bool>();
  }

  void text(const std::string& key, std::string& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(where(key) + " must be a string");
    out = v.get<std::string>();
  }

  std::pair<double, double> pair(const std::string& key) {
    const json& v = j_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ConfigError(where(key) + " must be a [lo, hi] pair of numbers");
    }
    const double lo = v[0].get<double>(), hi = v[1].get<double>();
    if (!(lo < hi)) throw ConfigError(where(key) + " requires lo < hi");
    return {lo, hi};
  }

  // Reads `alias` into `out` as a second spelling of `key`; giving both is an error.
  template <typename T>
  void alias(const std::string& key, const std::string& alias, T& out, void (Section::*read)(const std::string&, T&)) {
    if (!has(alias)) return;
    if (has(key)) throw ConfigError(where(alias) + " and " + where(key) + " are the same setting");
    (this->*read)(alias, out);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown key '" + where(key) + "'");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

OrderingSpec parse_ordering(const json& j, const std::string& path) {
  OrderingSpec o;
  if (j.is_string()) {
    o.preset = j.get<std::string>();
  } else {
    Section s(j, path);
    s.text("preset", o.preset);
    s.number("eta", o.eta);
    s.number("epsilon", o.epsilon);
    s.finish();
    if (o.eta.has_value() != o.epsilon.has_value()) {
      throw ConfigError(path + " needs both eta and epsilon");
    }
    if (o.eta) o.preset.clear();
  }
  if (!o.eta) {
    try {
      (void)OrderingParams::preset(o.preset);
    } catch (const Error& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }
  return o;
}

json ordering_json(const OrderingSpec& o) {
  if (!o.eta) return o.preset;
  return json{{"eta", *o.eta}, {"epsilon", *o.epsilon}};
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

OrderingParams OrderingSpec::params() const {
  if (eta) return OrderingParams(*eta, *epsilon);
  return OrderingParams::preset(preset);
}

std::string OrderingSpec::label() const { return params().label(); }

RunConfig parse_config(const json& doc) {
  RunConfig c;
  Section root(doc, "");

  if (root.has("family")) {
    Section s(root.at("family"), "family");
    s.text("name", c.family.name);
    s.alias("name", "family", c.family.name, &Section::text);
    s.flag("trig", c.family.trig);
    s.number("alpha", c.family.alpha);
    s.number("b", c.family.b);
    s.number("N", c.family.N);
    s.number("j", c.family.j);
    s.number("Ze2", c.family.Ze2);
    s.finish();
  }
  (void)family_from_string(c.family.name);

  if (root.has("mass")) {
    Section s(root.at("mass"), "mass");
    s.text("kind", c.mass.kind);
    s.number("m0", c.mass.m0);
    s.number("shape", c.mass.shape);
    // named spellings of the shape parameter
    const std::string named = c.mass.kind == "rational" ? "alpha" : "lambda";
    if (c.mass.kind != "constant") s.alias("shape", named, c.mass.shape, &Section::number);
    if (s.has("domain")) {
      const auto [lo, hi] = s.pair("domain");
      c.mass.domain = MassDomain{lo, hi};
    }
    s.finish();
  }
  (void)mass_kind_from_string(c.mass.kind);
  if (!(c.mass.m0 > 0.0)) throw ConfigError("mass.m0 must be positive");

  if (root.has("ordering")) c.ordering = parse_ordering(root.at("ordering"), "ordering");
  if (root.has("sweep")) {
    const json& sw = root.at("sweep");
    if (!sw.is_array()) throw ConfigError("sweep must be a list of orderings");
    for (std::size_t i = 0; i < sw.size(); ++i) {
      c.sweep.push_back(parse_ordering(sw[i], "sweep[" + std::to_string(i) + "]"));
    }
  }

  if (root.has("solver")) {
    Section s(root.at("solver"), "solver");
    if (s.has("u_domain")) {
      const auto [lo, hi] = s.pair("u_domain");
      c.solver.u_domain = UDomain{lo, hi};
    }
    s.count("n", c.solver.n);
    s.count("k", c.solver.k);
    s.number("target_tol", c.solver.target_tol);
    s.integer("max_doublings", c.solver.max_doublings);
    s.number("tolerance", c.solver.tolerance);
    s.flag("serial", c.solver.serial);
    s.finish();
  }
  if (c.solver.n < 32) throw ConfigError("solver.n must be at least 32");
  if (c.solver.k < 1) throw ConfigError("solver.k must be at least 1");
  if (!(c.solver.target_tol > 0.0)) throw ConfigError("solver.target_tol must be positive");
  if (c.solver.max_doublings < 2) throw ConfigError("solver.max_doublings must be at least 2");

  if (root.has("potential")) {
    Section s(root.at("potential"), "potential");
    if (s.has("x_range")) c.potential.x_range = s.pair("x_range");
    s.count("points", c.potential.points);
    s.finish();
  }
  if (c.potential.points < 2) throw ConfigError("potential.points must be at least 2");

  if (root.has("algebra")) {
    Section s(root.at("algebra"), "algebra");
    s.text("map", c.algebra.map);
    s.number("scale", c.algebra.scale);
    s.number("phase", c.algebra.phase);
    s.number("a", c.algebra.a);
    s.number("b", c.algebra.b);
    s.number("N", c.algebra.N);
    s.number("j", c.algebra.j);
    s.text("convention", c.algebra.convention);
    if (s.has("x_range")) c.algebra.x_range = s.pair("x_range");
    if (s.has("grids")) {
      const json& g = s.at("grids");
      if (!g.is_array() || g.size() < 3) throw ConfigError("algebra.grids needs at least 3 sizes");
      c.algebra.grids.clear();
      for (const json& v : g) {
        if (!v.is_number_integer() || v.get<long long>() < 8) {
          throw ConfigError("algebra.grids entries must be integers >= 8");
        }
        c.algebra.grids.push_back(v.get<std::size_t>());
      }
    }
    s.number("min_order", c.algebra.min_order);
    s.finish();
  }
  (void)map_kind_from_string(c.algebra.map);
  (void)rung_convention_from_string(c.algebra.convention);

  if (root.has("output")) {
    Section s(root.at("output"), "output");
    s.text("format", c.output.format);
    s.text("path", c.output.path);
    s.integer("precision", c.output.precision);
    s.finish();
  }
  if (c.output.format != "csv" && c.output.format != "json") {
    throw ConfigError("output.format must be csv or json");
  }
  if (c.output.precision < 1 || c.output.precision > 17) {
    throw ConfigError("output.precision must lie in [1, 17]");
  }

  if (root.has("debug")) {
    Section s(root.at("debug"), "debug");
    s.flag("suppress_vm", c.debug.suppress_vm);
    s.number("perturb_g", c.debug.perturb_g);
    s.finish();
  }
  root.finish();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  json j;
  j["family"] = {{"name", c.family.name},   {"trig", c.family.trig}, {"alpha", c.family.alpha},
                 {"b", c.family.b},         {"N", c.family.N},       {"j", optional_json(c.family.j)},
                 {"Ze2", c.family.Ze2}};
  const MassKind kind = mass_kind_from_string(c.mass.kind);
  j["mass"] = {{"kind", c.mass.kind},
               {"m0", c.mass.m0},
               {"shape", c.mass.shape.value_or(default_shape(kind))},
               {"domain", c.mass.domain ? json::array({c.mass.domain->lo, c.mass.domain->hi})
                                        : json(nullptr)}};
  j["ordering"] = ordering_json(c.ordering);
  j["sweep"] = json::array();
  for (const OrderingSpec& o : effective_sweep(c)) j["sweep"].push_back(ordering_json(o));
  j["solver"] = {{"u_domain", c.solver.u_domain
                                  ? json::array({c.solver.u_domain->lo, c.solver.u_domain->hi})
                                  : json(nullptr)},
                 {"n", c.solver.n},
                 {"k", c.solver.k},
                 {"target_tol", c.solver.target_tol},
                 {"max_doublings", c.solver.max_doublings},
                 {"tolerance", optional_json(c.solver.tolerance)},
                 {"serial", c.solver.serial}};
  j["potential"] = {{"x_range", c.potential.x_range
                                    ? json::array({c.potential.x_range->first,
                                                   c.potential.x_range->second})
                                    : json(nullptr)},
                    {"points", c.potential.points}};
  j["algebra"] = {{"map", c.algebra.map},
                  {"scale", c.algebra.scale},
                  {"phase", c.algebra.phase},
                  {"a", c.algebra.a},
                  {"b", c.algebra.b},
                  {"N", c.algebra.N},
                  {"j", c.algebra.j},
                  {"convention", c.algebra.convention},
                  {"x_range", json::array({c.algebra.x_range.first, c.algebra.x_range.second})},
                  {"grids", c.algebra.grids},
                  {"min_order", c.algebra.min_order}};
  j["output"] = {{"format", c.output.format}, {"path", c.output.path},
                 {"precision", c.output.precision}};
  j["debug"] = {{"suppress_vm", c.debug.suppress_vm}, {"perturb_g", c.debug.perturb_g}};
  return j;
}

std::vector<OrderingSpec> effective_sweep(const RunConfig& cfg) {
  if (!cfg.sweep.empty()) return cfg.sweep;
  std::vector<OrderingSpec> all;
  for (std::string_view name : OrderingParams::preset_names()) {
    OrderingSpec o;
    o.preset = std::string(name);
    all.push_back(o);
  }
  return all;
}

double default_shape(MassKind kind) {
  switch (kind) {
    case MassKind::Constant: return 0.0;
    case MassKind::Rational: return 2.0;
    case MassKind::Exponential:
    case MassKind::Soliton: return 0.2;
  }
  return 0.0;
}

MassProfile make_mass(const MassConfig& mc, MassDomain domain) {
  const MassKind kind = mass_kind_from_string(mc.kind);
  const double shape = mc.shape.value_or(default_shape(kind));
  switch (kind) {
    case MassKind::Constant: return MassProfile::constant(mc.m0, domain);
    case MassKind::Rational: return MassProfile::rational(mc.m0, shape, domain);
    case MassKind::Exponential: return MassProfile::exponential(mc.m0, shape, domain);
    case MassKind::Soliton: return MassProfile::soliton(mc.m0, shape, domain);
  }
  throw ConfigError("unknown mass kind");
}

PotentialModel make_model(const RunConfig& cfg, const OrderingSpec& ordering) {
  const Family f = family_from_string(cfg.family.name);
  FamilyParams p;
  p.alpha = cfg.family.alpha;
  p.b = cfg.family.b;
  p.N = cfg.family.N;
  p.j = cfg.family.j;
  p.Ze2 = cfg.family.Ze2;
  p.trig = cfg.family.trig;
  const FamilySelector sel = select_family(f, p.trig, p.alpha);
  MassDomain domain;
  if (cfg.mass.domain) {
    domain = *cfg.mass.domain;
  } else {
    // The u-domain depends only on the family parameters, so a constant-mass
    // probe model supplies it.
    const PotentialModel probe = build_family(sel, p, MassProfile::constant(1.0), ordering.params());
    const UDomain ud = cfg.solver.u_domain.value_or(probe.default_u_domain());
    const MassKind kind = mass_kind_from_string(cfg.mass.kind);
    domain = covering_domain(kind, cfg.mass.m0, cfg.mass.shape.value_or(default_shape(kind)), ud.lo,
                             ud.hi);
  }
  PotentialModel model = build_family(sel, p, make_mass(cfg.mass, domain), ordering.params());
  model.set_suppress_vm(cfg.debug.suppress_vm);
  return model;
}

PotentialModel make_model(const RunConfig& cfg) { return make_model(cfg, cfg.ordering); }

SolverConfig make_solver_config(const RunConfig& cfg) {
  SolverConfig s;
  s.u_domain = cfg.solver.u_domain;
  s.n = cfg.solver.n;
  s.k = cfg.solver.k;
  s.target_tol = cfg.solver.target_tol;
  s.max_doublings = cfg.solver.max_doublings;
  s.tolerance = cfg.solver.tolerance;
  s.exec = cfg.solver.serial ? Exec::Serial : Exec::Parallel;
  return s;
}

AlgebraSpec make_algebra_spec(const AlgebraConfig& ac) {
  AlgebraSpec s;
  s.a = ac.a;
  s.b = ac.b;
  s.j = ac.j;
  s.N = ac.N;
  return s;
}

CoordinateMap make_map(const AlgebraConfig& ac) {
  return CoordinateMap(map_kind_from_string(ac.map), ac.scale, ac.phase);
}

}  // namespace pdm
