// pdm-spectra: spectra, potentials and algebra checks for position-dependent
// mass models. Exit codes: 0 pass, 1 computation or validation failure,
// 2 usage or configuration error.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "pdm/errors.hpp"
#include "pdm/format.hpp"
#include "pdm/report.hpp"
#include "pdm/run_config.hpp"

using namespace pdm;
using nlohmann::json;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

// Values given on the command line. Each one overrides the config file only
// when its option was actually used.
struct Overrides {
  std::string config_path;
  std::string echo_config;

  std::string family;
  bool trig = false;
  double alpha = 0, b = 0, N = 0, j = 0, Ze2 = 0;

  std::string mass;
  double m0 = 0, shape = 0;
  std::vector<double> mass_domain;

  std::string ordering;
  double eta = 0, epsilon = 0;
  std::vector<std::string> sweep;
  bool suppress_vm = false;

  std::size_t n = 0, k = 0;
  double target_tol = 0, tolerance = 0;
  int max_doublings = 0;
  std::vector<double> u_domain;
  bool serial = false;

  std::vector<double> x_range;
  std::size_t points = 0;

  std::string map, convention;
  double map_scale = 0, map_phase = 0, alg_a = 0, alg_b = 0, alg_N = 0, alg_j = 0;
  std::vector<std::size_t> grids;
  double perturb_g = 0, min_order = 0;

  std::string format, output;
  int precision = 0;

  std::vector<std::function<void(RunConfig&)>> apply;
};

template <class T, class F>
void bind_option(CLI::App* app, Overrides& ov, const std::string& name, T& target, F&& setter,
                 const std::string& help) {
  CLI::Option* opt = app->add_option(name, target, help);
  ov.apply.push_back([opt, setter](RunConfig& c) {
    if (opt->count() > 0) setter(c);
  });
}

void bind_switch(CLI::App* app, Overrides& ov, const std::string& name, bool& target,
                 std::function<void(RunConfig&)> setter, const std::string& help) {
  CLI::Option* opt = app->add_flag(name, target, help);
  ov.apply.push_back([opt, setter](RunConfig& c) {
    if (opt->count() > 0) setter(c);
  });
}

void add_common(CLI::App* app, Overrides& ov) {
  app->add_option("--config", ov.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app->add_option("--echo-config", ov.echo_config, "write the effective configuration to this file");
  bind_option(app, ov, "--format", ov.format, [&ov](RunConfig& c) { c.output.format = ov.format; },
              "csv or json");
  bind_option(app, ov, "--output,-o", ov.output, [&ov](RunConfig& c) { c.output.path = ov.output; },
              "output file (stdout when omitted)");
  bind_option(app, ov, "--precision", ov.precision,
              [&ov](RunConfig& c) { c.output.precision = ov.precision; }, "significant digits");
}

void add_mass(CLI::App* app, Overrides& ov) {
  bind_option(app, ov, "--mass", ov.mass, [&ov](RunConfig& c) { c.mass.kind = ov.mass; },
              "constant | rational | exponential | soliton");
  bind_option(app, ov, "--m0", ov.m0, [&ov](RunConfig& c) { c.mass.m0 = ov.m0; }, "mass scale");
  bind_option(app, ov, "--shape", ov.shape, [&ov](RunConfig& c) { c.mass.shape = ov.shape; },
              "rational alpha or exponential/soliton lambda");
  CLI::Option* dom = app->add_option("--mass-domain", ov.mass_domain, "x-interval of the mass profile")
                         ->expected(2);
  ov.apply.push_back([dom, &ov](RunConfig& c) {
    if (dom->count() > 0) c.mass.domain = MassDomain{ov.mass_domain[0], ov.mass_domain[1]};
  });
}

void add_ordering(CLI::App* app, Overrides& ov) {
  bind_option(app, ov, "--ordering", ov.ordering,
              [&ov](RunConfig& c) {
                c.ordering = OrderingSpec{};
                c.ordering.preset = ov.ordering;
              },
              "ordering preset");
  CLI::Option* eta = app->add_option("--eta", ov.eta, "von Roos eta (with --epsilon)");
  CLI::Option* eps = app->add_option("--epsilon", ov.epsilon, "von Roos epsilon (with --eta)");
  eta->needs(eps);
  eps->needs(eta);
  ov.apply.push_back([eta, &ov](RunConfig& c) {
    if (eta->count() > 0) {
      c.ordering.eta = ov.eta;
      c.ordering.epsilon = ov.epsilon;
      c.ordering.preset.clear();
    }
  });
}

void add_family(CLI::App* app, Overrides& ov) {
  bind_option(app, ov, "--family", ov.family, [&ov](RunConfig& c) { c.family.name = ov.family; },
              "family tag (see `families`)");
  bind_switch(app, ov, "--trig", ov.trig, [&ov](RunConfig& c) { c.family.trig = ov.trig; },
              "use the oscillatory variant");
  bind_option(app, ov, "--alpha", ov.alpha, [&ov](RunConfig& c) { c.family.alpha = ov.alpha; }, "range parameter");
  bind_option(app, ov, "--b", ov.b, [&ov](RunConfig& c) { c.family.b = ov.b; }, "ladder constant b");
  bind_option(app, ov, "--N", ov.N, [&ov](RunConfig& c) { c.family.N = ov.N; }, "J0 label N");
  bind_option(app, ov, "--j", ov.j, [&ov](RunConfig& c) { c.family.j = ov.j; }, "Casimir parameter j");
  bind_option(app, ov, "--Ze2", ov.Ze2, [&ov](RunConfig& c) { c.family.Ze2 = ov.Ze2; }, "Coulomb strength");
  add_mass(app, ov);
  add_ordering(app, ov);
}

void add_solver(CLI::App* app, Overrides& ov) {
  bind_option(app, ov, "--n", ov.n, [&ov](RunConfig& c) { c.solver.n = ov.n; }, "base grid points");
  bind_option(app, ov, "--k", ov.k, [&ov](RunConfig& c) { c.solver.k = ov.k; }, "levels to solve for");
  bind_option(app, ov, "--target-tol", ov.target_tol,
              [&ov](RunConfig& c) { c.solver.target_tol = ov.target_tol; }, "refinement stop criterion");
  bind_option(app, ov, "--max-doublings", ov.max_doublings,
              [&ov](RunConfig& c) { c.solver.max_doublings = ov.max_doublings; }, "grid doubling budget");
  bind_option(app, ov, "--tolerance", ov.tolerance,
              [&ov](RunConfig& c) { c.solver.tolerance = ov.tolerance; }, "relative pass tolerance");
  CLI::Option* ud = app->add_option("--u-domain", ov.u_domain, "u-interval to solve on")->expected(2);
  ov.apply.push_back([ud, &ov](RunConfig& c) {
    if (ud->count() > 0) c.solver.u_domain = UDomain{ov.u_domain[0], ov.u_domain[1]};
  });
  bind_switch(app, ov, "--serial", ov.serial, [&ov](RunConfig& c) { c.solver.serial = ov.serial; },
              "use the single-threaded kernels");
}

RunConfig effective_config(const Overrides& ov) {
  RunConfig c = ov.config_path.empty() ? RunConfig{} : load_config(ov.config_path);
  for (const auto& f : ov.apply) f(c);
  // Re-validate the merged result through the same parser.
  return parse_config(to_json(c));
}

void emit(const RunConfig& c, const Overrides& ov, const std::string& command, const json& result,
          const report::Table& table) {
  if (!ov.echo_config.empty()) {
    std::ofstream out(ov.echo_config);
    if (!out) throw ConfigError("cannot write '" + ov.echo_config + "'");
    out << to_json(c).dump(2) << '\n';
  }
  std::string text = c.output.format == "json"
                         ? report::envelope(command, to_json(c), result).dump(2) + "\n"
                         : table.csv();
  if (c.output.path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output.path);
  if (!out) throw ConfigError("cannot write '" + c.output.path + "'");
  out << text;
}

int cmd_potential(const Overrides& ov) {
  const RunConfig c = effective_config(ov);
  const PotentialModel model = make_model(c);
  double lo = 0.0, hi = 0.0;
  if (c.potential.x_range) {
    std::tie(lo, hi) = *c.potential.x_range;
  } else {
    const XDomain xd = x_domain_for(model, c.solver.u_domain);
    lo = xd.lo;
    hi = xd.hi;
  }
  const auto rows = report::potential_rows(model, lo, hi, c.potential.points);
  const int p = c.output.precision;
  emit(c, ov, "potential", report::potential_json(rows, model.is_complex(), p),
       report::potential_table(rows, model.is_complex(), p));
  return kPass;
}

int cmd_spectrum(const Overrides& ov) {
  const RunConfig c = effective_config(ov);
  const PotentialModel model = make_model(c);
  const SolverConfig sc = make_solver_config(c);
  const SpectrumResult r = refine_until(model, default_grid(model, sc), sc.k, sc.target_tol,
                                        sc.max_doublings, false, sc.exec);
  const int p = c.output.precision;
  emit(c, ov, "spectrum", report::spectrum_json(r, p), report::spectrum_table(r, p));
  for (const std::string& w : r.warnings) std::cerr << "warning: " << w << '\n';
  return kPass;
}

int cmd_validate(const Overrides& ov) {
  const RunConfig c = effective_config(ov);
  const PotentialModel model = make_model(c);
  const ValidationReport r = validate_family(model, make_solver_config(c));
  const int p = c.output.precision;
  emit(c, ov, "validate", report::validation_json(r, p), report::validation_table(r, p));
  for (const std::string& w : r.warnings) std::cerr << "warning: " << w << '\n';
  std::cerr << (r.pass ? "PASS" : "FAIL") << ' ' << r.family << " (" << r.ordering << ", "
            << model.mass().id() << ")\n";
  return r.pass ? kPass : kFail;
}

int cmd_sweep(const Overrides& ov) {
  RunConfig c = effective_config(ov);
  if (!ov.sweep.empty()) {
    c.sweep.clear();
    for (const std::string& name : ov.sweep) {
      OrderingSpec o;
      o.preset = name;
      (void)o.params();
      c.sweep.push_back(o);
    }
  }
  const std::vector<OrderingSpec> specs = effective_sweep(c);
  if (specs.size() < 2) throw ConfigError("sweep-ordering needs at least 2 orderings");
  std::vector<OrderingParams> orderings;
  for (const OrderingSpec& o : specs) orderings.push_back(o.params());
  const PotentialModel model = make_model(c, specs.front());
  if (model.mass().is_constant()) {
    std::cerr << "warning: constant mass makes the ordering sweep trivially exact\n";
  }
  const SolverConfig sc = make_solver_config(c);
  const SweepResult r = ordering_sweep(model, orderings, sc);
  const double tol = sc.tolerance.value_or(default_tolerance(model));
  const int p = c.output.precision;
  emit(c, ov, "sweep-ordering", report::sweep_json(r, tol, p), report::sweep_table(r, p));
  for (const std::string& w : r.warnings) std::cerr << "warning: " << w << '\n';
  const bool pass = r.max_deviation <= tol;
  std::cerr << (pass ? "PASS" : "FAIL") << " max deviation " << fmt_num(r.max_deviation, p)
            << " (tolerance " << fmt_num(tol, p) << ")\n";
  return pass ? kPass : kFail;
}

int cmd_check_algebra(const Overrides& ov) {
  const RunConfig c = effective_config(ov);
  const AlgebraConfig& ac = c.algebra;
  const MassProfile mass = make_mass(c.mass, c.mass.domain.value_or(MassDomain{}));
  AlgebraOptions opt;
  opt.convention = rung_convention_from_string(ac.convention);
  opt.perturb_g = c.debug.perturb_g;
  const double center = 0.5 * (ac.x_range.first + ac.x_range.second);
  const double width = 0.2 * (ac.x_range.second - ac.x_range.first);
  auto test_fn = [center, width](double x) {
    const double t = (x - center) / width;
    return std::exp(-t * t);
  };
  const ConvergenceStudy s = algebra_convergence(make_algebra_spec(ac), make_map(ac), mass, test_fn,
                                                 ac.x_range.first, ac.x_range.second, ac.grids, opt);
  const int p = c.output.precision;
  emit(c, ov, "check-algebra", report::algebra_json(s, ac.min_order, p), report::algebra_table(s, p));
  const bool pass = s.commutator_order >= ac.min_order;
  std::cerr << (pass ? "PASS" : "FAIL") << " observed order " << fmt_num(s.commutator_order, 4)
            << " (minimum " << fmt_num(ac.min_order, 4) << ")\n";
  return pass ? kPass : kFail;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ComplexModel& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const WrongClass& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bound-state spectra of position-dependent mass Schroedinger models", "pdm-spectra"};
  app.require_subcommand(1);
  Overrides ov;

  CLI::App* families = app.add_subcommand("families", "list the potential families");
  bool families_json = false;
  families->add_flag("--json", families_json, "machine-readable listing");

  CLI::App* potential = app.add_subcommand("potential", "tabulate x, u, m, V, V_m, U_m");
  add_common(potential, ov);
  add_family(potential, ov);
  CLI::Option* xr = potential->add_option("--x-range", ov.x_range, "x-interval")->expected(2);
  ov.apply.push_back([xr, &ov](RunConfig& c) {
    if (xr->count() > 0) c.potential.x_range = std::make_pair(ov.x_range[0], ov.x_range[1]);
  });
  bind_option(potential, ov, "--points", ov.points, [&ov](RunConfig& c) { c.potential.points = ov.points; },
              "number of rows");
  CLI::Option* pot_u = potential->add_option("--u-domain", ov.u_domain, "u-interval")->expected(2);
  ov.apply.push_back([pot_u, &ov](RunConfig& c) {
    if (pot_u->count() > 0) c.solver.u_domain = UDomain{ov.u_domain[0], ov.u_domain[1]};
  });

  CLI::App* spectrum = app.add_subcommand("spectrum", "lowest eigenvalues with grid refinement");
  add_common(spectrum, ov);
  add_family(spectrum, ov);
  add_solver(spectrum, ov);

  CLI::App* validate = app.add_subcommand("validate", "compare numeric and analytic spectra");
  add_common(validate, ov);
  add_family(validate, ov);
  add_solver(validate, ov);

  CLI::App* sweep = app.add_subcommand("sweep-ordering", "spectra across kinetic orderings");
  add_common(sweep, ov);
  add_family(sweep, ov);
  add_solver(sweep, ov);
  sweep->add_option("--orderings", ov.sweep, "ordering presets to compare")->delimiter(',');
  bind_switch(sweep, ov, "--suppress-vm", ov.suppress_vm,
              [&ov](RunConfig& c) { c.debug.suppress_vm = ov.suppress_vm; },
              "debug: drop V_m from the potential");

  CLI::App* algebra = app.add_subcommand("check-algebra", "grid convergence of the su(1,1) relations");
  add_common(algebra, ov);
  add_mass(algebra, ov);
  bind_option(algebra, ov, "--map", ov.map, [&ov](RunConfig& c) { c.algebra.map = ov.map; }, "map template");
  bind_option(algebra, ov, "--scale", ov.map_scale, [&ov](RunConfig& c) { c.algebra.scale = ov.map_scale; },
              "map scale k");
  bind_option(algebra, ov, "--phase", ov.map_phase, [&ov](RunConfig& c) { c.algebra.phase = ov.map_phase; },
              "map phase");
  bind_option(algebra, ov, "--a", ov.alg_a, [&ov](RunConfig& c) { c.algebra.a = ov.alg_a; }, "deformation a");
  bind_option(algebra, ov, "--b", ov.alg_b, [&ov](RunConfig& c) { c.algebra.b = ov.alg_b; }, "ladder constant b");
  bind_option(algebra, ov, "--N", ov.alg_N, [&ov](RunConfig& c) { c.algebra.N = ov.alg_N; }, "J0 label N");
  bind_option(algebra, ov, "--j", ov.alg_j, [&ov](RunConfig& c) { c.algebra.j = ov.alg_j; }, "Casimir parameter j");
  bind_option(algebra, ov, "--convention", ov.convention,
              [&ov](RunConfig& c) { c.algebra.convention = ov.convention; }, "as-printed | derived");
  CLI::Option* axr = algebra->add_option("--x-range", ov.x_range, "x-interval")->expected(2);
  ov.apply.push_back([axr, &ov](RunConfig& c) {
    if (axr->count() > 0) c.algebra.x_range = std::make_pair(ov.x_range[0], ov.x_range[1]);
  });
  bind_option(algebra, ov, "--grids", ov.grids, [&ov](RunConfig& c) { c.algebra.grids = ov.grids; },
              "grid sizes (at least 3)");
  bind_option(algebra, ov, "--min-order", ov.min_order,
              [&ov](RunConfig& c) { c.algebra.min_order = ov.min_order; }, "pass threshold for the order");
  bind_option(algebra, ov, "--perturb-g", ov.perturb_g,
              [&ov](RunConfig& c) { c.debug.perturb_g = ov.perturb_g; }, "debug: shift g in J+");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  if (families->parsed()) {
    std::cout << (families_json ? report::families_json().dump(2) + "\n" : report::families_text());
    return kPass;
  }
  if (potential->parsed()) return run_guarded([&] { return cmd_potential(ov); });
  if (spectrum->parsed()) return run_guarded([&] { return cmd_spectrum(ov); });
  if (validate->parsed()) return run_guarded([&] { return cmd_validate(ov); });
  if (sweep->parsed()) return run_guarded([&] { return cmd_sweep(ov); });
  if (algebra->parsed()) return run_guarded([&] { return cmd_check_algebra(ov); });
  return kUsage;
}
