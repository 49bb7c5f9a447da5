#include "isolab/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "isolab/layer_geometry.hpp"
#include "isolab/sphere_quadrature.hpp"

namespace isolab {

using nlohmann::json;

namespace {

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.dim; ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& j, int dim, const std::string& field) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ConfigError(field + ": expected an array of " + std::to_string(dim) + " numbers");
  Vec v(dim);
  for (int i = 0; i < dim; ++i) {
    if (!j[i].is_number()) throw ConfigError(field + ": expected numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

double number(const json& p, const std::string& key, double def) {
  if (!p.contains(key)) return def;
  if (!p[key].is_number()) throw ConfigError(key + ": must be a number");
  return p[key].get<double>();
}

long long integer(const json& p, const std::string& key, long long def) {
  if (!p.contains(key)) return def;
  if (!p[key].is_number_integer()) throw ConfigError(key + ": must be an integer");
  return p[key].get<long long>();
}

double required_number(const json& p, const std::string& key) {
  if (!p.contains(key)) throw ConfigError(key + ": required");
  return number(p, key, 0);
}

Density density_of(const json& p) {
  if (p.contains("density")) return density_from_json(p["density"]);
  if (p.contains("family")) return density_from_json(p);
  throw ConfigError("density: required");
}

struct Common {
  double eps, R_min, R_max;
  MeasureBudget budget;
};

Common common(const ExperimentConfig& cfg, double eps_default) {
  const json& p = cfg.params;
  Common c;
  c.eps = cfg.eps.value_or(number(p, "eps", eps_default));
  c.R_min = cfg.R_min.value_or(number(p, "rmin", Defaults::R_min));
  c.R_max = cfg.R_max.value_or(number(p, "rmax", Defaults::R_max));
  c.budget.samples = cfg.samples.value_or(integer(p, "samples", Defaults::samples));
  c.budget.seed = cfg.seed.value_or(static_cast<unsigned long long>(integer(p, "seed", Defaults::seed)));
  c.budget.quadrature_tol = number(p, "quadrature_tol", Defaults::quadrature_tol);
  if (!(c.eps > 0 && c.eps < 1)) throw ConfigError("eps: must lie in (0, 1)");
  if (!(c.R_min > 1)) throw ConfigError("rmin: must exceed 1");
  if (!(c.R_max >= c.R_min)) throw ConfigError("rmax: must be >= rmin");
  if (c.budget.samples < 10'000) throw ConfigError("samples: must be at least 10000");
  if (!(c.budget.quadrature_tol > 0)) throw ConfigError("quadrature_tol: must be positive");
  return c;
}

json header(const std::string& sub, const Common* c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["subcommand"] = sub;
  if (c) {
    j["seed"] = c->budget.seed;
    j["samples"] = c->budget.samples;
  }
  return j;
}

ExperimentResult check_density(const ExperimentConfig& cfg) {
  const Common c = common(cfg, Defaults::eps);
  const Density d = density_of(cfg.params);
  SampleSpec spec;
  spec.seed = c.budget.seed;
  if (cfg.params.contains("radii")) {
    for (const json& r : cfg.params["radii"]) {
      if (!r.is_number()) throw ConfigError("radii: expected numbers");
      spec.radii.push_back(r.get<double>());
    }
  }
  const ConvergenceReport rep = validate_convergence(d, spec);
  const bool mono = is_ray_monotone(d, spec);
  ExperimentResult out;
  out.document = header(cfg.subcommand, &c);
  json& j = out.document;
  j["density"] = d.config;
  j["radial"] = d.radial;
  j["pass"] = rep.pass;
  j["violation_count"] = rep.violations.size();
  json v = json::array();
  for (std::size_t i = 0; i < rep.violations.size() && i < 20; ++i)
    v.push_back({{"radius", rep.violations[i].radius},
                 {"direction", vec_json(rep.violations[i].direction)},
                 {"weight", rep.violations[i].weight}});
  j["violations"] = v;
  j["decay_radius"] = rep.decay_radius;
  j["decay"] = rep.decay;
  j["far_decay"] = rep.far_decay;
  j["decay_bound"] = spec.decay_bound;
  j["ray_monotone"] = mono;
  Table t{"profile", {"r", "radial_average", "deficit_profile"}, {}};
  const RadialDeficit g = deficit_profile(d);
  const double top = 10.0 * std::max(1.0, d.envelope_radius);
  for (int i = 0; i <= 100; ++i) {
    const double r = top * i / 100.0;
    t.rows.push_back({r, radial_average(d, r), g(r)});
  }
  out.tables.push_back(std::move(t));
  out.status = rep.pass ? 0 : 1;
  return out;
}

ExperimentResult kernels(const ExperimentConfig& cfg) {
  const json& p = cfg.params;
  const long long dim = integer(p, "dim", -1);
  if (dim < 0) throw ConfigError("dim: required");
  if (dim < 2 || dim > kMaxDim) throw ConfigError("dim: must be in [2, " + std::to_string(kMaxDim) + "]");
  const double R = required_number(p, "R");
  if (!(R > 1)) throw ConfigError("R: must exceed 1");
  const long long points = integer(p, "points", Defaults::kernel_grid);
  if (points < 2) throw ConfigError("points: must be at least 2");
  const int n = static_cast<int>(dim);
  const LayerKernelPair ex = exact_kernels(n, R), as = asymptotic_kernels(n);
  ExperimentResult out;
  out.document = header(cfg.subcommand, nullptr);
  json& j = out.document;
  j["dim"] = n;
  j["R"] = R;
  const KernelDeviation dev = kernel_deviation(n, R, t_grid(static_cast<int>(points)));
  j["deviation"] = {{"phi", dev.phi}, {"psi", dev.psi}, {"phi_at", dev.phi_at}, {"psi_at", dev.psi_at}};
  j["integrals"] = {{"phi_exact", integrate_phi(ex)},     {"psi_exact", integrate_psi(ex)},
                    {"phi_asym", integrate_phi(as)},      {"psi_asym", integrate_psi(as)},
                    {"sphere_area", unit_sphere_area(n)}, {"ball_volume", unit_ball_volume(n)}};
  Table t{"kernels", {"t", "phi_exact", "psi_exact", "phi_asym", "psi_asym"}, {}};
  for (double x : t_grid(static_cast<int>(points), kReportEndpointClip))
    t.rows.push_back({x, ex.phi(x), ex.psi(x), as.phi(x), as.psi(x)});
  out.tables.push_back(std::move(t));
  out.status = 0;
  return out;
}

ExperimentResult measure(const ExperimentConfig& cfg) {
  const Common c = common(cfg, Defaults::eps);
  const Density d = density_of(cfg.params);
  if (!cfg.params.contains("set")) throw ConfigError("set: required");
  const CompetitorSet e = set_from_json(cfg.params["set"], d.dim);
  const std::string method = cfg.params.value("method", std::string("both"));
  if (method != "quadrature" && method != "monte_carlo" && method != "both")
    throw ConfigError("method: must be quadrature, monte_carlo or both");
  ExperimentResult out;
  out.document = header(cfg.subcommand, &c);
  json& j = out.document;
  j["density"] = d.config;
  j["set"] = to_json(e);
  Table t{"pieces", {"piece", "boundary", "euclid", "deficit"}, {}};
  for (const char* m : {"quadrature", "monte_carlo"}) {
    if (method != "both" && method != m) continue;
    const Method mm = std::string(m) == "quadrature" ? Method::quadrature : Method::monte_carlo;
    const SetMeasures s = set_measures(e, d, mm, c.budget);
    j[m] = to_json(s);
    j[m]["mean_density"] = mean_density(s.perimeter.value, s.volume.value, d.dim);
    for (const Piece& pc : s.pieces) t.rows.push_back({pc.name, pc.boundary ? 1 : 0, pc.euclid, pc.deficit});
  }
  out.tables.push_back(std::move(t));
  out.status = 0;
  return out;
}

SlidingKernel kernel_of(const json& p, int dim) {
  if (!p.contains("kernel")) return beta_kernel(dim);
  const json& k = p["kernel"];
  if (!k.is_object()) throw ConfigError("kernel: expected an object");
  const std::string kind = k.value("kind", std::string("beta"));
  if (kind != "alpha" && kind != "beta") throw ConfigError("kernel.kind: must be alpha or beta");
  if (!k.contains("polynomial")) {
    if (kind == "alpha") throw ConfigError("kernel.polynomial: required for alpha kernels");
    return beta_kernel(static_cast<int>(integer(k, "dim", dim)));
  }
  std::vector<double> coef;
  for (const json& x : k["polynomial"]) {
    if (!x.is_number()) throw ConfigError("kernel.polynomial: expected numbers");
    coef.push_back(x.get<double>());
  }
  auto poly = [coef](double t) {
    double s = 0;
    for (auto it = coef.rbegin(); it != coef.rend(); ++it) s = s * t + *it;
    return s;
  };
  return make_kernel(kind == "alpha" ? SlidingKind::alpha : SlidingKind::beta, poly);
}

Table scan_table(const SignSearchOutcome& s) {
  Table t{"scan", {"R", "correlation"}, {}};
  for (const auto& [R, v] : s.scan) t.rows.push_back({R, v});
  return t;
}

ExperimentResult kernel_search(const ExperimentConfig& cfg) {
  const Common c = common(cfg, Defaults::eps);
  const Density d = density_of(cfg.params);
  const SlidingKernel k = kernel_of(cfg.params, d.dim);
  const double step = number(cfg.params, "step", Defaults::radius_step);
  if (!(step > 0)) throw ConfigError("step: must be positive");
  const long long grid = integer(cfg.params, "admissibility_grid", Defaults::admissibility_grid);
  if (grid < 2) throw ConfigError("admissibility_grid: must be at least 2");
  const AdmissibilityReport adm = check_admissibility(k, t_grid(static_cast<int>(grid)));
  const SignSearchOutcome s = sliding_sign_search(k, deficit_profile(d), c.R_min, c.R_max, step);
  ExperimentResult out;
  out.document = header(cfg.subcommand, &c);
  json& j = out.document;
  j["density"] = d.config;
  j["kernel"] = {{"kind", k.kind == SlidingKind::beta ? "beta" : "alpha"}};
  if (k.dim) j["kernel"]["dim"] = *k.dim;
  j["admissibility"] = {{"integral", adm.integral},
                        {"integral_zero", adm.integral_zero},
                        {"min_partial", adm.min_partial},
                        {"min_partial_at", adm.min_partial_at},
                        {"partial_positive", adm.partial_positive},
                        {"pass", adm.pass}};
  if (adm.alpha_at_one) j["admissibility"]["alpha_at_one"] = *adm.alpha_at_one;
  j["search"] = to_json(s);
  out.tables.push_back(scan_table(s));
  out.status = s.degenerate ? 2 : s.found ? 0 : 1;
  return out;
}

ExperimentResult far_ball(const ExperimentConfig& cfg) {
  const Common c = common(cfg, Defaults::eps);
  const Density d0 = density_of(cfg.params);
  const Density d = rescale(d0, d0.limit_a * unit_ball_volume(d0.dim)).density;
  const double step = number(cfg.params, "step", Defaults::radius_step);
  const long long nodes = integer(cfg.params, "direction_nodes", 0);
  FarBallCertificate cert = find_far_radius(deficit_profile(d), d.dim, c.eps, c.R_min, c.R_max, step);
  if (cert.found && !cert.degenerate) {
    FarBallCertificate dir = select_direction(d, cert.R, c.eps, static_cast<int>(nodes), c.budget);
    dir.search = cert.search;
    dir.rescans = cert.rescans;
    dir.found = dir.found && cert.found;
    cert = std::move(dir);
  } else if (cert.degenerate) {
    cert.theta = Vec::unit(d.dim, 0);
  }
  ExperimentResult out;
  out.document = header(cfg.subcommand, &c);
  out.document["density"] = d0.config;
  out.document["certificate"] = to_json(cert);
  out.tables.push_back(scan_table(cert.search));
  Table t{"directions", {}, {}};
  for (int i = 0; i < d.dim; ++i) t.columns.push_back("theta_" + std::to_string(i + 1));
  for (const char* col : {"weight", "perimeter_g", "volume_g", "margin"}) t.columns.push_back(col);
  for (const DirectionSample& s : cert.directions) {
    std::vector<json> row;
    for (int i = 0; i < d.dim; ++i) row.push_back(s.theta[i]);
    row.insert(row.end(), {s.weight, s.perimeter, s.volume, s.margin});
    t.rows.push_back(std::move(row));
  }
  out.tables.push_back(std::move(t));
  out.status = cert.degenerate ? 2 : cert.found ? 0 : 1;
  return out;
}

ExperimentResult competitor(const ExperimentConfig& cfg) {
  const Common c = common(cfg, Defaults::eps);
  const Density d = density_of(cfg.params);
  CompetitorOptions o;
  o.eps = c.eps;
  o.R_min = c.R_min;
  o.R_max = c.R_max;
  o.budget = c.budget;
  o.tau_points = static_cast<int>(integer(cfg.params, "tau_points", Defaults::tau_points));
  o.monte_carlo_check = cfg.params.value("monte_carlo_check", true);
  if (cfg.params.contains("target_volume")) o.target_volume = number(cfg.params, "target_volume", 0);
  if (o.tau_points < 4) throw ConfigError("tau_points: must be at least 4");
  const CompetitorRun run = run_competitor(d, o);
  ExperimentResult out;
  out.document = header(cfg.subcommand, &c);
  out.document["density"] = d.config;
  out.document["eps"] = c.eps;
  out.document["rmin"] = c.R_min;
  out.document["rmax"] = c.R_max;
  out.document["run"] = to_json(run);
  out.tables.push_back(scan_table(run.far_ball.search));
  if (run.tau) {
    Table t{"tau", {"psi", "delta_bar", "tau", "ball_volume_g", "bound_ok"}, {}};
    for (std::size_t i = 0; i < run.tau->psi.size(); ++i)
      t.rows.push_back({run.tau->psi[i], run.tau->delta_bar[i], run.tau->tau[i], run.tau->ball_volume[i],
                        run.tau->bound_ok[i] ? 1 : 0});
    out.tables.push_back(std::move(t));
  }
  if (run.direction) {
    Table t{"hemispheres", {"psi", "lhs", "rhs"}, {}};
    for (std::size_t i = 0; i < run.direction->lhs.size(); ++i)
      t.rows.push_back({run.tau->psi[i], run.direction->lhs[i], run.direction->rhs[i]});
    out.tables.push_back(std::move(t));
  }
  out.status = run.outcome == "certified" ? 0 : run.outcome == "degenerate" ? 2 : 1;
  return out;
}

ExperimentResult morgan(const ExperimentConfig& cfg) {
  const json& p = cfg.params.contains("morgan") ? cfg.params["morgan"] : cfg.params;
  const double C2 = number(p, "C2", 1.0);
  const long long dim = integer(p, "dim", 2);
  const double m0 = number(p, "m0", 1.0);
  const double step = number(p, "step", Defaults::ode_step);
  if (!(C2 > 0)) throw ConfigError("C2: must be positive");
  if (dim < 2) throw ConfigError("dim: must be >= 2");
  if (!(m0 > 0)) throw ConfigError("m0: must be positive");
  if (!(step > 0)) throw ConfigError("step: must be positive");
  const OdeCertificate cert = simulate_comparison_ode(C2, static_cast<int>(dim), m0, step);
  ExperimentResult out;
  out.document = header(cfg.subcommand, nullptr);
  json& j = out.document;
  j["C2"] = C2;
  j["dim"] = dim;
  j["m0"] = m0;
  j["step"] = step;
  j["extinction"] = cert.extinction;
  j["predicted"] = cert.predicted;
  j["difference"] = cert.extinction - cert.predicted;
  j["steps"] = cert.steps;
  const bool pass = std::abs(cert.extinction - cert.predicted) <= 1e-6;
  j["pass"] = pass;
  Table t{"curve", {"t", "m"}, {}};
  for (std::size_t i = 0; i < cert.curve.times.size(); ++i)
    t.rows.push_back({cert.curve.times[i], cert.curve.masses[i]});
  out.tables.push_back(std::move(t));
  out.status = pass ? 0 : 1;
  return out;
}

}  // namespace

CompetitorSet set_from_json(const json& j, int dim) {
  if (!j.is_object()) throw ConfigError("set: expected an object");
  const std::string variant = j.value("variant", std::string("plain_ball"));
  const Vec dir =
      j.contains("direction") ? vec_from_json(j["direction"], dim, "set.direction") : Vec::unit(dim, 0);
  if (!j.contains("offset")) throw ConfigError("set.offset: required");
  const double R = number(j, "offset", 0);
  if (!(R > 1)) throw ConfigError("set.offset: must exceed 1");
  const double delta = number(j, "delta", 0);
  try {
    if (variant == "plain_ball") return make_plain_ball(dir, R);
    if (variant == "cylinder_extended") return make_cylinder_extended(dir, R, delta);
    if (variant == "rotation_swept") {
      const Vec th = normalized(dir);
      const Vec plane = j.contains("plane_dir") ? vec_from_json(j["plane_dir"], dim, "set.plane_dir")
                                                : complete_frame(dim, {th}).front();
      return make_rotation_swept(th, R, delta, plane);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("set: ") + e.what());
  }
  throw ConfigError("set.variant: must be plain_ball, cylinder_extended or rotation_swept");
}

json to_json(const MeasureResult& m) {
  json j{{"value", m.value},
         {"method", to_string(m.method)},
         {"error_estimate", m.error_estimate},
         {"samples_or_nodes", m.samples_or_nodes}};
  j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
  return j;
}

json to_json(const SetMeasures& m) {
  json j{{"perimeter", to_json(m.perimeter)},
         {"volume", to_json(m.volume)},
         {"perimeter_deficit", to_json(m.perimeter_deficit)},
         {"volume_deficit", to_json(m.volume_deficit)},
         {"perimeter_euclid", m.perimeter_euclid},
         {"volume_euclid", m.volume_euclid},
         {"perimeter_excess", m.perimeter_excess},
         {"volume_excess", m.volume_excess}};
  json pieces = json::array();
  for (const Piece& p : m.pieces)
    pieces.push_back(
        {{"name", p.name}, {"boundary", p.boundary}, {"euclid", p.euclid}, {"deficit", p.deficit}});
  j["pieces"] = pieces;
  return j;
}

json to_json(const CompetitorSet& e) {
  json j{{"variant", variant_name(e)}, {"dim", e.dim}, {"scale", e.scale}};
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PlainBall>) {
          j["direction"] = vec_json(s.direction);
          j["offset"] = s.offset;
        } else {
          j["direction"] = vec_json(s.base.direction);
          j["offset"] = s.base.offset;
          j["delta"] = s.delta;
          if constexpr (std::is_same_v<T, RotationSwept>) j["plane_dir"] = vec_json(s.plane_dir);
        }
      },
      e.shape);
  return j;
}

json to_json(const Check& c) { return {{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}}; }

namespace {

json checks_json(const std::vector<Check>& cs) {
  json a = json::array();
  for (const Check& c : cs) a.push_back(to_json(c));
  return a;
}

json match_json(const VolumeMatch& m) {
  return {{"delta_bar", m.delta_bar},
          {"achieved_volume", m.achieved_volume},
          {"volume_error", m.volume_error},
          {"iterations", m.iterations},
          {"converged", m.converged},
          {"bound_ok", m.bound_ok},
          {"bound", m.bound},
          {"ball_deficit", m.ball_deficit},
          {"status", m.status}};
}

}  // namespace

json to_json(const Competitor& c) {
  return {{"set", to_json(c.set)},           {"match", match_json(c.match)},
          {"measures", to_json(c.measures)}, {"perimeter_gap", c.perimeter_gap},
          {"volume_error", c.volume_error},  {"rho_minus_one", c.rho_minus_one},
          {"checks", checks_json(c.checks)}, {"ok", c.ok}};
}

json to_json(const SignSearchOutcome& s) {
  json j{{"found", s.found},           {"R", s.R},           {"correlation", s.correlation},
         {"degenerate", s.degenerate}, {"strict", s.strict}, {"scan_points", s.scan.size()}};
  j["crossing"] = s.crossing ? json(*s.crossing) : json(nullptr);
  return j;
}

json to_json(const FarBallCertificate& c) {
  json j{{"found", c.found},
         {"R", c.R},
         {"epsilon", c.epsilon},
         {"P_g", to_json(c.P_g)},
         {"V_g", to_json(c.V_g)},
         {"margin", c.margin},
         {"degenerate", c.degenerate},
         {"search", to_json(c.search)},
         {"rescans", c.rescans},
         {"direction_count", c.directions.size()},
         {"mean_perimeter", c.mean_perimeter},
         {"mean_volume", c.mean_volume}};
  j["theta"] = c.theta ? vec_json(*c.theta) : json(nullptr);
  return j;
}

json to_json(const CompetitorRun& r) {
  json j{{"outcome", r.outcome}, {"path", r.path}, {"lambda", r.lambda}, {"far_ball", to_json(r.far_ball)}};
  j["result"] = to_json(r.result);
  if (r.step1) j["step1"] = to_json(*r.step1);
  if (r.circle)
    j["circle"] = {{"c0", vec_json(r.circle->c0)},
                   {"c1", vec_json(r.circle->c1)},
                   {"averaged_margin", r.circle->averaged_margin},
                   {"level_margins", r.circle->level_margins}};
  if (r.tau)
    j["tau"] = {{"points", r.tau->psi.size()},         {"lipschitz_lo", r.tau->lipschitz_lo},
                {"lipschitz_hi", r.tau->lipschitz_hi}, {"increasing", r.tau->increasing},
                {"in_band", r.tau->in_band},           {"refinements", r.tau->refinements}};
  if (r.direction)
    j["direction"] = {
        {"found", r.direction->found}, {"index", r.direction->index}, {"psi", r.direction->psi}};
  if (r.mc) j["monte_carlo"] = to_json(*r.mc);
  j["monte_carlo_checks"] = checks_json(r.mc_checks);
  j["notes"] = r.notes;
  return j;
}

ExperimentResult run(const ExperimentConfig& cfg) {
  try {
    if (cfg.subcommand == "check-density") return check_density(cfg);
    if (cfg.subcommand == "kernels") return kernels(cfg);
    if (cfg.subcommand == "measure") return measure(cfg);
    if (cfg.subcommand == "kernel-search") return kernel_search(cfg);
    if (cfg.subcommand == "far-ball") return far_ball(cfg);
    if (cfg.subcommand == "competitor") return competitor(cfg);
    if (cfg.subcommand == "morgan") return morgan(cfg);
    throw ConfigError("subcommand: unknown '" + cfg.subcommand + "'");
  } catch (const ConfigError& e) {
    ExperimentResult r;
    r.status = 1;
    r.document = header(cfg.subcommand, nullptr);
    r.document["error"] = e.what();
    return r;
  } catch (const json::exception& e) {
    ExperimentResult r;
    r.status = 1;
    r.document = header(cfg.subcommand, nullptr);
    r.document["error"] = std::string("config: ") + e.what();
    return r;
  } catch (const std::exception& e) {
    ExperimentResult r;
    r.status = 1;
    r.document = header(cfg.subcommand, nullptr);
    r.document["error"] = e.what();
    return r;
  }
}

std::string to_json_text(const json& j) { return j.dump(2) + "\n"; }

std::string to_csv_text(const Table& t) {
  std::ostringstream os;
  os << "# schema_version: " << kSchemaVersion << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      os << (row[i].is_string() ? row[i].get<std::string>() : row[i].dump());
    }
    os << "\n";
  }
  return os.str();
}

void write_outputs(const ExperimentResult& r, const std::string& subcommand, const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto put = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
  };
  put(std::filesystem::path(dir) / (subcommand + ".json"), to_json_text(r.document));
  for (const Table& t : r.tables) put(std::filesystem::path(dir) / (t.name + ".csv"), to_csv_text(t));
}

}  // namespace isolab
