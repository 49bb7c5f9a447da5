// One line per acceptance criterion: "criterion N: PASS|FAIL <details>".
// With an argument only that criterion runs; the exit status is nonzero if
// any selected criterion fails.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "isolab/competitor.hpp"
#include "isolab/experiment.hpp"
#include "isolab/kernel_lemmas.hpp"
#include "isolab/layer_geometry.hpp"
#include "isolab/mass_escape.hpp"
#include "isolab/measures.hpp"
#include "oracles.hpp"

using namespace isolab;
using oracle::e;
using oracle::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Report {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      if (failures_++ < 4) fail_ << (fail_.tellp() > 0 ? "; " : "") << what;
    }
  }
  void note(const std::string& s) { notes_ << (notes_.tellp() > 0 ? "; " : "") << s; }
  Outcome done() const {
    std::string d = notes_.str();
    if (!pass_)
      d = "failed: " + fail_.str() + (failures_ > 4 ? " (+" + std::to_string(failures_ - 4) + " more)" : "") +
          (d.empty() ? "" : "; " + d);
    return {pass_, d};
  }

 private:
  bool pass_ = true;
  int failures_ = 0;
  std::ostringstream fail_, notes_;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double gk(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

Outcome c1() {
  Report r;
  double worst = 0;
  for (int n = 2; n <= 6; ++n) {
    const LayerKernelPair a = asymptotic_kernels(n);
    const double wn = oracle::ball_volume(n);
    const double dp = std::abs(integrate_phi(a) - n * wn), dv = std::abs(integrate_psi(a) - wn);
    r.require(dp <= 1e-10, "phi N=" + std::to_string(n));
    r.require(dv <= 1e-10, "psi N=" + std::to_string(n));
    worst = std::max({worst, dp, dv});
  }
  r.note("max error " + fmt("%.2e", worst));
  return r.done();
}

Outcome c2() {
  Report r;
  const LayerKernelPair a = asymptotic_kernels(3);
  double worst = 0;
  for (double R : {5.0, 10.0, 100.0}) {
    const LayerKernelPair k = exact_kernels(3, R);
    for (int i = 0; i < 1000; ++i) {
      const double t = -1 + 2 * (i + 0.5) / 1000;
      const double f = (R + t) / R;
      worst = std::max({worst, std::abs(k.phi(t) - f * a.phi(t)), std::abs(k.psi(t) - f * a.psi(t))});
    }
  }
  r.require(worst <= 1e-12, "deviation " + fmt("%.2e", worst));
  r.note("max deviation " + fmt("%.2e", worst));
  return r.done();
}

Outcome c3() {
  Report r;
  const std::vector<double> grid = t_grid(1001);
  for (int n : {2, 3, 4}) {
    double prev = std::numeric_limits<double>::infinity();
    std::string row = "N=" + std::to_string(n) + ":";
    for (double R : {10.0, 100.0, 1000.0}) {
      const KernelDeviation d = kernel_deviation(n, R, grid);
      const double m = std::max(d.phi, d.psi);
      r.require(m < prev, "not decreasing at N=" + std::to_string(n) + " R=" + fmt("%g", R));
      r.require(m <= 2 / R, "above 2/R at N=" + std::to_string(n) + " R=" + fmt("%g", R));
      prev = m;
      row += " " + fmt("%.3e", m);
    }
    r.note(row);
  }
  return r.done();
}

Outcome c4() {
  Report r;
  const SlidingKernel b2 = beta_kernel(2), b3 = beta_kernel(3);
  double worst = 0;
  for (int i = 0; i <= 200; ++i) {
    const double t = -1 + 2.0 * i / 200;
    const double s = std::asin(std::clamp(t, -1.0, 1.0));
    // beta(sin u) cos u: 2 (2 sin^2 u - 1) for N = 2, pi (3 sin^2 u - 1) cos u for N = 3
    const double q2 = gk([](double u) { return 2 * (2 * std::sin(u) * std::sin(u) - 1); }, -pi / 2, s);
    const double q3 =
        gk([](double u) { return pi * (3 * std::sin(u) * std::sin(u) - 1) * std::cos(u); }, -pi / 2, s);
    const double a2 = -2 * t * std::sqrt(std::max(0.0, 1 - t * t)), a3 = pi * (t * t * t - t);
    worst = std::max({worst, std::abs(b2.primitive(t) - a2), std::abs(b3.primitive(t) - a3),
                      std::abs(q2 - a2), std::abs(q3 - a3)});
  }
  r.require(worst <= 1e-10, "closed form vs quadrature " + fmt("%.2e", worst));
  const std::vector<double> grid = t_grid(10000);
  for (const SlidingKernel* k : {&b2, &b3}) {
    const AdmissibilityReport a = check_admissibility(*k, grid);
    r.require(a.pass && a.integral_zero && a.partial_positive, "admissibility");
    r.require(a.alpha_one_zero.value_or(false), "alpha(1) != 0");
  }
  r.note("max error " + fmt("%.2e", worst));
  return r.done();
}

Outcome c5() {
  Report r;
  const RadialDeficit g = deficit_profile(make_radial_exp(3, 1.0, 1.0));
  const SlidingKernel b = beta_kernel(3);
  double worst = 0;
  for (double R : {5.0, 10.0, 20.0}) {
    const double ref = pi * (2 * e - 14 / e) * std::exp(-R);
    const double rel = std::abs(correlation(b, g, R).value / ref - 1);
    worst = std::max(worst, rel);
    r.require(rel <= 1e-8, "correlation at R=" + fmt("%g", R));
  }
  auto [p, v] = ball_deficit_measures(g, 3, 50.0, asymptotic_kernels(3));
  const double ratio = p.value / v.value, want = (e * e - 1) / 2;
  r.require(std::abs(ratio - want) <= 1e-6, "ratio " + fmt("%.9f", ratio));
  r.note("correlation rel error " + fmt("%.2e", worst) + "; ratio " + fmt("%.9f", ratio) + " vs " +
         fmt("%.9f", want));
  return r.done();
}

Outcome c6() {
  Report r;
  const AveragingIdentity a =
      averaging_identity(beta_kernel(3), deficit_profile(make_radial_exp(3, 1.0, 1.0)), 5.0, 10.0);
  const double diff = std::abs(a.lhs - a.rhs());
  r.require(diff <= 1e-8 * std::max(std::abs(a.lhs), std::abs(a.rhs())), "relative gap");
  r.note("lhs " + fmt("%.12e", a.lhs) + ", rhs " + fmt("%.12e", a.rhs()) + ", |diff| " + fmt("%.2e", diff));
  return r.done();
}

Outcome c7() {
  Report r;
  MeasureBudget q;
  q.samples = 1'000'000;
  q.seed = 20240;
  double worst = 0;
  int compared = 0;
  for (int n : {2, 3}) {
    const Vec th = Vec::unit(n, 0), pl = Vec::unit(n, 1);
    const std::vector<std::pair<std::string, CompetitorSet>> sets = {
        {"plain", make_plain_ball(th, 3.0)},
        {"cylinder", make_cylinder_extended(th, 3.0, 0.3)},
        {"rotation", make_rotation_swept(th, 3.0, 0.2, pl)}};
    const std::vector<std::pair<std::string, Density>> dens = {{"f=1", make_constant(n, 1.0)},
                                                               {"f=1-e^-r", make_radial_exp(n, 1.0, 1.0)}};
    for (const auto& [sn, s] : sets)
      for (const auto& [dn, d] : dens) {
        const SetMeasures a = set_measures(s, d, Method::quadrature, q);
        const SetMeasures m = set_measures(s, d, Method::monte_carlo, q);
        const std::string tag = sn + " " + dn + " N=" + std::to_string(n);
        for (const auto& [qa, mc] : {std::pair{a.volume, m.volume}, std::pair{a.perimeter, m.perimeter}}) {
          const double diff = std::abs(qa.value - mc.value);
          // a zero standard error (f = 1 on flat patches) leaves only rounding
          const double allowed = 3 * mc.error_estimate + 1e-12 * std::abs(qa.value);
          r.require(diff <= allowed, tag);
          if (mc.error_estimate > 0) worst = std::max(worst, diff / mc.error_estimate);
          ++compared;
        }
      }
  }
  r.note(std::to_string(compared) + " comparisons, largest " + fmt("%.2f", worst) + " standard errors");
  return r.done();
}

struct EndToEnd {
  std::string name;
  Density density;
  CompetitorRun run;
  double seconds = 0;
};

const std::vector<EndToEnd>& end_to_end_runs() {
  static const std::vector<EndToEnd> runs = [] {
    std::vector<EndToEnd> out;
    CompetitorOptions o;
    o.eps = 0.05;
    o.R_min = 50;
    for (auto [name, d] : {std::pair{std::string("radial_exp N=2"), make_radial_exp(2, 1.0, 1.0)},
                           std::pair{std::string("angular_mod N=2"), make_angular_mod(2, 1.0, 1.0, 0.5, 1)},
                           std::pair{std::string("radial_exp N=3"), make_radial_exp(3, 1.0, 1.0)}}) {
      const auto t0 = std::chrono::steady_clock::now();
      CompetitorRun run = run_competitor(d, o);
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out.push_back({name, d, std::move(run), s});
    }
    return out;
  }();
  return runs;
}

Outcome c8() {
  Report r;
  for (const EndToEnd& x : end_to_end_runs()) {
    const CompetitorRun& run = x.run;
    const int n = x.density.dim;
    const double wn = oracle::ball_volume(n);
    const Competitor& c = run.result;
    r.require(run.outcome == "certified", x.name + " outcome " + run.outcome);
    r.require(x.seconds < 120, x.name + " took " + fmt("%.1f s", x.seconds));
    r.require(std::abs(c.volume_error) <= 1e-6 * wn, x.name + " volume");
    r.require(c.match.bound_ok, x.name + " delta bound");
    if (run.step1) r.require(run.step1->match.bound_ok, x.name + " step one delta bound");
    if (run.tau)
      for (bool ok : run.tau->bound_ok) r.require(ok, x.name + " tau-grid delta bound");
    // P_f < N w_N - 1e-6, i.e. N w_N - P_f > 1e-6
    r.require(c.perimeter_gap > 1e-6, x.name + " perimeter gap " + fmt("%.3e", c.perimeter_gap) + " <= 1e-6");
    r.note(x.name + ": " + run.path + ", R " + fmt("%g", run.far_ball.R) + ", N w_N - P_f " +
           fmt("%.3e", c.perimeter_gap) + ", |V_f - w_N| " + fmt("%.2e", std::abs(c.volume_error)) + ", " +
           fmt("%.1f s", x.seconds));
  }
  return r.done();
}

Outcome c9() {
  Report r;
  const EndToEnd& x = end_to_end_runs()[1];
  if (!x.run.tau || !x.run.circle) {
    r.require(false, "angular run produced no tau map");
    return r.done();
  }
  const double eps = 0.05;
  const TauMap& t = *x.run.tau;
  r.require(t.increasing, "tau not increasing");
  r.require(t.lipschitz_lo >= 1 - eps - 1e-3, "lower quotient " + fmt("%.12f", t.lipschitz_lo));
  r.require(t.lipschitz_hi <= 1 / (1 - eps) + 1e-3, "upper quotient " + fmt("%.12f", t.lipschitz_hi));
  // the map on its own, at the run's circle and radius
  MatchOptions mo;
  mo.eps = eps;
  const auto t0 = std::chrono::steady_clock::now();
  const TauMap again = tau_map(rescale(x.density, oracle::ball_volume(2)).density, x.run.far_ball.R,
                               *x.run.circle, Defaults::tau_points, mo);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.require(s < 30, "tau map took " + fmt("%.1f s", s));
  r.require(again.lipschitz_lo == t.lipschitz_lo && again.lipschitz_hi == t.lipschitz_hi,
            "tau map not reproduced");
  r.note("quotients in [" + fmt("%.15f", t.lipschitz_lo) + ", " + fmt("%.15f", t.lipschitz_hi) + "], " +
         std::to_string(t.psi.size()) + " points, " + fmt("%.1f s", s));
  return r.done();
}

Outcome c10() {
  Report r;
  double worst = 0;
  for (int n : {2, 3, 4})
    for (double C2 : {0.5, 1.0, 8.0})
      for (double m0 : {0.1, 1.0}) {
        const OdeCertificate c = simulate_comparison_ode(C2, n, m0, Defaults::ode_step);
        const double want = n * std::pow(C2, (n - 1.0) / n) * std::pow(m0, 1.0 / n);
        worst = std::max(worst, std::abs(c.extinction - want));
      }
  r.require(worst <= 1e-6, "sweep error " + fmt("%.2e", worst));
  const double a = simulate_comparison_ode(1.0, 2, 1.0, Defaults::ode_step).extinction;
  const double b = simulate_comparison_ode(8.0, 3, 1.0, Defaults::ode_step).extinction;
  r.require(std::abs(a - 2) <= 1e-6, "(2, 1, 1) gives " + fmt("%.12f", a));
  r.require(std::abs(b - 12) <= 1e-6, "(3, 8, 1) gives " + fmt("%.12f", b));
  r.note("18 cases, max error " + fmt("%.2e", worst) + "; t*(2,1,1) = " + fmt("%.12f", a) +
         ", t*(3,8,1) = " + fmt("%.12f", b));
  return r.done();
}

Outcome c11() {
  Report r;
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int i = 0; i < 5; ++i) {
    const int n = 2 + static_cast<int>(gen() % 2);
    const double a = 0.5 + 1.5 * u(gen);
    Density d = i % 3 == 0 ? make_radial_exp(n, a, 0.5 + u(gen))
                : i % 3 == 1
                    ? make_radial_power(n, a, 1.0 + 2 * u(gen))
                    : make_angular_mod(n, a, 0.5 + u(gen), 0.5 * u(gen), 1 + static_cast<int>(gen() % 3));
    const Rescaled rs = rescale(d, (0.5 + 2 * u(gen)) * oracle::ball_volume(n));
    const double R = 2 + 4 * u(gen);
    CompetitorSet s = i % 2 ? make_cylinder_extended(Vec::unit(n, 0), R, 0.3 * u(gen))
                            : make_rotation_swept(Vec::unit(n, 0), R, 0.3 * u(gen), Vec::unit(n, 1));
    const SetMeasures after = set_measures(s, rs.density, Method::quadrature);
    s.scale = rs.lambda;
    const SetMeasures before = set_measures(s, d, Method::quadrature);
    const double rho_after = mean_density(after.perimeter.value, after.volume.value, n);
    const double rho_before = mean_density(before.perimeter.value, before.volume.value, n);
    const double diff = std::abs(rho_after - rho_before / a);
    worst = std::max(worst, diff);
    r.require(diff <= 1e-9, "configuration " + std::to_string(i));
  }
  r.note("5 configurations, max |rho' - rho/a| " + fmt("%.2e", worst));
  return r.done();
}

Outcome c12() {
  Report r;
  const std::vector<nlohmann::json> densities = {
      {{"family", "radial_exp"}, {"dim", 2}, {"params", {{"c", 1}}}},
      {{"family", "angular_mod"}, {"dim", 2}, {"params", {{"c", 1}, {"eta", 0.5}, {"k", 1}}}},
      {{"family", "radial_exp"}, {"dim", 3}, {"params", {{"c", 1}}}}};
  std::size_t bytes = 0;
  for (const nlohmann::json& d : densities) {
    ExperimentConfig cfg;
    cfg.subcommand = "competitor";
    cfg.params = {{"density", d}, {"eps", 0.05}, {"rmin", 50}, {"seed", 7}};
    std::string text[2];
    for (std::string& t : text) {
      const ExperimentResult res = run(cfg);
      t = to_json_text(res.document);
      for (const Table& tb : res.tables) t += to_csv_text(tb);
    }
    r.require(text[0] == text[1], d["family"].get<std::string>() + " differs between runs");
    bytes += text[0].size();
  }
  r.note("3 configurations, " + std::to_string(bytes) + " bytes compared");
  return r.done();
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<Outcome()>> criteria = {{1, c1}, {2, c2},   {3, c3},   {4, c4},
                                                            {5, c5}, {6, c6},   {7, c7},   {8, c8},
                                                            {9, c9}, {10, c10}, {11, c11}, {12, c12}};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (!criteria.count(k)) {
      std::fprintf(stderr, "usage: acceptance [criterion 1-12 ...]\n");
      return 64;
    }
    selected.push_back(k);
  }
  if (selected.empty())
    for (const auto& [k, f] : criteria) selected.push_back(k);
  // runtime limits in seconds, where one is stated
  const std::map<int, double> limits = {{1, 1}, {2, 1},  {3, 5},  {4, 5}, {5, 5},
                                        {6, 5}, {7, 60}, {10, 5}, {11, 5}};
  int failed = 0;
  for (int k : selected) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = criteria.at(k)();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limits.count(k) && s >= limits.at(k)) {
      o.pass = false;
      o.detail += "; over the " + fmt("%g s", limits.at(k)) + " limit";
    }
    std::printf("criterion %d: %s %s (%.2f s)\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str(), s);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
