#pragma once

// Config-driven experiments behind the command line tool. Every result is a
// JSON document plus named CSV tables; both carry a schema version and the
// seed, and reruns with the same config are byte-identical.

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "isolab/competitor.hpp"
#include "isolab/far_ball.hpp"
#include "isolab/kernel_lemmas.hpp"
#include "isolab/mass_escape.hpp"
#include "isolab/measures.hpp"

namespace isolab {

inline constexpr int kSchemaVersion = 1;

/// Single table of defaults shared by the tool and the tests.
struct Defaults {
  static constexpr double eps = 0.01;
  static constexpr double R_min = 50.0;
  static constexpr double R_max = 200.0;
  static constexpr double radius_step = 0.25;
  static constexpr double quadrature_tol = 1e-10;
  static constexpr long long samples = 1'000'000;
  static constexpr unsigned long long seed = 1;
  static constexpr int kernel_grid = 201;
  static constexpr int admissibility_grid = 10'000;
  static constexpr int direction_nodes = 360;
  static constexpr int tau_points = 720;
  static constexpr double ode_step = 1e-3;
};

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s{"check-density", "kernels",    "measure", "kernel-search",
                                          "far-ball",      "competitor", "morgan"};
  return s;
}

struct ExperimentConfig {
  std::string subcommand;
  nlohmann::json params = nlohmann::json::object();  // the config file contents
  std::optional<double> eps, R_min, R_max;
  std::optional<unsigned long long> seed;
  std::optional<long long> samples;
};

/// Cells are JSON scalars so numbers print in shortest round-trip form.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

struct ExperimentResult {
  int status = 1;  // 0 certified / success, 2 degenerate, 1 failure
  nlohmann::json document;
  std::vector<Table> tables;
};

/// Never throws for bad input: a malformed config yields status 1 and
/// document {"error": "<field>: <reason>"}.
ExperimentResult run(const ExperimentConfig& cfg);

std::string to_json_text(const nlohmann::json& j);
std::string to_csv_text(const Table& t);

/// Writes <dir>/<subcommand>.json and <dir>/<table>.csv.
void write_outputs(const ExperimentResult& r, const std::string& subcommand, const std::string& dir);

/// Set description {"variant", "direction", "offset", "delta", "plane_dir"}.
CompetitorSet set_from_json(const nlohmann::json& j, int dim);

nlohmann::json to_json(const MeasureResult& m);
nlohmann::json to_json(const SetMeasures& m);
nlohmann::json to_json(const CompetitorSet& e);
nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const Competitor& c);
nlohmann::json to_json(const FarBallCertificate& c);
nlohmann::json to_json(const SignSearchOutcome& s);
nlohmann::json to_json(const CompetitorRun& r);

}  // namespace isolab
