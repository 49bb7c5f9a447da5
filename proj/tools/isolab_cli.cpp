#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "isolab/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Weighted isoperimetric laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format = "json";
  std::optional<double> eps, rmin, rmax;
  std::optional<unsigned long long> seed;
  std::optional<long long> samples;

  for (const std::string& name : isolab::subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--eps", eps, "epsilon in (0, 1)");
    sub->add_option("--rmin", rmin, "smallest far-ball offset");
    sub->add_option("--rmax", rmax, "largest far-ball offset");
    sub->add_option("--seed", seed, "Monte-Carlo seed");
    sub->add_option("--samples", samples, "Monte-Carlo sample count");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--format", format, "stdout format")->check(CLI::IsMember({"json", "csv"}));
  }
  CLI11_PARSE(app, argc, argv);

  isolab::ExperimentConfig cfg;
  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.eps = eps;
  cfg.R_min = rmin;
  cfg.R_max = rmax;
  cfg.seed = seed;
  cfg.samples = samples;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "config: cannot open " << config_path << "\n";
      return 1;
    }
    try {
      cfg.params = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "config: " << e.what() << "\n";
      return 1;
    }
  }

  const isolab::ExperimentResult r = isolab::run(cfg);
  if (r.document.contains("error")) std::cerr << r.document["error"].get<std::string>() << "\n";
  if (!out_dir.empty()) {
    try {
      isolab::write_outputs(r, cfg.subcommand, out_dir);
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      return 1;
    }
  } else if (format == "csv" && !r.tables.empty()) {
    std::cout << isolab::to_csv_text(r.tables.front());
  } else {
    std::cout << isolab::to_json_text(r.document);
  }
  return r.status;
}
