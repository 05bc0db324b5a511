/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#include <cstdio>
#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "qem/experiment.hpp"

namespace {

int run_config(const std::string& path) {
  const qem::ExperimentConfig cfg = qem::ExperimentConfig::from_json_file(path);
  const qem::RunManifest m = qem::run_experiment(cfg);
  std::cout << m.summary.dump(2) << "\n";
  std::cout << "results written to " << m.dir.string() << "\n";
  return 0;
}

int compare(const std::string& a, const std::string& b) {
  const qem::DriftReport report = qem::compare_manifests(a, b);
  std::printf("%-40s %22s %22s %12s\n", "metric", "baseline", "candidate", "rel_drift");
  for (const auto& m : report.metrics)
    std::printf("%-40s %22.15g %22.15g %12.5g\n", m.metric.c_str(), m.baseline, m.candidate,
                m.rel_drift);
  std::printf("max drift: %.5g\n", report.max_drift);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"qem - quantum electron microscope protocol simulator"};
  app.require_subcommand(1);

  std::string run_cfg, cmp_a, cmp_b, feas_cfg;
  auto* run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("config", run_cfg, "experiment config JSON")->required();
  auto* cmp = app.add_subcommand("compare", "drift report between two run manifests");
  cmp->add_option("baseline", cmp_a, "baseline manifest.json or run directory")->required();
  cmp->add_option("candidate", cmp_b, "candidate manifest.json or run directory")->required();
  auto* feas = app.add_subcommand("feasibility", "back-action calculator");
  feas->add_option("config", feas_cfg, "feasibility config JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_config(run_cfg);
    if (cmp->parsed()) return compare(cmp_a, cmp_b);
    return run_config(feas_cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
