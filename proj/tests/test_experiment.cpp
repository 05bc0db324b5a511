/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qem/experiment.hpp"

using namespace qem;
using nlohmann::json;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json base_config(const std::string& scenario, const std::filesystem::path& outdir) {
  json j;
  j["scenario"] = scenario;
  j["seed"] = 7;
  j["outdir"] = outdir.string();
  return j;
}

} // namespace

TEST_CASE("config validation") {
  const auto out = fresh_dir("qem_cfg_test");

  SUBCASE("seed is mandatory") {
    json j;
    j["scenario"] = "grover-pixel";
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), std::invalid_argument);
  }

  SUBCASE("unknown scenarios are rejected") {
    json j = base_config("warp-drive", out);
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), std::invalid_argument);
  }

  SUBCASE("noise fields are range checked") {
    json j = base_config("grover-pixel", out);
    j["noise"]["inelastic_prob"] = 1.5;
    CHECK_THROWS_AS(ExperimentConfig::from_json(j), std::invalid_argument);
  }

  SUBCASE("amplitude-error without a table names the expected format") {
    json j = base_config("amplitude-error", out);
    j["p_S"] = 0.05;
    const auto cfg = ExperimentConfig::from_json(j);
    try {
      run_experiment(cfg);
      FAIL("expected an error");
    } catch (const std::invalid_argument& e) {
      const std::string msg = e.what();
      CHECK(msg.find("cross_sections") != std::string::npos);
      CHECK(msg.find("total_nm2") != std::string::npos);
    }
  }
}

TEST_CASE("grover-pixel scenario end to end") {
  const auto out = fresh_dir("qem_run_pixel");
  json j = base_config("grover-pixel", out);
  j["d"] = 4;
  j["k"] = 1;
  j["iterations"] = 3;
  j["trials"] = 200;
  const auto m = run_experiment(ExperimentConfig::from_json(j));

  CHECK(m.summary.at("success_rate").get<double>() > 0.9);
  CHECK(m.summary.at("electrons_per_trial").get<double>() == 3.0);
  CHECK(std::filesystem::exists(m.dir / "summary.json"));
  CHECK(std::filesystem::exists(m.dir / "trials.jsonl"));
  CHECK(std::filesystem::exists(m.dir / "aggregate.csv"));
  CHECK(std::filesystem::exists(m.dir / "dose_per_pixel.csv"));
  CHECK(std::filesystem::exists(m.dir / "manifest.json"));

  // one JSON record per trial
  std::ifstream in(m.dir / "trials.jsonl");
  std::size_t lines = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 200);
}

TEST_CASE("determinism and drift reporting") {
  const auto out_a = fresh_dir("qem_det_a");
  const auto out_b = fresh_dir("qem_det_b");
  json j = base_config("grover-pixel", out_a);
  j["d"] = 4;
  j["iterations"] = 3;
  j["trials"] = 100;

  const auto ma = run_experiment(ExperimentConfig::from_json(j));
  j["outdir"] = out_b.string();
  const auto mb = run_experiment(ExperimentConfig::from_json(j));

  SUBCASE("numeric outputs are byte-identical across reruns") {
    for (const char* f : {"summary.json", "trials.jsonl", "aggregate.csv",
                          "dose_per_pixel.csv"})
      CHECK(slurp(ma.dir / f) == slurp(mb.dir / f));
  }

  SUBCASE("compare reports zero drift for identical runs") {
    const auto report = compare_manifests(ma.dir, mb.dir);
    CHECK(report.max_drift == 0.0);
    CHECK(!report.metrics.empty());
  }

  SUBCASE("different seeds drift within the sampling band") {
    const auto out_c = fresh_dir("qem_det_c");
    j["outdir"] = out_c.string();
    j["seed"] = 99;
    const auto mc = run_experiment(ExperimentConfig::from_json(j));
    const auto report = compare_manifests(ma.dir, mc.dir);
    double success_drift = 0.0;
    for (const auto& metric : report.metrics)
      if (metric.metric == "success_rate") success_drift = metric.rel_drift;
    CHECK(success_drift < 0.1); // ~3 binomial sigmas at n=100, p~0.96
  }

  SUBCASE("structural mismatch is an error") {
    const auto out_d = fresh_dir("qem_det_d");
    j["outdir"] = out_d.string();
    j["seed"] = 7;
    j["d"] = 8;
    j["iterations"] = 3;
    const auto md = run_experiment(ExperimentConfig::from_json(j));
    CHECK_THROWS_AS(compare_manifests(ma.dir, md.dir), std::invalid_argument);
  }
}

TEST_CASE("structure-search scenario with synthetic candidates") {
  const auto out = fresh_dir("qem_run_struct");
  json j = base_config("structure-search", out);
  j["d"] = 4;
  j["N"] = 4;
  j["k"] = 16;
  j["trials"] = 50;
  j["classical_baseline"] = true;
  const auto m = run_experiment(ExperimentConfig::from_json(j));
  CHECK(m.summary.at("success_rate").get<double>() >= 0.9);
  CHECK(m.summary.at("electrons_per_trial").get<double>() == 16.0); // R=1, k=16
  CHECK(m.summary.at("classical_electrons_per_trial").get<double>() == 64.0); // N*k
}

TEST_CASE("multipass scenario") {
  const auto out = fresh_dir("qem_run_multipass");
  json j = base_config("multipass", out);
  j["d"] = 4;
  j["passes"] = 10;
  const auto m = run_experiment(ExperimentConfig::from_json(j));
  CHECK(m.summary.at("electrons").get<std::size_t>() == 10);
  CHECK(m.summary.at("max_signal").get<double>() > 0.0);
  CHECK(std::filesystem::exists(m.dir / "signal.csv"));
}

TEST_CASE("amplitude-error scenario") {
  const auto out = fresh_dir("qem_run_ea");
  json j = base_config("amplitude-error", out);
  j["cross_sections"] =
      (std::filesystem::path(QEM_DATA_DIR) / "cross_sections_synthetic.csv").string();
  j["p_S"] = 0.0;
  j["sigma_mrad"] = 50.0;
  const auto m = run_experiment(ExperimentConfig::from_json(j));
  CHECK(m.summary.at("e_A").get<double>() == 0.0);
  CHECK(std::filesystem::exists(m.dir / "e_curve.csv"));

  // composition route: p_S from the linear thickness law
  json j2 = base_config("amplitude-error", out);
  j2["seed"] = 8;
  j2["cross_sections"] =
      (std::filesystem::path(QEM_DATA_DIR) / "cross_sections_300keV.csv").string();
  j2["composition"] = {{"n_H", 52.13207694363484}, {"n_C", 33.36879362649837},
                       {"n_N", 10.501042083738307}, {"n_O", 10.063942870100469},
                       {"n_S", 0.54370877793975},  {"thickness_nm", 30.0}};
  const auto m2 = run_experiment(ExperimentConfig::from_json(j2));
  CHECK(m2.summary.at("p_S").get<double>() == doctest::Approx(0.054).epsilon(1e-9));
  CHECK(m2.summary.at("rate_per_nm").get<double>() ==
        doctest::Approx(1.8e-3).epsilon(1e-9));
}

TEST_CASE("feasibility scenario") {
  const auto out = fresh_dir("qem_run_feas");
  json j = base_config("feasibility", out);
  j["circuit"] = {{"L", 1.2566e-11}, {"C", 8.854e-17}, {"l", 1e-5},
                  {"phi_over_phi0", 1.0}, {"p", 3.37e-22}, {"w", 1e-5}};
  const auto m = run_experiment(ExperimentConfig::from_json(j));
  CHECK(m.summary.at("delta_q").at("exact_e").get<double>() ==
        doctest::Approx(2.335).epsilon(1e-2));
  CHECK(m.summary.at("deflection").at("satisfied").get<bool>());
}
