/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Every tolerance is pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qem/algorithms.hpp"
#include "qem/diffraction.hpp"
#include "qem/experiment.hpp"
#include "qem/feasibility.hpp"
#include "qem/oracle.hpp"

using namespace qem;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%s] criterion %d: %s (%s; %.1f s)\n", pass ? "PASS" : "FAIL", number,
              name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

void run_criterion(int number, const std::string& name,
                   const std::function<bool(std::string&)>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(number, name, pass, detail, secs);
}

PhaseMap random_map(std::size_t d, CounterRng& rng) {
  PhaseMap m = PhaseMap::zeros(d);
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q < d; ++q) m.at(p, q) = (rng.uniform() * 2 - 1) * kPi;
  return m;
}

double fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    den += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return num / den;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::filesystem::path kDataDir = QEM_DATA_DIR;

Composition bundled_composition() {
  Composition c;
  c.density = {52.13207694363484, 33.36879362649837, 10.501042083738307,
               10.063942870100469, 0.54370877793975};
  c.thickness_nm = 30.0;
  return c;
}

// -- criteria ----------------------------------------------------------------

bool criterion1_oracle_equivalence(std::string& detail) {
  double worst = 0.0;
  // exhaustive over every detection outcome for d in {2, 4}
  for (std::size_t d : {2, 4}) {
    for (std::size_t state_idx = 0; state_idx < 5; ++state_idx) {
      CounterRng rng = CounterRng(10'000 + d).derive(state_idx);
      const StateVector reference = random_state(RegisterLayout({d, d}, {"x", "y"}), rng);
      const PhaseMap map = random_map(d, rng);
      StateVector ideal = reference;
      DoseLedger li(d);
      oracle_call_ideal(ideal, 0, 1, map, li);
      for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t l = 0; l < d; ++l) {
          StateVector phys = reference;
          DoseLedger lp(d);
          CounterRng prng(1);
          PhysicalCallOptions opt;
          opt.forced_detection = {{k, l}};
          oracle_call_physical(phys, 0, 1, map, NoiseConfig{}, prng, lp, opt);
          worst = std::max(worst, distance_up_to_phase(ideal, phys));
        }
      }
    }
  }
  // sampled outcomes for d in {8, 16}, 1000 seeded random states each
  for (std::size_t d : {8, 16}) {
    for (std::size_t trial = 0; trial < 1000; ++trial) {
      CounterRng rng = CounterRng(20'000 + d).derive(trial);
      StateVector phys = random_state(RegisterLayout({d, d}, {"x", "y"}), rng);
      StateVector ideal = phys;
      const PhaseMap map = random_map(d, rng);
      DoseLedger li(d), lp(d);
      oracle_call_ideal(ideal, 0, 1, map, li);
      oracle_call_physical(phys, 0, 1, map, NoiseConfig{}, rng, lp);
      worst = std::max(worst, distance_up_to_phase(ideal, phys));
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "max distance %.3g vs 1e-10", worst);
  detail = buf;
  return worst <= 1e-10;
}

bool criterion2_grover_pixel(std::string& detail) {
  double worst = 0.0;
  for (std::size_t d : {2, 4, 8}) {
    for (std::size_t s = 1; s <= default_pixel_iterations(d); ++s) {
      const double analytic =
          std::pow(std::sin(static_cast<double>(2 * s + 1) * std::asin(1.0 / d)), 2);
      worst = std::max(worst,
                       std::fabs(grover_pixel_marked_probability(d, 1, s) - analytic));
    }
  }
  PhaseMap map = PhaseMap::zeros(4);
  map.at(0, 0) = kPi;
  std::size_t wins = 0;
  const std::size_t trials = 10000;
  for (std::size_t t = 0; t < trials; ++t) {
    CounterRng rng = CounterRng(424242).derive(t);
    wins += grover_pixel_search(map, 1, 3, NoiseConfig{}, rng).success ? 1 : 0;
  }
  const double rate = static_cast<double>(wins) / trials;
  char buf[160];
  std::snprintf(buf, sizeof buf, "analytic gap %.2g vs 1e-6; sampled d=4 s=3 %.4f vs 0.961+-0.01",
                worst, rate);
  detail = buf;
  return worst <= 1e-6 && std::fabs(rate - 0.961) <= 0.01;
}

bool criterion3_dose_advantage(std::string& detail) {
  // One full search run at the default iteration count ceil(pi d / 4) = 7,
  // the "~d queries" run the dose argument is about. The literal 8-iteration
  // sum is reported alongside; it overshoots d/2 by ~19% because the exact
  // amplitude sin((2s+1) asin(1/d)) outruns the small-angle sin(pi s / 2d).
  const std::size_t d = 8;
  const std::size_t run = default_pixel_iterations(d); // 7
  const double dose_run = grover_pixel_marked_dose(d, 1, run);
  const double dose_d = grover_pixel_marked_dose(d, 1, d);
  const double target = static_cast<double>(d) / 2.0;
  const double rel = std::fabs(dose_run - target) / target;

  PhaseMap map = PhaseMap::zeros(d);
  map.at(0, 0) = kPi;
  CounterRng rng(31);
  const auto classical = classical_pixel_scan(map, rng);
  const double classical_dose = classical.ledger.per_pixel[0];

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "grover dose %.3f over %zu iters (%.1f%% of d/2=4; literal d iters: %.3f), "
                "classical dose %.6f",
                dose_run, run, 100.0 * rel, dose_d, classical_dose);
  detail = buf;
  return rel <= 0.15 && std::fabs(classical_dose - 1.0) < 1e-12;
}

bool criterion4_structure_scaling(std::string& detail) {
  const std::size_t k = 64;
  const std::size_t trials = 1000;
  std::vector<double> ns, electrons, classical_electrons;
  std::ostringstream rates;
  bool all_above = true;
  for (std::size_t n : {4, 8, 16, 32}) {
    CounterRng setup(CounterRng(1234).next_u64());
    const auto problem = make_synthetic_problem(4, n, k, setup);
    std::size_t wins = 0;
    std::uint64_t used = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      CounterRng rng = CounterRng(1234).derive(t);
      const auto res = grover_structure_search(problem.candidates, problem.true_map,
                                               problem.correct_alpha, NoiseConfig{}, rng);
      wins += res.success ? 1 : 0;
      used += res.electrons_used;
    }
    const double rate = static_cast<double>(wins) / trials;
    all_above = all_above && rate >= 0.9;
    ns.push_back(static_cast<double>(n));
    electrons.push_back(static_cast<double>(used) / trials);

    CounterRng crng(55);
    const auto base = classical_structure_scan(problem.candidates, problem.true_map,
                                               problem.correct_alpha, crng);
    classical_electrons.push_back(static_cast<double>(base.electrons_used));
    rates << "N=" << n << ":" << rate << " ";
  }
  const double quantum_exp = fit_exponent(ns, electrons);
  const double classical_exp = fit_exponent(ns, classical_electrons);
  char buf[240];
  std::snprintf(buf, sizeof buf, "success %s; exponent %.3f vs [0.4,0.7]; classical %.3f vs 1.0+-0.05",
                rates.str().c_str(), quantum_exp, classical_exp);
  detail = buf;
  return all_above && quantum_exp >= 0.4 && quantum_exp <= 0.7 &&
         std::fabs(classical_exp - 1.0) <= 0.05;
}

bool criterion5_amplitude_property(std::string& detail) {
  const auto table = CrossSectionTable::load_csv(kDataDir / "cross_sections_synthetic.csv");
  Composition w;
  w.density = {1, 1, 1, 1, 1};
  w.thickness_nm = 1.0;

  // Var(B)(0) = 0, E in [0,1]
  const auto prof05 = scatter_profile(table, w, 0.05);
  const auto base = amplitude_error(prof05, 0.05);
  bool ok = base.varB[0] == 0.0;
  for (double e : base.E) ok = ok && e >= 0.0 && e <= 1.0;

  // e_A(p_S = 0) = 0
  const auto res0 = amplitude_error(scatter_profile(table, w, 0.0), 0.05);
  ok = ok && res0.e_A == 0.0;

  // monotone nonincreasing in sigma, nondecreasing in p_S
  double prev = 2.0;
  for (double s : {10.0, 20.0, 30.0, 40.0, 50.0}) {
    const double ea = amplitude_error(prof05, s * 1e-3).e_A;
    ok = ok && ea <= prev + 1e-12;
    prev = ea;
  }
  prev = -1.0;
  for (double p : {0.02, 0.05, 0.10}) {
    const double ea = amplitude_error(scatter_profile(table, w, p), 0.05).e_A;
    ok = ok && ea >= prev - 1e-12;
    prev = ea;
  }

  // normalization identity on synthetic isotropic S at 50 mrad
  const auto iso = CrossSectionTable::synthetic_isotropic(2e-5);
  const double resid =
      normalization_residual(scatter_profile(iso, w, 0.05), 0.05) / 0.05;
  ok = ok && resid <= 0.02;

  // phi-resolution doubling
  const double ea100 = amplitude_error(prof05, 0.01, 100).e_A;
  const double ea200 = amplitude_error(prof05, 0.01, 200).e_A;
  const double shift = std::fabs(ea200 - ea100) / ea100;
  ok = ok && shift < 0.01;

  char buf[160];
  std::snprintf(buf, sizeof buf, "norm residual %.3f%% vs 2%%; phi-doubling shift %.3f%% vs 1%%",
                100 * resid, 100 * shift);
  detail = buf;
  return ok;
}

bool criterion6_amplitude_data(std::string& detail) {
  const auto path = kDataDir / "cross_sections_300keV.csv";
  if (!std::filesystem::exists(path)) {
    detail = "data required: " + path.string() + " (NIST-shaped table)";
    return false;
  }
  const auto table = CrossSectionTable::load_csv(path);
  const Composition comp = bundled_composition();

  const double rate = elastic_rate(table, comp);
  const double p30 = scattering_probability(rate, 30.0);
  const double p50 = scattering_probability(rate, 50.0);
  bool ok = std::fabs(p30 - 0.054) < 1e-9 && std::fabs(p50 - 0.090) < 1e-9;

  struct Case {
    double p_S, sigma_mrad, published;
  };
  const Case cases[] = {
      {0.05, 50.0, 0.037}, {0.05, 10.0, 0.088}, {0.10, 50.0, 0.054}, {0.10, 10.0, 0.13}};
  std::ostringstream line;
  line.precision(3);
  for (const Case& c : cases) {
    const auto prof = scatter_profile(table, comp, c.p_S);
    const double ea = amplitude_error(prof, c.sigma_mrad * 1e-3).e_A;
    const double rel = std::fabs(ea - c.published) / c.published;
    ok = ok && rel <= 0.15;
    line << 100 * ea << "%(ref " << 100 * c.published << "%, " << 100 * rel << "% off) ";
  }
  detail = "rate " + std::to_string(rate) + "/nm; e_A " + line.str();
  return ok;
}

bool criterion7_feasibility(std::string& detail) {
  const PhysicalConstants consts;
  consts.validate();
  const double zr = consts.Z0 / consts.R_K;
  bool ok = std::fabs(zr - 0.01461) < 1e-4 && std::fabs(zr - 2 * consts.alpha) < 1e-4 * zr;

  CircuitParams p;
  p.l = 1e-5;
  p.L = consts.mu0 * p.l;
  p.C = consts.mu0 * p.l / (consts.Z0 * consts.Z0); // impedance Z0
  const auto dq = charge_fluctuation(p, consts);
  ok = ok && std::fabs(dq.exact_e - 2.335) < 1e-3;

  const auto ex = excitation_probability(p, ExcitationMode::Magnetic, consts);
  ok = ok && std::fabs(ex.reduced - zr) < 1e-12 && ex.reduced > 0.01 && ex.reduced < 0.02;

  char buf[160];
  std::snprintf(buf, sizeof buf, "Z0/R_K %.5f; dq %.4f e; p_ex reduced %.4f (raw %.4f)", zr,
                dq.exact_e, ex.reduced, ex.raw);
  detail = buf;
  return ok;
}

bool criterion8_determinism(std::string& detail) {
  const auto out_a = std::filesystem::temp_directory_path() / "qem_acc_det_a";
  const auto out_b = std::filesystem::temp_directory_path() / "qem_acc_det_b";
  std::filesystem::remove_all(out_a);
  std::filesystem::remove_all(out_b);

  nlohmann::json j;
  j["scenario"] = "grover-pixel";
  j["seed"] = 2029;
  j["d"] = 4;
  j["iterations"] = 3;
  j["trials"] = 500;
  j["outdir"] = out_a.string();
  const auto ma = run_experiment(ExperimentConfig::from_json(j));
  j["outdir"] = out_b.string();
  const auto mb = run_experiment(ExperimentConfig::from_json(j));

  bool ok = true;
  for (const char* f :
       {"summary.json", "trials.jsonl", "aggregate.csv", "dose_per_pixel.csv"})
    ok = ok && slurp(ma.dir / f) == slurp(mb.dir / f);

  const auto report = compare_manifests(ma.dir, mb.dir);
  ok = ok && report.max_drift == 0.0 && !report.metrics.empty();

  // a second scenario family for good measure
  nlohmann::json j2;
  j2["scenario"] = "structure-search";
  j2["seed"] = 11;
  j2["d"] = 4;
  j2["N"] = 4;
  j2["k"] = 16;
  j2["trials"] = 40;
  j2["outdir"] = out_a.string();
  const auto sa = run_experiment(ExperimentConfig::from_json(j2));
  j2["outdir"] = out_b.string();
  const auto sb = run_experiment(ExperimentConfig::from_json(j2));
  ok = ok && slurp(sa.dir / "trials.jsonl") == slurp(sb.dir / "trials.jsonl");
  const auto report2 = compare_manifests(sa.dir, sb.dir);
  ok = ok && report2.max_drift == 0.0;

  char buf[120];
  std::snprintf(buf, sizeof buf, "byte-identical reruns; max drift %.3g and %.3g",
                report.max_drift, report2.max_drift);
  detail = buf;
  std::filesystem::remove_all(out_a);
  std::filesystem::remove_all(out_b);
  return ok;
}

} // namespace

int main() {
  std::printf("qem acceptance suite\n");
  run_criterion(1, "oracle pipeline equivalence", criterion1_oracle_equivalence);
  run_criterion(2, "grover pixel search analytic + sampled", criterion2_grover_pixel);
  run_criterion(3, "dose advantage vs classical scan", criterion3_dose_advantage);
  run_criterion(4, "structure search sublinear scaling", criterion4_structure_scaling);
  run_criterion(5, "amplitude-error property tier", criterion5_amplitude_property);
  run_criterion(6, "amplitude-error data tier", criterion6_amplitude_data);
  run_criterion(7, "feasibility arithmetic", criterion7_feasibility);
  run_criterion(8, "determinism and drift", criterion8_determinism);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures;
}
