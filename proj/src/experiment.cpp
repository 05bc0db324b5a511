/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#include "qem/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qem/algorithms.hpp"
#include "qem/candidates.hpp"
#include "qem/feasibility.hpp"
#include "qem/oracle.hpp"

namespace qem {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("QEM_THREADS")) {
    const long n = std::atol(env);
    if (n >= 1) return static_cast<std::size_t>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs fn(trial) for every trial on a small worker pool; each result lands
/// in a preallocated per-trial slot, so scheduling cannot change any output.
template <typename F>
void for_each_trial(std::size_t trials, F&& fn) {
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(trials, 1));
  if (workers <= 1) {
    for (std::size_t t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t t = next.fetch_add(1);
        if (t >= trials) return;
        fn(t);
      }
    });
  }
  for (auto& th : pool) th.join();
}

PhaseMap single_marked_map(std::size_t d, std::size_t k) {
  std::vector<double> theta(d * d, 0.0);
  theta[0] = std::numbers::pi / static_cast<double>(k);
  return PhaseMap(d, std::move(theta));
}

std::string dose_csv(const DoseLedger& ledger) {
  std::ostringstream out;
  const std::size_t d = ledger.d;
  out << "# mean accumulated dose per pixel, row-major\n";
  for (std::size_t p = 0; p < d; ++p) {
    for (std::size_t q = 0; q < d; ++q)
      out << fmt17(ledger.per_pixel[p * d + q]) << (q + 1 == d ? "\n" : ",");
  }
  return out.str();
}

using FileList = std::vector<std::pair<std::string, std::string>>;

// -- scenario runners -------------------------------------------------------

ordered_json run_oracle_verify(const ExperimentConfig& cfg, FileList& files) {
  const std::size_t d = cfg.d;
  std::vector<double> distances(cfg.trials, 0.0);
  for_each_trial(cfg.trials, [&](std::size_t t) {
    CounterRng rng = CounterRng(cfg.seed).derive(t);
    RegisterLayout layout({d, d}, {"x", "y"});
    StateVector reference = random_state(layout, rng);
    StateVector physical = reference;
    PhaseMap map = PhaseMap::zeros(d);
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = 0; q < d; ++q) map.at(p, q) = rng.uniform() * 2.0 - 1.0;
    DoseLedger la(d), lb(d);
    oracle_call_ideal(reference, 0, 1, map, la);
    oracle_call_physical(physical, 0, 1, map, NoiseConfig{}, rng, lb);
    distances[t] = distance_up_to_phase(reference, physical);
  });
  double max_dist = 0.0;
  for (double v : distances) max_dist = std::max(max_dist, v);

  std::ostringstream tbl;
  tbl << "trial,distance\n";
  for (std::size_t t = 0; t < cfg.trials; ++t) tbl << t << "," << fmt17(distances[t]) << "\n";
  files.emplace_back("trials.csv", tbl.str());

  ordered_json s;
  s["scenario"] = cfg.scenario;
  s["d"] = d;
  s["trials"] = cfg.trials;
  s["max_distance"] = max_dist;
  s["pass"] = max_dist <= 1e-10;
  return s;
}

ordered_json run_grover_pixel(const ExperimentConfig& cfg, FileList& files) {
  const std::size_t d = cfg.d;
  const std::size_t iters = cfg.iterations.value_or(default_pixel_iterations(d));
  const PhaseMap map = cfg.phase_map_path
                           ? PhaseMap::load_csv(cfg.resolve(*cfg.phase_map_path))
                           : single_marked_map(d, cfg.k);

  std::vector<std::optional<SearchResult>> results(cfg.trials);
  for_each_trial(cfg.trials, [&](std::size_t t) {
    CounterRng rng = CounterRng(cfg.seed).derive(t);
    results[t] = grover_pixel_search(map, cfg.k, iters, cfg.noise, rng);
  });

  std::size_t wins = 0;
  std::uint64_t electrons = 0;
  DoseLedger mean_dose(d);
  std::ostringstream jsonl;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const SearchResult& r = *results[t];
    wins += r.success ? 1 : 0;
    electrons += r.electrons_used;
    for (std::size_t i = 0; i < mean_dose.per_pixel.size(); ++i)
      mean_dose.per_pixel[i] += r.ledger.per_pixel[i] / static_cast<double>(cfg.trials);
    ordered_json line;
    line["trial"] = t;
    line["reported"] = r.reported ? json(*r.reported) : json(nullptr);
    line["success"] = r.success;
    line["electrons"] = r.electrons_used;
    jsonl << line.dump() << "\n";
  }
  files.emplace_back("trials.jsonl", jsonl.str());
  files.emplace_back("dose_per_pixel.csv", dose_csv(mean_dose));

  const double success_rate = static_cast<double>(wins) / static_cast<double>(cfg.trials);
  std::ostringstream agg;
  agg << "success_rate,trials,electrons_total,electrons_per_trial,marked_dose_mean\n";
  agg << fmt17(success_rate) << "," << cfg.trials << "," << electrons << ","
      << fmt17(static_cast<double>(electrons) / static_cast<double>(cfg.trials)) << ","
      << fmt17(mean_dose.per_pixel[0]) << "\n";
  files.emplace_back("aggregate.csv", agg.str());

  ordered_json s;
  s["scenario"] = cfg.scenario;
  s["d"] = d;
  s["k"] = cfg.k;
  s["iterations"] = iters;
  s["trials"] = cfg.trials;
  s["success_rate"] = success_rate;
  s["electrons_per_trial"] = static_cast<double>(electrons) / static_cast<double>(cfg.trials);
  s["marked_dose_mean"] = mean_dose.per_pixel[0];
  return s;
}

ordered_json run_structure_search(const ExperimentConfig& cfg, FileList& files) {
  std::optional<SyntheticProblem> synth;
  std::optional<CandidateSet> loaded;
  std::optional<PhaseMap> loaded_map;
  const PhaseMap* true_map = nullptr;
  const CandidateSet* candidates = nullptr;
  std::size_t correct = 0;
  if (cfg.candidates_dir) {
    loaded = CandidateSet::load_directory(cfg.resolve(*cfg.candidates_dir), cfg.k);
    if (!cfg.phase_map_path)
      throw std::invalid_argument(
          "structure-search with candidates_dir also needs phase_map (the true specimen)");
    loaded_map = PhaseMap::load_csv(cfg.resolve(*cfg.phase_map_path));
    correct = cfg.correct_alpha.value_or(0);
    candidates = &*loaded;
    true_map = &*loaded_map;
  } else {
    // Setup randomness comes from its own derived stream so trial streams
    // stay untouched.
    CounterRng setup(CounterRng(cfg.seed).next_u64());
    synth = make_synthetic_problem(cfg.d, cfg.n_candidates, cfg.k, setup);
    candidates = &synth->candidates;
    true_map = &synth->true_map;
    correct = synth->correct_alpha;
  }

  std::vector<std::optional<SearchResult>> results(cfg.trials);
  std::vector<std::optional<SearchResult>> baseline(cfg.trials);
  for_each_trial(cfg.trials, [&](std::size_t t) {
    CounterRng rng = CounterRng(cfg.seed).derive(t);
    results[t] = grover_structure_search(*candidates, *true_map, correct, cfg.noise, rng,
                                         cfg.iterations);
    if (cfg.classical_baseline) {
      CounterRng crng = CounterRng(cfg.seed ^ 0x434c415353ull).derive(t);
      baseline[t] = classical_structure_scan(*candidates, *true_map, correct, crng);
    }
  });

  std::size_t wins = 0, cwins = 0;
  std::uint64_t electrons = 0, celectrons = 0;
  DoseLedger mean_dose(cfg.d);
  std::ostringstream jsonl;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const SearchResult& r = *results[t];
    wins += r.success ? 1 : 0;
    electrons += r.electrons_used;
    for (std::size_t i = 0; i < mean_dose.per_pixel.size(); ++i)
      mean_dose.per_pixel[i] += r.ledger.per_pixel[i] / static_cast<double>(cfg.trials);
    ordered_json line;
    line["trial"] = t;
    line["reported"] = r.reported ? json(*r.reported) : json(nullptr);
    line["success"] = r.success;
    line["electrons"] = r.electrons_used;
    line["beta_outcomes"] = r.beta_outcomes;
    jsonl << line.dump() << "\n";
    if (baseline[t]) {
      cwins += baseline[t]->success ? 1 : 0;
      celectrons += baseline[t]->electrons_used;
    }
  }
  files.emplace_back("trials.jsonl", jsonl.str());
  files.emplace_back("dose_per_pixel.csv", dose_csv(mean_dose));

  const double success_rate = static_cast<double>(wins) / static_cast<double>(cfg.trials);
  std::ostringstream agg;
  agg << "success_rate,trials,electrons_total,electrons_per_trial\n";
  agg << fmt17(success_rate) << "," << cfg.trials << "," << electrons << ","
      << fmt17(static_cast<double>(electrons) / static_cast<double>(cfg.trials)) << "\n";
  files.emplace_back("aggregate.csv", agg.str());

  ordered_json s;
  s["scenario"] = cfg.scenario;
  s["d"] = cfg.d;
  s["N"] = candidates->count();
  s["k"] = cfg.k;
  s["iterations"] = cfg.iterations
                        ? json(*cfg.iterations)
                        : json(default_structure_iterations(candidates->count()));
  s["trials"] = cfg.trials;
  s["success_rate"] = success_rate;
  s["electrons_per_trial"] = static_cast<double>(electrons) / static_cast<double>(cfg.trials);
  if (cfg.classical_baseline) {
    s["classical_success_rate"] = static_cast<double>(cwins) / static_cast<double>(cfg.trials);
    s["classical_electrons_per_trial"] =
        static_cast<double>(celectrons) / static_cast<double>(cfg.trials);
  }
  return s;
}

ordered_json run_multipass(const ExperimentConfig& cfg, FileList& files) {
  PhaseMap map = cfg.phase_map_path ? PhaseMap::load_csv(cfg.resolve(*cfg.phase_map_path))
                                    : PhaseMap::zeros(cfg.d);
  if (!cfg.phase_map_path) map.at(0, 0) = 0.01;
  CounterRng rng(cfg.seed);
  const MultipassResult res = multipass_imaging(map, cfg.passes, cfg.noise, rng);

  std::ostringstream csv;
  const std::size_t d = map.d();
  csv << "# phase-contrast signal per pixel, row-major\n";
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q < d; ++q)
      csv << fmt17(res.signal[p * d + q]) << (q + 1 == d ? "\n" : ",");
  files.emplace_back("signal.csv", csv.str());

  double max_signal = 0.0;
  for (double v : res.signal)
    if (std::fabs(v) > std::fabs(max_signal)) max_signal = v;
  ordered_json s;
  s["scenario"] = cfg.scenario;
  s["d"] = d;
  s["passes"] = cfg.passes;
  s["max_signal"] = max_signal;
  s["linearization_warning"] = res.linearization_warning;
  s["electrons"] = res.ledger.electrons;
  return s;
}

ordered_json run_amplitude_error(const ExperimentConfig& cfg, FileList& files) {
  if (!cfg.cross_sections_path)
    throw std::invalid_argument(
        "amplitude-error requires cross_sections: path to a CSV with header"
        " '# total_nm2: H=... C=... N=... O=... S=...' and columns"
        " theta_rad,dcs_H,dcs_C,dcs_N,dcs_O,dcs_S");
  const CrossSectionTable table =
      CrossSectionTable::load_csv(cfg.resolve(*cfg.cross_sections_path));

  Composition comp;
  double p_S = 0.0;
  double rate = 0.0;
  if (cfg.composition) {
    comp = *cfg.composition;
    rate = elastic_rate(table, comp);
    p_S = scattering_probability(rate, comp.thickness_nm);
  }
  if (cfg.p_S) p_S = *cfg.p_S;
  if (!cfg.composition && !cfg.p_S)
    throw std::invalid_argument("amplitude-error: need composition or p_S");
  if (!(p_S >= 0.0 && p_S < 1.0))
    throw std::invalid_argument("amplitude-error: p_S must be in [0, 1)");
  if (!cfg.composition) {
    comp.density = {1.0, 1.0, 1.0, 1.0, 1.0}; // shape-only weights
    comp.thickness_nm = 1.0;
  }

  const double sigma = cfg.sigma_mrad * 1e-3;
  const ScatterProfile prof = scatter_profile(table, comp, p_S);
  const AmplitudeErrorResult res = amplitude_error(prof, sigma, cfg.phi_steps);

  std::ostringstream csv;
  csv << "theta_rad,E,VarB,T,S\n";
  for (std::size_t i = 0; i < res.theta.size(); ++i)
    csv << fmt17(res.theta[i]) << "," << fmt17(res.E[i]) << "," << fmt17(res.varB[i]) << ","
        << fmt17(res.T[i]) << "," << fmt17(res.S[i]) << "\n";
  files.emplace_back("e_curve.csv", csv.str());

  ordered_json s;
  s["scenario"] = cfg.scenario;
  s["p_S"] = p_S;
  if (rate > 0.0) {
    s["rate_per_nm"] = rate;
    s["thickness_nm"] = comp.thickness_nm;
  }
  s["sigma_mrad"] = cfg.sigma_mrad;
  s["phi_steps"] = cfg.phi_steps;
  s["e_A"] = res.e_A;
  s["norm_residual"] = res.norm_residual;
  s["norm_residual_rel"] = res.norm_residual / p_S;
  return s;
}

ordered_json run_feasibility(const ExperimentConfig& cfg, FileList&) {
  CircuitParams params{cfg.circuit_L, cfg.circuit_C, cfg.circuit_l};
  const BackActionReport rep =
      back_action_report(params, cfg.phi_over_phi0, cfg.momentum, cfg.width);
  ordered_json s;
  s["scenario"] = cfg.scenario;
  s["omega_rad_per_s"] = rep.omega;
  s["impedance_ohm"] = rep.impedance;
  s["deflection"] = {{"ratio", rep.deflection.ratio},
                     {"satisfied", rep.deflection.satisfied},
                     {"dp_over_p", rep.deflection.dp_over_p},
                     {"diffraction_spread", rep.deflection.diffraction_spread}};
  s["delta_q"] = {{"exact_e", rep.charge.exact_e}, {"rough_e", rep.charge.rough_e}};
  s["delta_phi"] = {{"delta_phi_over_phi0", rep.flux.delta_phi_over_phi0},
                    {"applied_over_phi0", rep.flux.applied_over_phi0}};
  s["p_ex_magnetic"] = {{"raw", rep.p_ex_magnetic.raw},
                        {"reduced", rep.p_ex_magnetic.reduced},
                        {"clamped", rep.p_ex_magnetic.clamped}};
  s["p_ex_electric"] = {{"raw", rep.p_ex_electric.raw},
                        {"reduced", rep.p_ex_electric.reduced},
                        {"clamped", rep.p_ex_electric.clamped}};
  return s;
}

} // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j,
                                             const std::filesystem::path& config_dir) {
  ExperimentConfig c;
  c.config_dir = config_dir;
  if (!j.contains("scenario")) throw std::invalid_argument("config: missing scenario");
  c.scenario = j.at("scenario").get<std::string>();
  if (!j.contains("seed")) throw std::invalid_argument("config: seed is mandatory");
  c.seed = j.at("seed").get<std::uint64_t>();

  if (j.contains("d")) c.d = j.at("d").get<std::size_t>();
  if (j.contains("N")) c.n_candidates = j.at("N").get<std::size_t>();
  if (j.contains("k")) c.k = j.at("k").get<std::size_t>();
  if (j.contains("iterations")) c.iterations = j.at("iterations").get<std::size_t>();
  if (j.contains("trials")) c.trials = j.at("trials").get<std::size_t>();
  if (j.contains("passes")) c.passes = j.at("passes").get<std::size_t>();
  if (j.contains("budget")) c.budget = j.at("budget").get<std::size_t>();
  if (j.contains("classical_baseline"))
    c.classical_baseline = j.at("classical_baseline").get<bool>();

  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    if (n.contains("amp_error")) c.noise.amp_error = n.at("amp_error").get<double>();
    if (n.contains("inelastic_prob"))
      c.noise.inelastic_prob = n.at("inelastic_prob").get<double>();
    if (n.contains("collapse_radius"))
      c.noise.collapse_radius = n.at("collapse_radius").get<double>();
    if (n.contains("collapse_shape")) {
      const std::string s = n.at("collapse_shape").get<std::string>();
      if (s == "square")
        c.noise.collapse_shape = CollapseShape::Square;
      else if (s == "disc")
        c.noise.collapse_shape = CollapseShape::Disc;
      else
        throw std::invalid_argument("config: collapse_shape must be square or disc");
    }
  }

  if (j.contains("phase_map")) c.phase_map_path = j.at("phase_map").get<std::string>();
  if (j.contains("candidates_dir"))
    c.candidates_dir = j.at("candidates_dir").get<std::string>();
  if (j.contains("correct_alpha")) c.correct_alpha = j.at("correct_alpha").get<std::size_t>();
  if (j.contains("cross_sections"))
    c.cross_sections_path = j.at("cross_sections").get<std::string>();
  if (j.contains("composition")) {
    const auto& cj = j.at("composition");
    Composition comp;
    for (std::size_t e = 0; e < kNumElements; ++e) {
      const std::string key = std::string("n_") + kElementNames[e];
      if (cj.contains(key)) comp.density[e] = cj.at(key).get<double>();
    }
    comp.thickness_nm = cj.at("thickness_nm").get<double>();
    c.composition = comp;
  }
  if (j.contains("p_S")) c.p_S = j.at("p_S").get<double>();
  if (j.contains("sigma_mrad")) c.sigma_mrad = j.at("sigma_mrad").get<double>();
  if (j.contains("phi_steps")) c.phi_steps = j.at("phi_steps").get<std::size_t>();

  if (j.contains("circuit")) {
    const auto& cj = j.at("circuit");
    c.circuit_L = cj.at("L").get<double>();
    c.circuit_C = cj.at("C").get<double>();
    c.circuit_l = cj.at("l").get<double>();
    if (cj.contains("phi_over_phi0")) c.phi_over_phi0 = cj.at("phi_over_phi0").get<double>();
    if (cj.contains("p")) c.momentum = cj.at("p").get<double>();
    if (cj.contains("w")) c.width = cj.at("w").get<double>();
  }

  if (j.contains("outdir")) c.outdir = j.at("outdir").get<std::string>();
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("config: cannot open " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument("config: malformed JSON in " + file.string() + ": " +
                                e.what());
  }
  return from_json(j, file.has_parent_path() ? file.parent_path() : ".");
}

void ExperimentConfig::validate() const {
  static const char* known[] = {"oracle-verify", "grover-pixel",    "structure-search",
                                "multipass",     "amplitude-error", "feasibility"};
  bool ok = false;
  for (const char* s : known) ok = ok || scenario == s;
  if (!ok) throw std::invalid_argument("config: unknown scenario '" + scenario + "'");
  noise.validate();
  if (trials < 1) throw std::invalid_argument("config: trials < 1");
  if (k < 1) throw std::invalid_argument("config: k < 1");
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("config: d must be even, >= 2");
  if (scenario == "feasibility" &&
      !(circuit_L > 0.0 && circuit_C > 0.0 && circuit_l > 0.0 && momentum > 0.0 &&
        width > 0.0))
    throw std::invalid_argument("config: feasibility needs circuit {L, C, l, p, w}");
}

std::filesystem::path ExperimentConfig::resolve(const std::filesystem::path& p) const {
  return p.is_absolute() ? p : config_dir / p;
}

nlohmann::ordered_json ExperimentConfig::echo() const {
  ordered_json e;
  e["scenario"] = scenario;
  e["seed"] = seed;
  e["d"] = d;
  e["N"] = n_candidates;
  e["k"] = k;
  if (iterations) e["iterations"] = *iterations;
  e["trials"] = trials;
  e["passes"] = passes;
  e["budget"] = budget;
  e["noise"] = {{"amp_error", noise.amp_error},
                {"inelastic_prob", noise.inelastic_prob},
                {"collapse_radius", noise.collapse_radius},
                {"collapse_shape",
                 noise.collapse_shape == CollapseShape::Square ? "square" : "disc"}};
  if (phase_map_path) e["phase_map"] = phase_map_path->string();
  if (candidates_dir) e["candidates_dir"] = candidates_dir->string();
  if (cross_sections_path) e["cross_sections"] = cross_sections_path->string();
  if (p_S) e["p_S"] = *p_S;
  e["sigma_mrad"] = sigma_mrad;
  e["phi_steps"] = phi_steps;
  return e;
}

RunManifest run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  FileList files;
  ordered_json summary;
  if (cfg.scenario == "oracle-verify")
    summary = run_oracle_verify(cfg, files);
  else if (cfg.scenario == "grover-pixel")
    summary = run_grover_pixel(cfg, files);
  else if (cfg.scenario == "structure-search")
    summary = run_structure_search(cfg, files);
  else if (cfg.scenario == "multipass")
    summary = run_multipass(cfg, files);
  else if (cfg.scenario == "amplitude-error")
    summary = run_amplitude_error(cfg, files);
  else
    summary = run_feasibility(cfg, files);

  RunManifest m;
  m.dir = cfg.outdir / (cfg.scenario + "-" + std::to_string(cfg.seed));
  std::filesystem::create_directories(m.dir);
  write_text(m.dir / "summary.json", summary.dump(2) + "\n");

  m.manifest["tool"] = "qem";
  m.manifest["version"] = kVersion;
  m.manifest["scenario"] = cfg.scenario;
  m.manifest["seed"] = cfg.seed;
  m.manifest["config"] = cfg.echo();
  std::vector<std::string> names = {"summary.json"};
  for (const auto& [name, text] : files) {
    write_text(m.dir / name, text);
    names.push_back(name);
  }
  m.manifest["outputs"] = names;
  const auto t1 = std::chrono::steady_clock::now();
  m.manifest["wall_seconds"] = std::chrono::duration<double>(t1 - t0).count();
  write_text(m.dir / "manifest.json", m.manifest.dump(2) + "\n");
  m.summary = summary;
  return m;
}

namespace {

void collect_drifts(const std::string& prefix, const json& a, const json& b,
                    DriftReport& report) {
  if (a.is_object() && b.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it)
      if (b.contains(it.key()))
        collect_drifts(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value(),
                       b.at(it.key()), report);
    return;
  }
  if (a.is_number() && b.is_number()) {
    const double va = a.get<double>();
    const double vb = b.get<double>();
    const double denom = std::max({std::fabs(va), std::fabs(vb), 1e-300});
    const double drift = (va == vb) ? 0.0 : std::fabs(va - vb) / denom;
    report.metrics.push_back({prefix, va, vb, drift});
    report.max_drift = std::max(report.max_drift, drift);
  }
}

json load_manifest_with_dir(const std::filesystem::path& p) {
  std::filesystem::path file = p;
  if (std::filesystem::is_directory(file)) file /= "manifest.json";
  std::ifstream in(file);
  if (!in) throw std::runtime_error("compare: cannot open " + file.string());
  json j;
  in >> j;
  j["__dir"] = file.parent_path().string();
  return j;
}

} // namespace

DriftReport compare_manifests(const std::filesystem::path& baseline,
                              const std::filesystem::path& candidate) {
  const json ma = load_manifest_with_dir(baseline);
  const json mb = load_manifest_with_dir(candidate);
  if (ma.at("scenario") != mb.at("scenario"))
    throw std::invalid_argument("compare: scenario mismatch");
  for (const char* key : {"d", "N", "k", "iterations", "trials", "passes"}) {
    const auto& ca = ma.at("config");
    const auto& cb = mb.at("config");
    const bool ha = ca.contains(key), hb = cb.contains(key);
    if (ha != hb || (ha && ca.at(key) != cb.at(key)))
      throw std::invalid_argument(std::string("compare: structural mismatch on '") + key +
                                  "'");
  }
  std::ifstream sa(std::filesystem::path(ma.at("__dir").get<std::string>()) /
                   "summary.json");
  std::ifstream sb(std::filesystem::path(mb.at("__dir").get<std::string>()) /
                   "summary.json");
  if (!sa || !sb) throw std::runtime_error("compare: missing summary.json");
  json ja, jb;
  sa >> ja;
  sb >> jb;
  DriftReport report;
  collect_drifts("", ja, jb, report);
  return report;
}

} // namespace qem
