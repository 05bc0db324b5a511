/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#ifndef QEM_EXPERIMENT_HPP
#define QEM_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qem/diffraction.hpp"
#include "qem/noise.hpp"

namespace qem {

inline constexpr const char* kVersion = "0.1.0";

/// One experiment = one config file. Scenarios: oracle-verify, grover-pixel,
/// structure-search, multipass, amplitude-error, feasibility. The seed is
/// mandatory; per-trial streams are derived as seed XOR trial index, setup
/// randomness (synthetic candidates) from splitmix64(seed).
struct ExperimentConfig {
  std::string scenario;
  std::uint64_t seed = 0;

  std::size_t d = 4;
  std::size_t n_candidates = 8;
  std::size_t k = 1;
  std::optional<std::size_t> iterations;
  std::size_t trials = 1;
  std::size_t passes = 1;
  std::size_t budget = 2; ///< classical per-pixel electrons
  bool classical_baseline = false;

  NoiseConfig noise;

  std::optional<std::filesystem::path> phase_map_path;
  std::optional<std::filesystem::path> candidates_dir;
  std::optional<std::size_t> correct_alpha;
  std::optional<std::filesystem::path> cross_sections_path;
  std::optional<Composition> composition;
  std::optional<double> p_S;
  double sigma_mrad = 50.0;
  std::size_t phi_steps = 100;

  // feasibility inputs
  double circuit_L = 0.0, circuit_C = 0.0, circuit_l = 0.0;
  double phi_over_phi0 = 1.0;
  double momentum = 0.0, width = 0.0;

  std::filesystem::path outdir = "out";
  std::filesystem::path config_dir = ".";

  static ExperimentConfig from_json(const nlohmann::json& j,
                                    const std::filesystem::path& config_dir = ".");
  static ExperimentConfig from_json_file(const std::filesystem::path& file);
  void validate() const;
  nlohmann::ordered_json echo() const;
  std::filesystem::path resolve(const std::filesystem::path& p) const;
};

struct RunManifest {
  std::filesystem::path dir;
  nlohmann::ordered_json manifest;
  nlohmann::ordered_json summary;
};

/// Executes the scenario and persists summary.json, scenario tables and
/// manifest.json under <outdir>/<scenario>-<seed>/. Numeric outputs are
/// bit-reproducible for a fixed (config, seed); trial parallelism (capped by
/// QEM_THREADS) does not change them.
RunManifest run_experiment(const ExperimentConfig& config);

struct MetricDrift {
  std::string metric;
  double baseline = 0.0;
  double candidate = 0.0;
  double rel_drift = 0.0;
};

struct DriftReport {
  std::vector<MetricDrift> metrics;
  double max_drift = 0.0;
};

/// Per-metric relative differences between two run manifests of the same
/// scenario; structural parameter mismatches (different scenario, d, N, ...)
/// are rejected.
DriftReport compare_manifests(const std::filesystem::path& baseline,
                              const std::filesystem::path& candidate);

} // namespace qem

#endif
