/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#ifndef QEM_ALGORITHMS_HPP
#define QEM_ALGORITHMS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qem/candidates.hpp"
#include "qem/dose.hpp"
#include "qem/noise.hpp"
#include "qem/oracle.hpp"
#include "qem/phase_map.hpp"
#include "qem/statevector.hpp"

namespace qem {

struct SearchResult {
  std::optional<std::size_t> reported; ///< candidate index or flat pixel index
  bool success = false;
  std::uint64_t electrons_used = 0;
  DoseLedger ledger;
  std::vector<std::size_t> beta_outcomes;

  explicit SearchResult(std::size_t d) : ledger(d) {}
};

/// Default iteration counts. Pixel search runs the full ~d-query sweep the
/// dose argument is about; structure search stops at the amplitude maximum
/// (the ceiling overshoots badly for small N).
std::size_t default_pixel_iterations(std::size_t d);
std::size_t default_structure_iterations(std::size_t n_candidates);

// ---------------------------------------------------------------------------
// Multipass phase-contrast imaging

struct MultipassResult {
  std::vector<double> signal; ///< per pixel, ~ m * (theta - mean theta)
  bool linearization_warning = false;
  DoseLedger ledger;
};

/// Repeated oracle calls on a uniform illumination followed by the
/// Fourier / i-phase-plate / inverse-Fourier readout.
MultipassResult multipass_imaging(const PhaseMap& map, std::size_t passes,
                                  const NoiseConfig& noise, CounterRng& rng);

// ---------------------------------------------------------------------------
// Grover single-pixel search

/// Requires exactly one marked pixel with phase pi/k, the rest zero. Each
/// Grover iteration makes k oracle calls (accumulating the pi phase) followed
/// by diffusion over the d^2 pixel register; afterwards (x, y) is measured.
SearchResult grover_pixel_search(const PhaseMap& map, std::size_t k, std::size_t iterations,
                                 const NoiseConfig& noise, CounterRng& rng);

/// Exact marked-pixel probability after `iterations` noise-free iterations
/// (no sampling); equals sin^2((2s+1) asin(1/d)) for k = 1.
double grover_pixel_marked_probability(std::size_t d, std::size_t k, std::size_t iterations);

/// Marked-pixel dose accumulated over a noise-free run of `iterations`
/// Grover iterations (k oracle calls each).
double grover_pixel_marked_dose(std::size_t d, std::size_t k, std::size_t iterations);

/// Classical baseline: interrogate every pixel against an off-specimen
/// reference arm with `budget` electrons per pixel (each deposits probability
/// 1/2 at the pixel). The default budget 2 deposits exactly 1 per pixel.
SearchResult classical_pixel_scan(const PhaseMap& map, CounterRng& rng,
                                  std::size_t budget = 2);

// ---------------------------------------------------------------------------
// Grover structure-hypothesis search

struct HypothesisRoundResult {
  StateVector alpha_state;
  std::size_t beta = 0;
  bool weak_phase_warning = false;
};

/// One electron pass of the hypothesis test: entangle the candidate register
/// with each candidate's pixel set, query the specimen once, relabel
/// beta = f_alpha(p, q), Fourier / i-plate / inverse Fourier over beta, and
/// measure beta. The returned candidate register carries phases ~exp(i
/// Theta_alpha) with Theta_alpha the mean specimen phase over P_alpha.
HypothesisRoundResult hypothesis_round(const StateVector& alpha_state,
                                       const PhaseMap& true_map,
                                       const CandidateSet& candidates,
                                       const NoiseConfig& noise, CounterRng& rng,
                                       DoseLedger& ledger);

/// Grover search over candidate structures: each subroutine call is k
/// hypothesis rounds (total phase k * Theta_alpha ~ pi on the correct
/// candidate) followed by diffusion over the candidate register.
SearchResult grover_structure_search(const CandidateSet& candidates, const PhaseMap& true_map,
                                     std::size_t correct_alpha, const NoiseConfig& noise,
                                     CounterRng& rng,
                                     std::optional<std::size_t> iterations = std::nullopt);

/// Classical baseline: test all N candidates sequentially, k single-pass
/// interferometer electrons per candidate, quadrature statistic, argmax.
/// Costs exactly N * k queries.
SearchResult classical_structure_scan(const CandidateSet& candidates,
                                      const PhaseMap& true_map, std::size_t correct_alpha,
                                      CounterRng& rng);

} // namespace qem

#endif
