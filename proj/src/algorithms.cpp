/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#include "qem/algorithms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qem {

namespace {

constexpr double kPi = std::numbers::pi;

/// i-phase-plate table: multiply every nonzero frequency by i.
std::vector<double> phase_plate_table(std::size_t n) {
  std::vector<double> phases(n, kPi / 2.0);
  phases[0] = 0.0;
  return phases;
}

std::size_t find_marked_pixel(const PhaseMap& map, std::size_t k) {
  const double target = kPi / static_cast<double>(k);
  std::size_t marked = map.pixel_count();
  for (std::size_t i = 0; i < map.pixel_count(); ++i) {
    const double v = map.values()[i];
    if (v == 0.0) continue;
    if (marked != map.pixel_count() || std::fabs(v - target) > 1e-9)
      throw std::invalid_argument(
          "pixel search: map must have exactly one marked pixel of phase pi/k");
    marked = i;
  }
  if (marked == map.pixel_count())
    throw std::invalid_argument("pixel search: no marked pixel");
  return marked;
}

void dispatch_oracle(StateVector& state, std::size_t x, std::size_t y, const PhaseMap& map,
                     const NoiseConfig& noise, CounterRng& rng, DoseLedger& ledger) {
  if (noise.enabled())
    oracle_call_physical(state, x, y, map, noise, rng, ledger);
  else
    oracle_call_ideal(state, x, y, map, ledger);
}

} // namespace

std::size_t default_pixel_iterations(std::size_t d) {
  return static_cast<std::size_t>(std::ceil(kPi / 4.0 * static_cast<double>(d)));
}

std::size_t default_structure_iterations(std::size_t n_candidates) {
  const auto s = static_cast<std::size_t>(
      std::floor(kPi / 4.0 * std::sqrt(static_cast<double>(n_candidates))));
  return std::max<std::size_t>(1, s);
}

// ---------------------------------------------------------------------------

MultipassResult multipass_imaging(const PhaseMap& map, std::size_t passes,
                                  const NoiseConfig& noise, CounterRng& rng) {
  if (passes < 1) throw std::invalid_argument("multipass: need at least one pass");
  const std::size_t d = map.d();
  MultipassResult res{std::vector<double>(d * d, 0.0),
                      static_cast<double>(passes) * map.max_abs() > 0.3, DoseLedger(d)};

  RegisterLayout layout({d, d}, {"x", "y"});
  StateVector state = StateVector::uniform(layout);
  for (std::size_t m = 0; m < passes; ++m)
    dispatch_oracle(state, 0, 1, map, noise, rng, res.ledger);

  // Phase-contrast readout: uniform component -> zero frequency, multiply i
  // on everything else, transform back.
  state.apply_fourier(0, FourierDirection::Inverse);
  state.apply_fourier(1, FourierDirection::Inverse);
  const std::size_t subs[] = {0, 1};
  const auto plate = phase_plate_table(d * d);
  state.apply_diagonal_phase(subs, plate);
  state.apply_fourier(0, FourierDirection::Forward);
  state.apply_fourier(1, FourierDirection::Forward);

  const auto prob = state.marginal(subs);
  const double n_pixels = static_cast<double>(d * d);
  for (std::size_t i = 0; i < prob.size(); ++i)
    res.signal[i] = 0.5 * (1.0 - n_pixels * prob[i]);
  return res;
}

// ---------------------------------------------------------------------------

SearchResult grover_pixel_search(const PhaseMap& map, std::size_t k, std::size_t iterations,
                                 const NoiseConfig& noise, CounterRng& rng) {
  const std::size_t d = map.d();
  const std::size_t marked = find_marked_pixel(map, k);
  SearchResult res(d);

  RegisterLayout layout({d, d}, {"x", "y"});
  StateVector state = StateVector::uniform(layout);
  const std::size_t subs[] = {0, 1};
  for (std::size_t s = 0; s < iterations; ++s) {
    for (std::size_t pass = 0; pass < k; ++pass)
      dispatch_oracle(state, 0, 1, map, noise, rng, res.ledger);
    state.apply_grover_diffusion(subs);
  }
  const auto mx = state.measure(0, rng);
  const auto my = state.measure(1, rng);
  res.reported = mx.outcome * d + my.outcome;
  res.success = (*res.reported == marked);
  res.electrons_used = res.ledger.electrons;
  return res;
}

double grover_pixel_marked_probability(std::size_t d, std::size_t k, std::size_t iterations) {
  std::vector<double> theta(d * d, 0.0);
  theta[0] = kPi / static_cast<double>(k);
  const PhaseMap map(d, std::move(theta));
  DoseLedger ledger(d);

  RegisterLayout layout({d, d}, {"x", "y"});
  StateVector state = StateVector::uniform(layout);
  const std::size_t subs[] = {0, 1};
  for (std::size_t s = 0; s < iterations; ++s) {
    for (std::size_t pass = 0; pass < k; ++pass) oracle_call_ideal(state, 0, 1, map, ledger);
    state.apply_grover_diffusion(subs);
  }
  return state.marginal(subs)[0];
}

double grover_pixel_marked_dose(std::size_t d, std::size_t k, std::size_t iterations) {
  std::vector<double> theta(d * d, 0.0);
  theta[0] = kPi / static_cast<double>(k);
  const PhaseMap map(d, std::move(theta));
  DoseLedger ledger(d);

  RegisterLayout layout({d, d}, {"x", "y"});
  StateVector state = StateVector::uniform(layout);
  const std::size_t subs[] = {0, 1};
  for (std::size_t s = 0; s < iterations; ++s) {
    for (std::size_t pass = 0; pass < k; ++pass) oracle_call_ideal(state, 0, 1, map, ledger);
    state.apply_grover_diffusion(subs);
  }
  return ledger.per_pixel[0];
}

SearchResult classical_pixel_scan(const PhaseMap& map, CounterRng& rng, std::size_t budget) {
  if (budget < 1) throw std::invalid_argument("classical scan: budget < 1");
  const std::size_t d = map.d();
  SearchResult res(d);

  std::size_t best_pixel = 0;
  std::size_t best_hits = 0;
  std::vector<double> marginal(d * d, 0.0);
  for (std::size_t pix = 0; pix < d * d; ++pix) {
    std::size_t hits = 0;
    for (std::size_t b = 0; b < budget; ++b) {
      // One electron in (|reference> + |pixel>)/sqrt(2); only the pixel arm
      // transits the specimen.
      marginal[pix] = 0.5;
      res.ledger.record_pass(marginal);
      marginal[pix] = 0.0;
      const double p_dark = 0.5 * (1.0 - std::cos(map.values()[pix]));
      if (rng.uniform() < p_dark) ++hits;
    }
    if (hits > best_hits) {
      best_hits = hits;
      best_pixel = pix;
    }
  }
  if (best_hits > 0) res.reported = best_pixel;

  // Ground truth: the strongest-phase pixel, or none for a flat map.
  std::size_t truth = 0;
  double best_phase = 0.0;
  for (std::size_t i = 0; i < d * d; ++i) {
    const double v = std::fabs(map.values()[i]);
    if (v > best_phase) {
      best_phase = v;
      truth = i;
    }
  }
  res.success = (best_phase > 0.0) ? (res.reported && *res.reported == truth)
                                   : !res.reported.has_value();
  res.electrons_used = res.ledger.electrons;
  return res;
}

// ---------------------------------------------------------------------------

HypothesisRoundResult hypothesis_round(const StateVector& alpha_state,
                                       const PhaseMap& true_map,
                                       const CandidateSet& candidates,
                                       const NoiseConfig& noise, CounterRng& rng,
                                       DoseLedger& ledger) {
  const std::size_t n = candidates.count();
  const std::size_t d = candidates.d;
  const std::size_t half = d * d / 2;
  if (alpha_state.layout().num_subregisters() != 1 ||
      alpha_state.layout().dim(0) != n)
    throw std::invalid_argument("hypothesis round: state must be a bare candidate register");
  if (true_map.d() != d)
    throw std::invalid_argument("hypothesis round: map grid does not match candidates");
  const bool warn = true_map.max_abs() > 0.3;

  // Sum_alpha c_alpha |alpha> (x) Sum_{(p,q) in P_alpha} |p,q> / sqrt(half)
  RegisterLayout layout({n, d, d}, {"alpha", "x", "y"});
  std::vector<cplx> amps(layout.total_dim(), cplx{0.0, 0.0});
  const double w = 1.0 / std::sqrt(static_cast<double>(half));
  for (std::size_t a = 0; a < n; ++a) {
    const cplx c = alpha_state.amp(a);
    for (std::size_t flat : candidates.pixel_sets[a].pixels)
      amps[a * d * d + flat] = c * w;
  }
  StateVector state(layout, std::move(amps));

  dispatch_oracle(state, 1, 2, true_map, noise, rng, ledger);

  // beta = f_alpha(p, q): candidate-controlled relabeling on the merged pixel
  // register. Non-members go above d^2/2 in raster order; they carry no
  // amplitude and are cut off afterwards.
  state.merge_subregisters(1, 2, "beta");
  std::vector<std::vector<std::size_t>> perms(n, std::vector<std::size_t>(d * d));
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t overflow = half;
    const auto& f = candidates.bijections[a];
    for (std::size_t flat = 0; flat < d * d; ++flat)
      perms[a][flat] = (f.beta_of_pixel[flat] != Bijection::npos) ? f.beta_of_pixel[flat]
                                                                  : overflow++;
  }
  state.apply_controlled_permutation(0, 1, perms);
  state.truncate_subregister(1, half);

  state.apply_fourier(1, FourierDirection::Forward);
  const std::size_t beta_sub[] = {1};
  const auto plate = phase_plate_table(half);
  state.apply_diagonal_phase(beta_sub, plate);
  state.apply_fourier(1, FourierDirection::Inverse);

  const auto mb = state.measure(1, rng);
  state.drop_subregister(1);
  return HypothesisRoundResult{std::move(state), mb.outcome, warn};
}

SearchResult grover_structure_search(const CandidateSet& candidates, const PhaseMap& true_map,
                                     std::size_t correct_alpha, const NoiseConfig& noise,
                                     CounterRng& rng, std::optional<std::size_t> iterations) {
  const std::size_t n = candidates.count();
  const std::size_t rounds = iterations.value_or(default_structure_iterations(n));
  SearchResult res(candidates.d);

  StateVector state = StateVector::uniform(RegisterLayout({n}, {"alpha"}));
  const std::size_t alpha_sub[] = {0};
  for (std::size_t r = 0; r < rounds; ++r) {
    for (std::size_t pass = 0; pass < candidates.k; ++pass) {
      auto round = hypothesis_round(state, true_map, candidates, noise, rng, res.ledger);
      state = std::move(round.alpha_state);
      res.beta_outcomes.push_back(round.beta);
    }
    state.apply_grover_diffusion(alpha_sub);
  }
  const auto m = state.measure(0, rng);
  res.reported = m.outcome;
  res.success = (m.outcome == correct_alpha);
  res.electrons_used = res.ledger.electrons;
  return res;
}

SearchResult classical_structure_scan(const CandidateSet& candidates,
                                      const PhaseMap& true_map, std::size_t correct_alpha,
                                      CounterRng& rng) {
  const std::size_t d = candidates.d;
  const std::size_t half = d * d / 2;
  SearchResult res(d);

  double best_stat = -2.0;
  std::size_t best_alpha = 0;
  std::vector<double> marginal(d * d, 0.0);
  for (std::size_t a = 0; a < candidates.count(); ++a) {
    // Signal arm: uniform superposition over P_alpha against an off-specimen
    // reference; quadrature outcome statistics estimate Im <e^{i theta}>.
    cplx mean{0.0, 0.0};
    for (std::size_t flat : candidates.pixel_sets[a].pixels)
      mean += std::polar(1.0, true_map.values()[flat]);
    mean /= static_cast<double>(half);
    const double p_plus = 0.25 * std::norm(cplx{1.0, 0.0} - cplx{0.0, 1.0} * mean);
    const double p_minus = 0.25 * std::norm(cplx{1.0, 0.0} + cplx{0.0, 1.0} * mean);

    long hits = 0;
    const double arm_dose = 0.5 / static_cast<double>(half);
    for (std::size_t e = 0; e < candidates.k; ++e) {
      for (std::size_t flat : candidates.pixel_sets[a].pixels) marginal[flat] = arm_dose;
      res.ledger.record_pass(marginal);
      for (std::size_t flat : candidates.pixel_sets[a].pixels) marginal[flat] = 0.0;
      const double u = rng.uniform();
      if (u < p_plus)
        ++hits;
      else if (u < p_plus + p_minus)
        --hits;
    }
    const double stat = static_cast<double>(hits) / static_cast<double>(candidates.k);
    if (stat > best_stat) {
      best_stat = stat;
      best_alpha = a;
    }
  }
  res.reported = best_alpha;
  res.success = (best_alpha == correct_alpha);
  res.electrons_used = res.ledger.electrons;
  return res;
}

} // namespace qem
