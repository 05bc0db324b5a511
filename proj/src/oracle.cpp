/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#include "qem/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qem {

namespace {

void check_pair(const StateVector& state, std::size_t x_sub, std::size_t y_sub,
                const PhaseMap& map) {
  const auto& layout = state.layout();
  if (x_sub >= layout.num_subregisters() || y_sub >= layout.num_subregisters() ||
      x_sub == y_sub)
    throw std::invalid_argument("oracle: bad (x, y) subregister pair");
  if (layout.dim(x_sub) != map.d() || layout.dim(y_sub) != map.d())
    throw std::invalid_argument("oracle: (x, y) dimensions do not match the phase map");
}

std::vector<std::vector<std::size_t>> modular_add_tables(std::size_t d) {
  std::vector<std::vector<std::size_t>> perms(d, std::vector<std::size_t>(d));
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t j = 0; j < d; ++j) perms[p][j] = (j + p) % d;
  return perms;
}

} // namespace

void oracle_call_ideal(StateVector& state, std::size_t x_sub, std::size_t y_sub,
                       const PhaseMap& map, DoseLedger& ledger) {
  check_pair(state, x_sub, y_sub, map);
  const std::size_t subs[] = {x_sub, y_sub};
  ledger.record_pass(state.marginal(subs));
  state.apply_diagonal_phase(subs, map.values());
}

PhysicalCallRecord oracle_call_physical(StateVector& state, std::size_t x_sub,
                                        std::size_t y_sub, const PhaseMap& map,
                                        const NoiseConfig& noise, CounterRng& rng,
                                        DoseLedger& ledger,
                                        const PhysicalCallOptions& options) {
  check_pair(state, x_sub, y_sub, map);
  noise.validate();
  const std::size_t d = map.d();
  const std::size_t subs[] = {x_sub, y_sub};
  ledger.record_pass(state.marginal(subs));

  // Deflector: fresh electron in |0,0>, then |0> (x) |p,q> => |p,q> (x) |p,q>.
  const std::size_t ex = state.append_subregister(d, "ex", 0);
  const std::size_t ey = state.append_subregister(d, "ey", 0);
  const auto add = modular_add_tables(d);
  state.apply_controlled_permutation(x_sub, ex, add);
  state.apply_controlled_permutation(y_sub, ey, add);

  // Specimen transit imprints the phases on the electron.
  const std::size_t esubs[] = {ex, ey};
  state.apply_diagonal_phase(esubs, map.values());

  if (noise.amp_error > 0.0)
    apply_amplitude_perturbation(state, esubs, noise.amp_error, rng);

  // Far field: the wave from point (p,q) becomes the plane wave with the
  // discretized kernel e^{2 pi i (kp + lq) / d}.
  state.apply_fourier(ex, FourierDirection::Forward);
  state.apply_fourier(ey, FourierDirection::Forward);

  MeasurementRecord mk, ml;
  if (options.forced_detection) {
    mk = state.measure_forced(ex, (*options.forced_detection)[0]);
    ml = state.measure_forced(ey, (*options.forced_detection)[1]);
  } else {
    mk = state.measure(ex, rng);
    ml = state.measure(ey, rng);
  }

  PhysicalCallRecord rec;
  rec.k = mk.outcome;
  rec.l = ml.outcome;
  rec.inelastic = noise.inelastic_prob > 0.0 && rng.uniform() < noise.inelastic_prob;

  if (rec.inelastic) {
    apply_inelastic_event(state, x_sub, y_sub, noise.collapse_radius, noise.collapse_shape,
                          rng);
  } else {
    // Known (k, l): shift off the residual far-field phase on the qudits.
    std::vector<double> corr(d * d);
    const double unit = -2.0 * std::numbers::pi / static_cast<double>(d);
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = 0; q < d; ++q)
        corr[p * d + q] =
            unit * static_cast<double>(rec.k * p % d + rec.l * q % d);
    state.apply_diagonal_phase(subs, corr);
  }

  state.drop_subregister(ey);
  state.drop_subregister(ex);
  return rec;
}

void collapse_to_neighborhood(StateVector& state, std::size_t x_sub, std::size_t y_sub,
                              double radius, CollapseShape shape, std::size_t p0,
                              std::size_t q0) {
  const auto& layout = state.layout();
  const std::size_t total = state.size();
  std::vector<cplx> amps(state.amps().begin(), state.amps().end());
  for (std::size_t idx = 0; idx < total; ++idx) {
    const double dp = static_cast<double>(layout.digit(idx, x_sub)) - static_cast<double>(p0);
    const double dq = static_cast<double>(layout.digit(idx, y_sub)) - static_cast<double>(q0);
    const bool keep = (shape == CollapseShape::Square)
                          ? std::max(std::fabs(dp), std::fabs(dq)) <= radius
                          : dp * dp + dq * dq <= radius * radius;
    if (!keep) amps[idx] = cplx{0.0, 0.0};
  }
  double surviving = 0.0;
  for (const cplx& a : amps) surviving += std::norm(a);
  if (std::sqrt(surviving) < 1e-12)
    throw std::logic_error("inelastic collapse: surviving norm is zero");
  StateVector collapsed(layout, std::move(amps), /*renormalize=*/true);
  state = std::move(collapsed);
}

void apply_inelastic_event(StateVector& state, std::size_t x_sub, std::size_t y_sub,
                           double radius, CollapseShape shape, CounterRng& rng) {
  if (radius < 0.0) throw std::invalid_argument("inelastic: radius < 0");
  const std::size_t subs[] = {x_sub, y_sub};
  const auto marg = state.marginal(subs);
  const std::size_t d = state.layout().dim(x_sub);
  const double u = rng.uniform();
  double cum = 0.0;
  std::size_t loc = marg.size() - 1;
  for (std::size_t j = 0; j < marg.size(); ++j) {
    cum += marg[j];
    if (u < cum) {
      loc = j;
      break;
    }
  }
  collapse_to_neighborhood(state, x_sub, y_sub, radius, shape, loc / d, loc % d);
}

void apply_amplitude_perturbation(StateVector& state, std::span<const std::size_t> subs,
                                  double sigma, CounterRng& rng) {
  if (sigma < 0.0) throw std::invalid_argument("perturbation: sigma < 0");
  if (sigma == 0.0) return;
  const auto& layout = state.layout();
  std::size_t joint = 1;
  for (std::size_t s : subs) joint *= layout.dim(s);
  std::vector<double> eta(joint);
  for (double& e : eta) e = sigma * rng.gaussian();

  std::vector<cplx> amps(state.amps().begin(), state.amps().end());
  for (std::size_t idx = 0; idx < amps.size(); ++idx) {
    std::size_t j = 0;
    for (std::size_t s : subs) j = j * layout.dim(s) + layout.digit(idx, s);
    amps[idx] *= (1.0 + eta[j]);
  }
  state = StateVector(layout, std::move(amps), /*renormalize=*/true);
}

} // namespace qem
