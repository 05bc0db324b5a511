/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#ifndef QEM_ORACLE_HPP
#define QEM_ORACLE_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>

#include "qem/dose.hpp"
#include "qem/noise.hpp"
#include "qem/phase_map.hpp"
#include "qem/statevector.hpp"

namespace qem {

/// One ideal specimen query: |p,q> -> e^{i theta_{p,q}} |p,q> on the (x, y)
/// qudit pair. The ledger receives the pre-call real-space marginal and one
/// electron.
void oracle_call_ideal(StateVector& state, std::size_t x_sub, std::size_t y_sub,
                       const PhaseMap& map, DoseLedger& ledger);

struct PhysicalCallOptions {
  /// Impose the far-field detection outcome (k, l) instead of sampling it.
  std::optional<std::array<std::size_t, 2>> forced_detection;
};

struct PhysicalCallRecord {
  std::size_t k = 0;      ///< detected far-field index along x
  std::size_t l = 0;      ///< detected far-field index along y
  bool inelastic = false; ///< pass ended in an inelastic event
};

/// One physically simulated specimen query: attach an electron register in
/// |0,0>, copy-entangle it with (x, y) through the deflector, imprint the
/// specimen phases, evolve to the far field (2-D DFT), detect (k, l), and
/// undo the residual phase e^{2 pi i (kp + lq) / d} on the qudits. Noise-free
/// this equals oracle_call_ideal up to roundoff.
///
/// With amp_error > 0 the diffraction-plane amplitudes are perturbed before
/// the far-field transform; with probability inelastic_prob the correction
/// step is replaced by a partial real-space collapse.
PhysicalCallRecord oracle_call_physical(StateVector& state, std::size_t x_sub,
                                        std::size_t y_sub, const PhaseMap& map,
                                        const NoiseConfig& noise, CounterRng& rng,
                                        DoseLedger& ledger,
                                        const PhysicalCallOptions& options = {});

/// Inelastic event: samples a location from the (x, y) marginal and keeps
/// only amplitudes within `radius` pixels of it (Chebyshev ball for
/// CollapseShape::Square, Euclidean for Disc; no wraparound).
void apply_inelastic_event(StateVector& state, std::size_t x_sub, std::size_t y_sub,
                           double radius, CollapseShape shape, CounterRng& rng);

/// Deterministic-center variant of the collapse.
void collapse_to_neighborhood(StateVector& state, std::size_t x_sub, std::size_t y_sub,
                              double radius, CollapseShape shape, std::size_t p0,
                              std::size_t q0);

/// Multiplies every amplitude by (1 + eta), eta i.i.d. gaussian with standard
/// deviation sigma per joint basis index of `subs`, then renormalizes.
void apply_amplitude_perturbation(StateVector& state, std::span<const std::size_t> subs,
                                  double sigma, CounterRng& rng);

} // namespace qem

#endif
