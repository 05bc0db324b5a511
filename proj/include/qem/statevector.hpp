/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#ifndef QEM_STATEVECTOR_HPP
#define QEM_STATEVECTOR_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qem/layout.hpp"
#include "qem/rng.hpp"

namespace qem {

using cplx = std::complex<double>;

enum class FourierDirection { Forward, Inverse };

struct MeasurementRecord {
  std::size_t subregister = 0;
  std::size_t outcome = 0;
  double probability = 0.0;
};

/// Dense complex state vector over a factored register layout.
///
/// States are kept normalized (Euclidean norm 1) after every operation; state
/// equality is physical equality up to a global unit phase, see
/// distance_up_to_phase(). All gate kernels are deterministic; the only
/// randomness enters through measure().
class StateVector {
public:
  StateVector(RegisterLayout layout, std::vector<cplx> amps, bool renormalize = false);

  /// |i0, i1, ...> with one basis index per subregister.
  static StateVector basis_state(RegisterLayout layout, std::span<const std::size_t> indices);
  /// Uniform superposition over the whole register.
  static StateVector uniform(RegisterLayout layout);

  const RegisterLayout& layout() const { return layout_; }
  std::span<const cplx> amps() const { return amps_; }
  cplx amp(std::size_t flat) const { return amps_[flat]; }
  std::size_t size() const { return amps_.size(); }
  double norm() const;
  void normalize();

  /// Multiply amplitude of joint basis index j of `subs` by exp(i phases[j]).
  /// The joint index is row-major in the order the subregisters are listed.
  void apply_diagonal_phase(std::span<const std::size_t> subs, std::span<const double> phases);

  /// Unitary DFT on one subregister, kernel exp(+-2 pi i jk / M) / sqrt(M).
  void apply_fourier(std::size_t sub, FourierDirection dir);

  /// Amplitude at basis index j of `sub` moves to perm[j]; perm must be a
  /// bijection on [0, dim).
  void apply_permutation(std::size_t sub, std::span<const std::size_t> perm);

  /// Permutation on `target` selected by the basis value of `control`;
  /// perms[c] applies within the branch where control reads c.
  void apply_controlled_permutation(std::size_t control, std::size_t target,
                                    const std::vector<std::vector<std::size_t>>& perms);

  /// Inversion about the mean on the joint space of `subs`, conditioned on
  /// every joint index of the remaining subregisters: a -> 2<a> - a.
  void apply_grover_diffusion(std::span<const std::size_t> subs);

  /// Joint marginal distribution |amp|^2 summed over the other subregisters,
  /// indexed row-major in the order of `subs`.
  std::vector<double> marginal(std::span<const std::size_t> subs) const;

  /// Projective measurement of one subregister. The outcome is sampled from
  /// the exact marginal; the state is projected and renormalized.
  MeasurementRecord measure(std::size_t sub, CounterRng& rng);
  /// Same projection with the outcome imposed; rejects outcomes of
  /// (near-)zero probability.
  MeasurementRecord measure_forced(std::size_t sub, std::size_t outcome);

  // Layout surgery for the oracle pipeline.
  /// Appends a fresh subregister in the given basis state (least significant
  /// digit); returns its index.
  std::size_t append_subregister(std::size_t dim, std::string name, std::size_t basis_index);
  /// Removes a subregister that is in a definite basis state (e.g. after
  /// measurement).
  void drop_subregister(std::size_t sub);
  /// Merges `count` adjacent subregisters into one; a pure relabeling, the
  /// amplitude array is untouched under row-major flattening.
  void merge_subregisters(std::size_t first, std::size_t count, std::string name);
  /// Shrinks a subregister to [0, new_dim); all amplitude weight must already
  /// sit below new_dim (tail norm^2 < 1e-12).
  void truncate_subregister(std::size_t sub, std::size_t new_dim);

private:
  void check_sub(std::size_t sub) const;

  RegisterLayout layout_;
  std::vector<cplx> amps_;
};

/// min over unit phases phi of || phi*a - b ||_2; zero iff the states are
/// physically equal.
double distance_up_to_phase(const StateVector& a, const StateVector& b);

/// Row-major offsets of the joint index space of `subs` (all other digits 0).
std::vector<std::size_t> subspace_offsets(const RegisterLayout& layout,
                                          std::span<const std::size_t> subs);
/// Offsets enumerating the joint space of all subregisters not in `subs`.
std::vector<std::size_t> complement_offsets(const RegisterLayout& layout,
                                            std::span<const std::size_t> subs);

/// Seeded Haar-like random state (i.i.d. complex gaussian amplitudes,
/// normalized); used by property tests and the verification scenario.
StateVector random_state(RegisterLayout layout, CounterRng& rng);

} // namespace qem

#endif
