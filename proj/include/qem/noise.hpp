/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#ifndef QEM_NOISE_HPP
#define QEM_NOISE_HPP

#include <stdexcept>

namespace qem {

enum class CollapseShape { Square, Disc };

/// Oracle imperfection model: per-pass relative amplitude error on the
/// diffraction plane, and inelastic events that partially collapse the
/// wavefunction in real space.
struct NoiseConfig {
  double amp_error = 0.0;       ///< std of the multiplicative amplitude error per pass
  double inelastic_prob = 0.0;  ///< probability of an inelastic event per pass
  double collapse_radius = 0.0; ///< surviving neighborhood radius, pixels
  CollapseShape collapse_shape = CollapseShape::Square;

  void validate() const {
    if (amp_error < 0.0) throw std::invalid_argument("noise: amp_error < 0");
    if (inelastic_prob < 0.0 || inelastic_prob > 1.0)
      throw std::invalid_argument("noise: inelastic_prob outside [0,1]");
    if (collapse_radius < 0.0) throw std::invalid_argument("noise: collapse_radius < 0");
  }

  bool enabled() const { return amp_error > 0.0 || inelastic_prob > 0.0; }
};

} // namespace qem

#endif
