/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#ifndef QEM_FEASIBILITY_HPP
#define QEM_FEASIBILITY_HPP

#include <cmath>
#include <stdexcept>

namespace qem {

/// CODATA 2018 values, frozen. h, e, c are exact in the 2019 SI.
struct PhysicalConstants {
  double h = 6.62607015e-34;        ///< J s
  double hbar = 1.054571817e-34;    ///< J s
  double e = 1.602176634e-19;       ///< C
  double c = 299792458.0;           ///< m / s
  double mu0 = 1.25663706212e-6;    ///< N / A^2
  double R_K = 25812.80745;         ///< von Klitzing, ohm
  double Z0 = 376.730313668;        ///< vacuum impedance, ohm
  double alpha = 7.2973525693e-3;   ///< fine structure
  double phi0_h_2e = 6.62607015e-34 / (2.0 * 1.602176634e-19); ///< flux quantum h/2e, Wb
  double phi0_h_e = 6.62607015e-34 / 1.602176634e-19; ///< single-charge flux quantum h/e, Wb

  /// Z0 / R_K = 2 alpha must hold to 1e-4 relative.
  void validate() const {
    const double lhs = Z0 / R_K;
    if (std::abs(lhs - 2.0 * alpha) > 1e-4 * lhs)
      throw std::logic_error("constants table violates Z0/R_K = 2 alpha");
  }
};

/// Lumped-element LC resonator standing in for the deflector qubit, plus the
/// single characteristic length of the circuit and its coupling to the beam.
struct CircuitParams {
  double L = 0.0; ///< H
  double C = 0.0; ///< F
  double l = 0.0; ///< m

  void validate() const {
    if (!(L > 0.0 && C > 0.0 && l > 0.0))
      throw std::invalid_argument("circuit: L, C, l must be positive");
  }
  double omega() const { return 1.0 / std::sqrt(L * C); }
  double impedance() const { return std::sqrt(L / C); }
};

struct DeflectionResult {
  double ratio = 0.0;             ///< (dp/p) / (lambda/w) = e phi / h
  bool satisfied = false;         ///< ratio >= 1, i.e. phi >~ one flux quantum
  double dp_over_p = 0.0;
  double diffraction_spread = 0.0; ///< lambda / w
};

/// Deflection condition: the magnetic kick e phi / (p w) must beat the
/// diffraction spread lambda / w; their quotient is phi in units of h/e,
/// independent of w. `phi_over_phi0` is the held flux in h/e units,
/// `p` the electron momentum (kg m/s), `w` the qubit width (m).
DeflectionResult deflection_ratio(double phi_over_phi0, double p, double w,
                                  const PhysicalConstants& k = {});

struct ChargeFluctuation {
  double exact_e = 0.0; ///< sqrt(R_K / 4 pi Z), in units of e
  double rough_e = 0.0; ///< order form sqrt(R_K / Z) ~ 1/sqrt(alpha)
};
ChargeFluctuation charge_fluctuation(const CircuitParams& p, const PhysicalConstants& k = {});

struct FluxFluctuation {
  double delta_phi_over_phi0 = 0.0; ///< sqrt(Z / R_K) ~ sqrt(2 alpha) at Z = Z0
  double applied_over_phi0 = 0.0;   ///< flux from the passing electron, e Z / (h/e) = Z / R_K
};
FluxFluctuation flux_fluctuation(const CircuitParams& p, const PhysicalConstants& k = {});

enum class ExcitationMode { Magnetic, Electric };

struct ExcitationResult {
  double raw = 0.0;     ///< first-order perturbation value with t = l/c, L = mu0 l
  double reduced = 0.0; ///< order-of-magnitude reduction Z / R_K ~ alpha
  bool clamped = false; ///< raw exceeded 1 (perturbation theory invalid)
};

/// Excitation probability of the resonator ground state from one electron
/// pass. Magnetic mode drives through the flux (phi_a = e Z unless
/// overridden); electric through the induced charge q_a = e.
ExcitationResult excitation_probability(const CircuitParams& p, ExcitationMode mode,
                                        const PhysicalConstants& k = {},
                                        double phi_a_override = -1.0);

/// Everything the feasibility CLI reports, JSON-serialized by the runner.
struct BackActionReport {
  DeflectionResult deflection;
  ChargeFluctuation charge;
  FluxFluctuation flux;
  ExcitationResult p_ex_magnetic;
  ExcitationResult p_ex_electric;
  double omega = 0.0;
  double impedance = 0.0;
};

BackActionReport back_action_report(const CircuitParams& p, double phi_over_phi0,
                                    double momentum, double width,
                                    const PhysicalConstants& k = {});

} // namespace qem

#endif
