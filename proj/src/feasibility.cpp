/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#include "qem/feasibility.hpp"

#include <cmath>
#include <numbers>

namespace qem {

namespace {
constexpr double kPi = std::numbers::pi;
}

DeflectionResult deflection_ratio(double phi_over_phi0, double p, double w,
                                  const PhysicalConstants& k) {
  if (phi_over_phi0 < 0.0) throw std::invalid_argument("deflection: negative flux");
  if (!(p > 0.0 && w > 0.0))
    throw std::invalid_argument("deflection: momentum and width must be positive");
  k.validate();
  DeflectionResult r;
  const double phi = phi_over_phi0 * k.phi0_h_e;
  r.dp_over_p = k.e * phi / (p * w);
  r.diffraction_spread = k.h / (p * w);
  r.ratio = r.dp_over_p / r.diffraction_spread;
  r.satisfied = r.ratio >= 1.0;
  return r;
}

ChargeFluctuation charge_fluctuation(const CircuitParams& p, const PhysicalConstants& k) {
  p.validate();
  k.validate();
  const double z = p.impedance();
  return ChargeFluctuation{std::sqrt(k.R_K / (4.0 * kPi * z)), std::sqrt(k.R_K / z)};
}

FluxFluctuation flux_fluctuation(const CircuitParams& p, const PhysicalConstants& k) {
  p.validate();
  k.validate();
  const double z = p.impedance();
  return FluxFluctuation{std::sqrt(z / k.R_K), z / k.R_K};
}

ExcitationResult excitation_probability(const CircuitParams& p, ExcitationMode mode,
                                        const PhysicalConstants& k, double phi_a_override) {
  p.validate();
  k.validate();
  const double z = p.impedance();
  const double t = p.l / k.c;
  ExcitationResult r;
  if (mode == ExcitationMode::Magnetic) {
    // |<1|V|0>|^2 / hbar^2 * t^2 with V = -phi phi_a / L, evaluated with the
    // substitution L = mu0 l.
    const double phi_a = phi_a_override >= 0.0 ? phi_a_override : k.e * z;
    const double l_sub = k.mu0 * p.l;
    r.raw = phi_a * phi_a * z / (2.0 * k.hbar * l_sub * l_sub) * t * t;
  } else {
    // V = -q q_a / C with q_a = e and the circuit's own capacitance.
    const double q_a = k.e;
    r.raw = q_a * q_a * t * t / (2.0 * z * p.C * p.C * k.hbar);
  }
  r.reduced = z / k.R_K;
  if (r.raw > 1.0) {
    r.raw = 1.0;
    r.clamped = true;
  }
  return r;
}

BackActionReport back_action_report(const CircuitParams& p, double phi_over_phi0,
                                    double momentum, double width,
                                    const PhysicalConstants& k) {
  BackActionReport rep;
  rep.deflection = deflection_ratio(phi_over_phi0, momentum, width, k);
  rep.charge = charge_fluctuation(p, k);
  rep.flux = flux_fluctuation(p, k);
  rep.p_ex_magnetic = excitation_probability(p, ExcitationMode::Magnetic, k);
  rep.p_ex_electric = excitation_probability(p, ExcitationMode::Electric, k);
  rep.omega = p.omega();
  rep.impedance = p.impedance();
  return rep;
}

} // namespace qem
