/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#ifndef QEM_DIFFRACTION_HPP
#define QEM_DIFFRACTION_HPP

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace qem {

inline constexpr std::size_t kNumElements = 5;
inline constexpr std::array<const char*, kNumElements> kElementNames = {"H", "C", "N", "O",
                                                                        "S"};

/// Tabulated differential elastic cross sections for 300 keV electrons on
/// H, C, N, O, S. Angles in radians on an ascending grid over [0, pi], cross
/// sections in nm^2/sr, totals in nm^2.
struct CrossSectionTable {
  std::vector<double> theta;
  std::array<std::vector<double>, kNumElements> dcs;
  std::array<double, kNumElements> total = {};

  void validate() const;
  std::size_t size() const { return theta.size(); }

  /// CSV with `# total_nm2: H=... C=... ...` in the header and columns
  /// theta_rad, dcs_H, ..., dcs_S.
  static CrossSectionTable load_csv(const std::filesystem::path& file);
  void save_csv(const std::filesystem::path& file,
                const std::string& provenance = {}) const;

  /// Flat dsigma/dOmega per element (value sigma_total / 4 pi), mainly for
  /// closed-form tests.
  static CrossSectionTable synthetic_isotropic(double sigma_total_nm2,
                                               std::size_t points = 601);
};

/// Number densities per nm^3 and specimen thickness in nm.
struct Composition {
  std::array<double, kNumElements> density = {};
  double thickness_nm = 0.0;

  void validate() const;
};

/// Scattered intensity S(theta) from a plane incident wave, normalized so
/// that int S(theta) 2 pi sin(theta) dtheta = p_S.
struct ScatterProfile {
  std::vector<double> theta;
  std::vector<double> value;
  double p_S = 0.0;
};

/// Elastic scattering rate per nm: density-weighted total cross sections.
double elastic_rate(const CrossSectionTable& table, const Composition& comp);
/// Linear thickness law p_S = rate * t (no exponential attenuation).
double scattering_probability(double rate_per_nm, double thickness_nm);

ScatterProfile scatter_profile(const CrossSectionTable& table, const Composition& comp,
                               double p_S);

/// Gaussian angular intensity of the incident beam,
/// I(theta) = exp(-theta^2 / 2 sigma^2) / (2 pi sigma^2), normalized in the
/// small-angle sense int I 2 pi theta dtheta = 1.
double incident_intensity(double theta, double sigma);
/// Transmitted intensity (1 - p_S) I(theta).
double transmitted_intensity(double theta, double sigma, double p_S);

/// Great-circle distance by the spherical law of cosines, clamped against
/// roundoff; range [0, pi].
double spherical_distance(double theta, double theta_hat, double phi_hat);

/// Var(B)(theta) on the profile's grid:
///   int sin(th^) dth^ int_0^pi dphi (S(th^)/2) [psi_i(d1) - psi_i(d2)]^2
/// with psi_i = sqrt(I), d2 the antipodal-azimuth distance, midpoint rule in
/// phi (pi / phi_steps) and trapezoid over the tabulated theta grid.
std::vector<double> variance_B(const ScatterProfile& S, double sigma,
                               std::size_t phi_steps = 100);

struct AmplitudeErrorResult {
  std::vector<double> theta;
  std::vector<double> E;     ///< relative amplitude error, in [0, 1]
  std::vector<double> varB;
  std::vector<double> T;
  std::vector<double> S;
  double e_A = 0.0;
  double p_S = 0.0;
  double sigma = 0.0;
  double norm_residual = 0.0; ///< | int (VarA + VarB) dOmega - p_S |
};

/// Full error pipeline: E(theta) = sqrt(VarB / (VarB + T)) and
/// e_A = int 2 pi sin(theta) E (T + S) dtheta.
AmplitudeErrorResult amplitude_error(const ScatterProfile& S, double sigma,
                                     std::size_t phi_steps = 100);

/// | int (VarA + VarB) dOmega - p_S |: the scattered-intensity consistency
/// identity, limited only by quadrature.
double normalization_residual(const ScatterProfile& S, double sigma,
                              std::size_t phi_steps = 100);

/// Contrast degradation cos(e_A sqrt(8 k)); `warned` is set when the argument
/// reaches pi/2 and the factor stops being meaningful.
double contrast_factor(double e_A, std::size_t k, bool* warned = nullptr);

/// Trapezoid on a nonuniform grid.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

} // namespace qem

#endif
