/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#include "qem/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qem {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
} // namespace

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("trapezoid: bad grids");
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    s += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return s;
}

void CrossSectionTable::validate() const {
  if (theta.size() < 2) throw std::invalid_argument("cross sections: grid too small");
  if (theta.front() < 0.0 || theta.back() > kPi + 1e-9)
    throw std::invalid_argument("cross sections: grid outside [0, pi]");
  for (std::size_t i = 1; i < theta.size(); ++i)
    if (theta[i] <= theta[i - 1])
      throw std::invalid_argument("cross sections: grid not strictly ascending");
  for (std::size_t e = 0; e < kNumElements; ++e) {
    if (dcs[e].size() != theta.size())
      throw std::invalid_argument("cross sections: column size mismatch");
    for (double v : dcs[e])
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("cross sections: negative or non-finite value");
    if (total[e] < 0.0) throw std::invalid_argument("cross sections: negative total");
  }
}

CrossSectionTable CrossSectionTable::load_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in)
    throw std::runtime_error(
        "cross sections: cannot open " + file.string() +
        " (expected CSV: header '# total_nm2: H=... C=... N=... O=... S=...',"
        " columns theta_rad,dcs_H,dcs_C,dcs_N,dcs_O,dcs_S)");
  CrossSectionTable t;
  bool have_totals = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("total_nm2:");
      if (pos != std::string::npos) {
        std::string rest = line.substr(pos + 10);
        for (std::size_t e = 0; e < kNumElements; ++e) {
          const std::string key = std::string(kElementNames[e]) + "=";
          const auto kpos = rest.find(key);
          if (kpos == std::string::npos)
            throw std::runtime_error("cross sections: totals header missing " + key);
          t.total[e] = std::stod(rest.substr(kpos + key.size()));
        }
        have_totals = true;
      }
      continue;
    }
    if (line.rfind("theta", 0) == 0) continue; // column header
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != 1 + kNumElements)
      throw std::runtime_error("cross sections: expected 6 columns in " + file.string());
    t.theta.push_back(row[0]);
    for (std::size_t e = 0; e < kNumElements; ++e) t.dcs[e].push_back(row[1 + e]);
  }
  if (!have_totals)
    throw std::runtime_error("cross sections: missing '# total_nm2:' header in " +
                             file.string());
  t.validate();
  return t;
}

void CrossSectionTable::save_csv(const std::filesystem::path& file,
                                 const std::string& provenance) const {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cross sections: cannot write " + file.string());
  if (!provenance.empty()) out << "# " << provenance << "\n";
  char buf[40];
  out << "# total_nm2:";
  for (std::size_t e = 0; e < kNumElements; ++e) {
    std::snprintf(buf, sizeof buf, "%.17g", total[e]);
    out << " " << kElementNames[e] << "=" << buf;
  }
  out << "\ntheta_rad,dcs_H,dcs_C,dcs_N,dcs_O,dcs_S\n";
  for (std::size_t i = 0; i < theta.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", theta[i]);
    out << buf;
    for (std::size_t e = 0; e < kNumElements; ++e) {
      std::snprintf(buf, sizeof buf, "%.17g", dcs[e][i]);
      out << "," << buf;
    }
    out << "\n";
  }
}

CrossSectionTable CrossSectionTable::synthetic_isotropic(double sigma_total_nm2,
                                                         std::size_t points) {
  if (points < 2) throw std::invalid_argument("cross sections: need >= 2 points");
  CrossSectionTable t;
  t.theta.resize(points);
  t.theta[0] = 0.0;
  const double lo = std::log(1e-5), hi = std::log(kPi);
  for (std::size_t i = 1; i < points; ++i)
    t.theta[i] =
        std::exp(lo + (hi - lo) * static_cast<double>(i - 1) / static_cast<double>(points - 2));
  t.theta.back() = kPi;
  const double dcs = sigma_total_nm2 / (4.0 * kPi);
  for (std::size_t e = 0; e < kNumElements; ++e) {
    t.dcs[e].assign(points, dcs);
    t.total[e] = sigma_total_nm2;
  }
  return t;
}

void Composition::validate() const {
  for (double n : density)
    if (n < 0.0 || !std::isfinite(n))
      throw std::invalid_argument("composition: bad number density");
  if (!(thickness_nm > 0.0)) throw std::invalid_argument("composition: thickness <= 0");
}

double elastic_rate(const CrossSectionTable& table, const Composition& comp) {
  table.validate();
  comp.validate();
  double rate = 0.0;
  for (std::size_t e = 0; e < kNumElements; ++e) rate += comp.density[e] * table.total[e];
  return rate;
}

double scattering_probability(double rate_per_nm, double thickness_nm) {
  return rate_per_nm * thickness_nm;
}

ScatterProfile scatter_profile(const CrossSectionTable& table, const Composition& comp,
                               double p_S) {
  table.validate();
  if (!(p_S >= 0.0 && p_S < 1.0))
    throw std::invalid_argument("scatter profile: p_S must be in [0, 1)");
  ScatterProfile prof;
  prof.theta = table.theta;
  prof.value.assign(table.size(), 0.0);
  if (p_S == 0.0) return prof; // no scattering: identically zero profile
  for (std::size_t e = 0; e < kNumElements; ++e)
    for (std::size_t i = 0; i < table.size(); ++i)
      prof.value[i] += comp.density[e] * table.dcs[e][i];

  std::vector<double> integrand(table.size());
  for (std::size_t i = 0; i < table.size(); ++i)
    integrand[i] = prof.value[i] * kTwoPi * std::sin(prof.theta[i]);
  const double norm = trapezoid(prof.theta, integrand);
  if (!(norm > 0.0)) throw std::invalid_argument("scatter profile: profile vanishes");
  const double scale = p_S / norm;
  for (double& v : prof.value) v *= scale;
  prof.p_S = p_S;
  return prof;
}

double incident_intensity(double theta, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("incident intensity: sigma <= 0");
  return std::exp(-theta * theta / (2.0 * sigma * sigma)) / (kTwoPi * sigma * sigma);
}

double transmitted_intensity(double theta, double sigma, double p_S) {
  return (1.0 - p_S) * incident_intensity(theta, sigma);
}

double spherical_distance(double theta, double theta_hat, double phi_hat) {
  const double c = std::cos(theta) * std::cos(theta_hat) +
                   std::sin(theta) * std::sin(theta_hat) * std::cos(phi_hat);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

namespace {

/// Shared quadrature core: accumulates, for each grid theta,
///   int sin(th^) dth^ int_0^pi dphi weight(th^) * f(psi1, psi2)
/// where psi1/psi2 are the incident amplitudes at distances d1/d2.
template <typename F>
std::vector<double> convolve_grid(const ScatterProfile& S, double sigma,
                                  std::size_t phi_steps, F&& f) {
  if (phi_steps < 1) throw std::invalid_argument("convolution: phi_steps < 1");
  const auto& grid = S.theta;
  const std::size_t n = grid.size();
  const double dphi = kPi / static_cast<double>(phi_steps);
  const double amp0 = 1.0 / std::sqrt(kTwoPi * sigma * sigma);
  const double inv4s2 = 1.0 / (4.0 * sigma * sigma);

  std::vector<double> cos_t(n), sin_t(n), cos_phi(phi_steps);
  for (std::size_t i = 0; i < n; ++i) {
    cos_t[i] = std::cos(grid[i]);
    sin_t[i] = std::sin(grid[i]);
  }
  for (std::size_t j = 0; j < phi_steps; ++j)
    cos_phi[j] = std::cos((static_cast<double>(j) + 0.5) * dphi);

  std::vector<double> out(n, 0.0);
  std::vector<double> inner(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t m = 0; m < n; ++m) {
      double acc = 0.0;
      const double cc = cos_t[i] * cos_t[m];
      const double ss = sin_t[i] * sin_t[m];
      for (std::size_t j = 0; j < phi_steps; ++j) {
        const double c1 = std::clamp(cc + ss * cos_phi[j], -1.0, 1.0);
        const double c2 = std::clamp(cc - ss * cos_phi[j], -1.0, 1.0);
        const double d1 = std::acos(c1);
        const double d2 = std::acos(c2);
        const double psi1 = amp0 * std::exp(-d1 * d1 * inv4s2);
        const double psi2 = amp0 * std::exp(-d2 * d2 * inv4s2);
        acc += f(psi1, psi2);
      }
      inner[m] = acc * dphi * S.value[m] * sin_t[m];
    }
    out[i] = trapezoid(grid, inner);
  }
  return out;
}

} // namespace

std::vector<double> variance_B(const ScatterProfile& S, double sigma,
                               std::size_t phi_steps) {
  return convolve_grid(S, sigma, phi_steps, [](double psi1, double psi2) {
    const double diff = psi1 - psi2;
    return 0.5 * diff * diff;
  });
}

AmplitudeErrorResult amplitude_error(const ScatterProfile& S, double sigma,
                                     std::size_t phi_steps) {
  AmplitudeErrorResult res;
  res.theta = S.theta;
  res.S = S.value;
  res.p_S = S.p_S;
  res.sigma = sigma;
  res.varB = variance_B(S, sigma, phi_steps);
  const std::size_t n = S.theta.size();
  res.T.resize(n);
  res.E.resize(n);
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    res.T[i] = transmitted_intensity(S.theta[i], sigma, S.p_S);
    const double denom = res.varB[i] + res.T[i];
    res.E[i] = denom > 0.0 ? std::sqrt(res.varB[i] / denom) : 0.0;
    integrand[i] = kTwoPi * std::sin(S.theta[i]) * res.E[i] * (res.T[i] + S.value[i]);
  }
  res.e_A = trapezoid(S.theta, integrand);
  res.norm_residual = normalization_residual(S, sigma, phi_steps);
  return res;
}

double normalization_residual(const ScatterProfile& S, double sigma,
                              std::size_t phi_steps) {
  // VarA + VarB collapses to int S(th^) [psi1^2 + psi2^2]; integrated over
  // the sphere it must return p_S.
  const auto sum = convolve_grid(S, sigma, phi_steps, [](double psi1, double psi2) {
    return psi1 * psi1 + psi2 * psi2;
  });
  std::vector<double> integrand(S.theta.size());
  for (std::size_t i = 0; i < S.theta.size(); ++i)
    integrand[i] = sum[i] * kTwoPi * std::sin(S.theta[i]);
  const double total = trapezoid(S.theta, integrand);
  return std::fabs(total - S.p_S);
}

double contrast_factor(double e_A, std::size_t k, bool* warned) {
  if (e_A < 0.0) throw std::invalid_argument("contrast: e_A < 0");
  const double arg = e_A * std::sqrt(8.0 * static_cast<double>(k));
  if (warned) *warned = arg >= kPi / 2.0;
  return std::cos(arg);
}

} // namespace qem
