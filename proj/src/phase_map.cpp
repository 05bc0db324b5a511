/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#include "qem/phase_map.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qem {

PhaseMap::PhaseMap(std::size_t d, std::vector<double> theta)
    : d_(d), theta_(std::move(theta)) {
  if (d_ < 2 || d_ % 2 != 0)
    throw std::invalid_argument("phase map: side length must be even and >= 2");
  if (theta_.size() != d_ * d_)
    throw std::invalid_argument("phase map: need d*d entries");
  for (double v : theta_)
    if (!std::isfinite(v)) throw std::invalid_argument("phase map: non-finite entry");
}

PhaseMap PhaseMap::zeros(std::size_t d) {
  return PhaseMap(d, std::vector<double>(d * d, 0.0));
}

double PhaseMap::sum() const {
  double s = 0.0;
  for (double v : theta_) s += v;
  return s;
}

double PhaseMap::max_abs() const {
  double m = 0.0;
  for (double v : theta_) m = std::max(m, std::fabs(v));
  return m;
}

bool PhaseMap::is_zero_mean(double tol) const { return std::fabs(sum()) <= tol; }

PhaseMap PhaseMap::load_csv(const std::filesystem::path& file,
                            std::optional<int>* alpha_out) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("phase map: cannot open " + file.string());
  if (alpha_out) *alpha_out = std::nullopt;

  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("alpha=");
      if (pos != std::string::npos && alpha_out)
        *alpha_out = std::stoi(line.substr(pos + 6));
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("phase map: empty file " + file.string());
  const std::size_t d = rows.size();
  std::vector<double> theta;
  theta.reserve(d * d);
  for (const auto& row : rows) {
    if (row.size() != d)
      throw std::runtime_error("phase map: ragged CSV in " + file.string());
    theta.insert(theta.end(), row.begin(), row.end());
  }
  return PhaseMap(d, std::move(theta));
}

void PhaseMap::save_csv(const std::filesystem::path& file, std::optional<int> alpha) const {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("phase map: cannot write " + file.string());
  if (alpha) out << "# alpha=" << *alpha << "\n";
  char buf[40];
  for (std::size_t p = 0; p < d_; ++p) {
    for (std::size_t q = 0; q < d_; ++q) {
      std::snprintf(buf, sizeof buf, "%.17g", at(p, q));
      out << buf << (q + 1 == d_ ? "\n" : ",");
    }
  }
}

} // namespace qem
