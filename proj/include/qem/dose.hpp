/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#ifndef QEM_DOSE_HPP
#define QEM_DOSE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace qem {

/// Radiation-dose bookkeeping: per-pixel detection probability accumulated
/// over all electron passes, plus the total query count. One pass deposits
/// the real-space marginal of the register at specimen transit; a full
/// register pass sums to 1, a reference-arm pass may deposit less.
struct DoseLedger {
  std::size_t d = 0;
  std::vector<double> per_pixel;
  std::uint64_t electrons = 0;

  explicit DoseLedger(std::size_t side) : d(side), per_pixel(side * side, 0.0) {}

  void record_pass(std::span<const double> marginal) {
    if (marginal.size() != per_pixel.size())
      throw std::invalid_argument("dose ledger: marginal size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < marginal.size(); ++i) {
      if (marginal[i] < -1e-12) throw std::invalid_argument("dose ledger: negative dose");
      sum += marginal[i];
    }
    if (sum > 1.0 + 1e-9)
      throw std::invalid_argument("dose ledger: per-pass dose exceeds one electron");
    for (std::size_t i = 0; i < marginal.size(); ++i) per_pixel[i] += marginal[i];
    ++electrons;
  }

  double at(std::size_t p, std::size_t q) const { return per_pixel[p * d + q]; }
};

} // namespace qem

#endif
