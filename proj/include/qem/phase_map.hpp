/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#ifndef QEM_PHASE_MAP_HPP
#define QEM_PHASE_MAP_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace qem {

/// d x d grid of specimen phase shifts in radians, row-major (p * d + q).
/// The row-major order matches the joint (x, y) basis index of the
/// statevector layout, so values() can be fed directly to a diagonal gate.
class PhaseMap {
public:
  PhaseMap(std::size_t d, std::vector<double> theta);
  static PhaseMap zeros(std::size_t d);

  /// Plain CSV, d rows x d columns of radians. Candidate files may carry a
  /// header line `# alpha=<index>` which is returned through alpha_out.
  static PhaseMap load_csv(const std::filesystem::path& file,
                           std::optional<int>* alpha_out = nullptr);
  void save_csv(const std::filesystem::path& file,
                std::optional<int> alpha = std::nullopt) const;

  std::size_t d() const { return d_; }
  std::size_t pixel_count() const { return d_ * d_; }
  double at(std::size_t p, std::size_t q) const { return theta_[p * d_ + q]; }
  double& at(std::size_t p, std::size_t q) { return theta_[p * d_ + q]; }
  std::span<const double> values() const { return theta_; }

  double sum() const;
  double max_abs() const;
  bool is_zero_mean(double tol = 1e-9) const;

private:
  std::size_t d_;
  std::vector<double> theta_;
};

} // namespace qem

#endif
