/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#ifndef QEM_LAYOUT_HPP
#define QEM_LAYOUT_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qem {

/// Ordered factored register layout. Flat indices are row-major over the
/// subregister order: the first subregister is the most significant digit.
/// This convention is fixed so permutation tables and phase tables are
/// portable across runs and implementations.
class RegisterLayout {
public:
  static constexpr std::size_t kDefaultCap = std::size_t{1} << 22;

  RegisterLayout(std::vector<std::size_t> dims, std::vector<std::string> names = {},
                 std::size_t cap = kDefaultCap)
      : dims_(std::move(dims)), names_(std::move(names)) {
    if (dims_.empty()) throw std::invalid_argument("layout: no subregisters");
    if (names_.empty()) {
      names_.reserve(dims_.size());
      for (std::size_t i = 0; i < dims_.size(); ++i) names_.push_back("r" + std::to_string(i));
    }
    if (names_.size() != dims_.size())
      throw std::invalid_argument("layout: names/dims size mismatch");
    total_ = 1;
    for (std::size_t d : dims_) {
      if (d < 1) throw std::invalid_argument("layout: subregister dimension < 1");
      if (total_ > cap / d)
        throw std::invalid_argument("layout: total dimension exceeds cap (" +
                                    std::to_string(cap) + ")");
      total_ *= d;
    }
    rebuild_strides();
  }

  std::size_t num_subregisters() const { return dims_.size(); }
  std::size_t dim(std::size_t i) const { return dims_.at(i); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::size_t total_dim() const { return total_; }
  std::size_t stride(std::size_t i) const { return strides_.at(i); }
  const std::vector<std::size_t>& dims() const { return dims_; }

  std::size_t digit(std::size_t flat, std::size_t i) const {
    return (flat / strides_[i]) % dims_[i];
  }

  std::size_t flatten(std::span<const std::size_t> digits) const {
    if (digits.size() != dims_.size())
      throw std::invalid_argument("flatten: digit count mismatch");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (digits[i] >= dims_[i])
        throw std::invalid_argument("flatten: index " + std::to_string(digits[i]) +
                                    " out of range for subregister '" + names_[i] + "' (dim " +
                                    std::to_string(dims_[i]) + ")");
      flat += digits[i] * strides_[i];
    }
    return flat;
  }

  bool operator==(const RegisterLayout& o) const { return dims_ == o.dims_; }

  // Layout surgery used by the oracle pipeline; amplitude arrays are adjusted
  // by StateVector, these only maintain the bookkeeping.
  void push_back(std::size_t dim, std::string name) {
    dims_.push_back(dim);
    names_.push_back(std::move(name));
    total_ *= dim;
    rebuild_strides();
  }
  void erase(std::size_t i) {
    total_ /= dims_[i];
    dims_.erase(dims_.begin() + static_cast<std::ptrdiff_t>(i));
    names_.erase(names_.begin() + static_cast<std::ptrdiff_t>(i));
    rebuild_strides();
  }
  void merge(std::size_t first, std::size_t count, std::string name) {
    if (count < 2 || first + count > dims_.size())
      throw std::invalid_argument("merge: bad range");
    std::size_t d = 1;
    for (std::size_t i = first; i < first + count; ++i) d *= dims_[i];
    dims_.erase(dims_.begin() + static_cast<std::ptrdiff_t>(first + 1),
                dims_.begin() + static_cast<std::ptrdiff_t>(first + count));
    names_.erase(names_.begin() + static_cast<std::ptrdiff_t>(first + 1),
                 names_.begin() + static_cast<std::ptrdiff_t>(first + count));
    dims_[first] = d;
    names_[first] = std::move(name);
    rebuild_strides();
  }
  void resize_dim(std::size_t i, std::size_t new_dim) {
    total_ = total_ / dims_[i] * new_dim;
    dims_[i] = new_dim;
    rebuild_strides();
  }

private:
  void rebuild_strides() {
    strides_.assign(dims_.size(), 1);
    for (std::size_t i = dims_.size(); i-- > 1;)
      strides_[i - 1] = strides_[i] * dims_[i];
  }

  std::vector<std::size_t> dims_;
  std::vector<std::string> names_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

} // namespace qem

#endif
