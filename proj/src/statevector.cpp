/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#include "qem/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qem {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void append_offsets(const RegisterLayout& layout, std::span<const std::size_t> subs,
                    std::size_t level, std::size_t base, std::vector<std::size_t>& out) {
  if (level == subs.size()) {
    out.push_back(base);
    return;
  }
  const std::size_t s = subs[level];
  const std::size_t stride = layout.stride(s);
  for (std::size_t j = 0; j < layout.dim(s); ++j)
    append_offsets(layout, subs, level + 1, base + j * stride, out);
}

} // namespace

std::vector<std::size_t> subspace_offsets(const RegisterLayout& layout,
                                          std::span<const std::size_t> subs) {
  std::size_t joint = 1;
  for (std::size_t s : subs) joint *= layout.dim(s);
  std::vector<std::size_t> out;
  out.reserve(joint);
  append_offsets(layout, subs, 0, 0, out);
  return out;
}

std::vector<std::size_t> complement_offsets(const RegisterLayout& layout,
                                            std::span<const std::size_t> subs) {
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < layout.num_subregisters(); ++i)
    if (std::find(subs.begin(), subs.end(), i) == subs.end()) rest.push_back(i);
  return subspace_offsets(layout, rest);
}

StateVector::StateVector(RegisterLayout layout, std::vector<cplx> amps, bool renormalize)
    : layout_(std::move(layout)), amps_(std::move(amps)) {
  if (amps_.size() != layout_.total_dim())
    throw std::invalid_argument("statevector: amplitude count does not match layout");
  if (renormalize) normalize();
}

StateVector StateVector::basis_state(RegisterLayout layout, std::span<const std::size_t> indices) {
  const std::size_t flat = layout.flatten(indices);
  std::vector<cplx> amps(layout.total_dim(), cplx{0.0, 0.0});
  amps[flat] = cplx{1.0, 0.0};
  return StateVector(std::move(layout), std::move(amps));
}

StateVector StateVector::uniform(RegisterLayout layout) {
  const double a = 1.0 / std::sqrt(static_cast<double>(layout.total_dim()));
  std::vector<cplx> amps(layout.total_dim(), cplx{a, 0.0});
  return StateVector(std::move(layout), std::move(amps));
}

double StateVector::norm() const {
  double s = 0.0;
  for (const cplx& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  const double n = norm();
  if (n < 1e-300) throw std::logic_error("statevector: cannot normalize zero state");
  const double inv = 1.0 / n;
  for (cplx& a : amps_) a *= inv;
}

void StateVector::check_sub(std::size_t sub) const {
  if (sub >= layout_.num_subregisters())
    throw std::invalid_argument("statevector: subregister index out of range");
}

void StateVector::apply_diagonal_phase(std::span<const std::size_t> subs,
                                       std::span<const double> phases) {
  std::size_t joint = 1;
  for (std::size_t s : subs) {
    check_sub(s);
    joint *= layout_.dim(s);
  }
  if (phases.size() != joint)
    throw std::invalid_argument("diagonal phase: table length " + std::to_string(phases.size()) +
                                " does not match joint dimension " + std::to_string(joint));
  std::vector<cplx> cis(joint);
  for (std::size_t j = 0; j < joint; ++j) cis[j] = std::polar(1.0, phases[j]);

  const auto offs = subspace_offsets(layout_, subs);
  const auto groups = complement_offsets(layout_, subs);
  for (const std::size_t base : groups)
    for (std::size_t j = 0; j < joint; ++j) amps_[base + offs[j]] *= cis[j];
}

void StateVector::apply_fourier(std::size_t sub, FourierDirection dir) {
  check_sub(sub);
  const std::size_t m = layout_.dim(sub);
  const std::size_t stride = layout_.stride(sub);
  const double sign = (dir == FourierDirection::Forward) ? 1.0 : -1.0;
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));

  std::vector<cplx> twiddle(m);
  for (std::size_t r = 0; r < m; ++r)
    twiddle[r] = std::polar(1.0, sign * kTwoPi * static_cast<double>(r) / static_cast<double>(m));

  const std::size_t subv[] = {sub};
  const auto groups = complement_offsets(layout_, subv);
  std::vector<cplx> in(m), out(m);
  for (const std::size_t base : groups) {
    std::size_t nonzero = 0, last = 0;
    for (std::size_t j = 0; j < m; ++j) {
      in[j] = amps_[base + j * stride];
      if (in[j] != cplx{0.0, 0.0}) {
        ++nonzero;
        last = j;
      }
    }
    if (nonzero == 0) continue;
    if (nonzero == 1) {
      // single source column: one twiddle row instead of the full kernel
      const cplx a = in[last] * inv_sqrt_m;
      for (std::size_t kk = 0; kk < m; ++kk)
        amps_[base + kk * stride] = twiddle[(last * kk) % m] * a;
      continue;
    }
    for (std::size_t kk = 0; kk < m; ++kk) {
      cplx acc{0.0, 0.0};
      for (std::size_t j = 0; j < m; ++j) acc += twiddle[(j * kk) % m] * in[j];
      out[kk] = acc * inv_sqrt_m;
    }
    for (std::size_t kk = 0; kk < m; ++kk) amps_[base + kk * stride] = out[kk];
  }
}

namespace {
void check_bijection(std::span<const std::size_t> perm, std::size_t m) {
  if (perm.size() != m) throw std::invalid_argument("permutation: table length mismatch");
  std::vector<char> seen(m, 0);
  for (std::size_t v : perm) {
    if (v >= m || seen[v]) throw std::invalid_argument("permutation: table is not a bijection");
    seen[v] = 1;
  }
}
} // namespace

void StateVector::apply_permutation(std::size_t sub, std::span<const std::size_t> perm) {
  check_sub(sub);
  const std::size_t m = layout_.dim(sub);
  check_bijection(perm, m);
  const std::size_t stride = layout_.stride(sub);
  const std::size_t subv[] = {sub};
  const auto groups = complement_offsets(layout_, subv);
  std::vector<cplx> tmp(m);
  for (const std::size_t base : groups) {
    for (std::size_t j = 0; j < m; ++j) tmp[perm[j]] = amps_[base + j * stride];
    for (std::size_t j = 0; j < m; ++j) amps_[base + j * stride] = tmp[j];
  }
}

void StateVector::apply_controlled_permutation(
    std::size_t control, std::size_t target,
    const std::vector<std::vector<std::size_t>>& perms) {
  check_sub(control);
  check_sub(target);
  if (control == target)
    throw std::invalid_argument("controlled permutation: control equals target");
  const std::size_t mc = layout_.dim(control);
  const std::size_t mt = layout_.dim(target);
  if (perms.size() != mc)
    throw std::invalid_argument("controlled permutation: need one table per control value");
  for (const auto& p : perms) check_bijection(p, mt);

  const std::size_t tstride = layout_.stride(target);
  std::vector<cplx> next(amps_.size());
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    const std::size_t c = layout_.digit(idx, control);
    const std::size_t j = layout_.digit(idx, target);
    const std::size_t dst = idx + (perms[c][j] - j) * tstride;
    next[dst] = amps_[idx];
  }
  amps_ = std::move(next);
}

void StateVector::apply_grover_diffusion(std::span<const std::size_t> subs) {
  for (std::size_t s : subs) check_sub(s);
  const auto offs = subspace_offsets(layout_, subs);
  const auto groups = complement_offsets(layout_, subs);
  const double inv_g = 1.0 / static_cast<double>(offs.size());
  for (const std::size_t base : groups) {
    cplx mean{0.0, 0.0};
    for (const std::size_t o : offs) mean += amps_[base + o];
    mean *= inv_g;
    const cplx twice = 2.0 * mean;
    for (const std::size_t o : offs) {
      cplx& a = amps_[base + o];
      a = twice - a;
    }
  }
}

std::vector<double> StateVector::marginal(std::span<const std::size_t> subs) const {
  for (std::size_t s : subs) check_sub(s);
  const auto offs = subspace_offsets(layout_, subs);
  const auto groups = complement_offsets(layout_, subs);
  std::vector<double> m(offs.size(), 0.0);
  for (const std::size_t base : groups)
    for (std::size_t j = 0; j < offs.size(); ++j) m[j] += std::norm(amps_[base + offs[j]]);
  return m;
}

MeasurementRecord StateVector::measure(std::size_t sub, CounterRng& rng) {
  check_sub(sub);
  const std::size_t subv[] = {sub};
  const auto marg = marginal(subv);
  const double u = rng.uniform();
  double cum = 0.0;
  std::size_t outcome = marg.size();
  for (std::size_t j = 0; j < marg.size(); ++j) {
    cum += marg[j];
    if (u < cum) {
      outcome = j;
      break;
    }
  }
  if (outcome == marg.size()) {
    // roundoff pushed the cumulative below u; take the last outcome of
    // nonzero weight
    for (std::size_t j = marg.size(); j-- > 0;)
      if (marg[j] > 0.0) {
        outcome = j;
        break;
      }
    if (outcome == marg.size()) throw std::logic_error("measure: zero-norm state");
  }
  return measure_forced(sub, outcome);
}

MeasurementRecord StateVector::measure_forced(std::size_t sub, std::size_t outcome) {
  check_sub(sub);
  const std::size_t m = layout_.dim(sub);
  if (outcome >= m) throw std::invalid_argument("measure: outcome out of range");
  const std::size_t subv[] = {sub};
  const auto marg = marginal(subv);
  const double p = marg[outcome];
  if (p < 1e-15)
    throw std::invalid_argument("measure: forced outcome has (near-)zero probability");
  const double inv = 1.0 / std::sqrt(p);
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    if (layout_.digit(idx, sub) == outcome)
      amps_[idx] *= inv;
    else
      amps_[idx] = cplx{0.0, 0.0};
  }
  return MeasurementRecord{sub, outcome, p};
}

std::size_t StateVector::append_subregister(std::size_t dim, std::string name,
                                            std::size_t basis_index) {
  if (dim < 1) throw std::invalid_argument("append: dimension < 1");
  if (basis_index >= dim) throw std::invalid_argument("append: basis index out of range");
  std::vector<cplx> next(amps_.size() * dim, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < amps_.size(); ++i) next[i * dim + basis_index] = amps_[i];
  layout_.push_back(dim, std::move(name));
  amps_ = std::move(next);
  return layout_.num_subregisters() - 1;
}

void StateVector::drop_subregister(std::size_t sub) {
  check_sub(sub);
  const std::size_t subv[] = {sub};
  const auto marg = marginal(subv);
  std::size_t value = 0;
  double best = -1.0;
  for (std::size_t j = 0; j < marg.size(); ++j)
    if (marg[j] > best) {
      best = marg[j];
      value = j;
    }
  if (best < 1.0 - 1e-9)
    throw std::logic_error("drop: subregister is not in a definite basis state");
  const std::size_t m = layout_.dim(sub);
  const std::size_t stride = layout_.stride(sub);
  std::vector<cplx> next(amps_.size() / m);
  for (std::size_t i = 0; i < next.size(); ++i) {
    const std::size_t hi = i / stride;
    const std::size_t lo = i % stride;
    next[i] = amps_[(hi * m + value) * stride + lo];
  }
  layout_.erase(sub);
  amps_ = std::move(next);
  normalize();
}

void StateVector::merge_subregisters(std::size_t first, std::size_t count, std::string name) {
  layout_.merge(first, count, std::move(name));
}

void StateVector::truncate_subregister(std::size_t sub, std::size_t new_dim) {
  check_sub(sub);
  const std::size_t m = layout_.dim(sub);
  if (new_dim < 1 || new_dim > m) throw std::invalid_argument("truncate: bad new dimension");
  const std::size_t stride = layout_.stride(sub);
  double tail = 0.0;
  for (std::size_t idx = 0; idx < amps_.size(); ++idx)
    if (layout_.digit(idx, sub) >= new_dim) tail += std::norm(amps_[idx]);
  if (tail > 1e-12)
    throw std::logic_error("truncate: amplitude weight above the new dimension");
  std::vector<cplx> next(amps_.size() / m * new_dim);
  for (std::size_t i = 0; i < next.size(); ++i) {
    const std::size_t hi = i / (stride * new_dim);
    const std::size_t rest = i % (stride * new_dim);
    next[i] = amps_[hi * stride * m + rest];
  }
  layout_.resize_dim(sub, new_dim);
  amps_ = std::move(next);
  normalize();
}

double distance_up_to_phase(const StateVector& a, const StateVector& b) {
  if (!(a.layout() == b.layout()))
    throw std::invalid_argument("distance: layouts differ");
  cplx overlap{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(a.amp(i)) * b.amp(i);
  // arg(overlap) is the exact minimizer; applying it elementwise avoids the
  // cancellation floor of the sqrt(2 - 2|<a|b>|) form.
  const double mag = std::abs(overlap);
  const cplx phase = mag > 0.0 ? overlap / mag : cplx{1.0, 0.0};
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d2 += std::norm(a.amp(i) * phase - b.amp(i));
  return std::sqrt(d2);
}

StateVector random_state(RegisterLayout layout, CounterRng& rng) {
  std::vector<cplx> amps(layout.total_dim());
  for (cplx& a : amps) a = cplx{rng.gaussian(), rng.gaussian()};
  return StateVector(std::move(layout), std::move(amps), /*renormalize=*/true);
}

} // namespace qem
