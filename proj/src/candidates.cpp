/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#include "qem/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>

namespace qem {

bool PixelSet::contains(std::size_t flat) const {
  return std::binary_search(pixels.begin(), pixels.end(), flat);
}

PixelSet build_pixel_set(const PhaseMap& map) {
  const std::size_t n = map.pixel_count();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto values = map.values();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b; // raster tie-break
  });
  PixelSet set;
  set.pixels.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n / 2));
  std::sort(set.pixels.begin(), set.pixels.end());
  return set;
}

std::size_t hilbert_index(std::size_t p, std::size_t q, std::size_t side) {
  std::size_t rx, ry, idx = 0;
  std::size_t x = q, y = p;
  for (std::size_t s = side / 2; s > 0; s /= 2) {
    rx = (x & s) > 0 ? 1 : 0;
    ry = (y & s) > 0 ? 1 : 0;
    idx += s * s * ((3 * rx) ^ ry);
    // rotate quadrant
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
  }
  return idx;
}

namespace {

Bijection from_ordering(const std::vector<std::size_t>& ordered, std::size_t d) {
  Bijection f;
  f.beta_of_pixel.assign(d * d, Bijection::npos);
  f.pixel_of_beta.resize(ordered.size());
  for (std::size_t beta = 0; beta < ordered.size(); ++beta) {
    f.beta_of_pixel[ordered[beta]] = beta;
    f.pixel_of_beta[beta] = ordered[beta];
  }
  return f;
}

/// Locality score: mean |beta(a) - beta(b)| over grid-adjacent member pairs.
double adjacency_score(const Bijection& f, std::size_t d) {
  double acc = 0.0;
  std::size_t pairs = 0;
  for (std::size_t p = 0; p < d; ++p) {
    for (std::size_t q = 0; q < d; ++q) {
      const std::size_t a = f.beta_of_pixel[p * d + q];
      if (a == Bijection::npos) continue;
      const std::size_t right = q + 1 < d ? f.beta_of_pixel[p * d + q + 1] : Bijection::npos;
      const std::size_t down = p + 1 < d ? f.beta_of_pixel[(p + 1) * d + q] : Bijection::npos;
      for (std::size_t b : {right, down}) {
        if (b == Bijection::npos) continue;
        acc += std::fabs(static_cast<double>(a) - static_cast<double>(b));
        ++pairs;
      }
    }
  }
  return pairs ? acc / static_cast<double>(pairs) : 0.0;
}

} // namespace

Bijection build_bijection(const PixelSet& set, BijectionStrategy strategy, std::size_t d) {
  if (set.pixels.empty()) throw std::invalid_argument("bijection: empty pixel set");
  for (std::size_t flat : set.pixels)
    if (flat >= d * d) throw std::invalid_argument("bijection: pixel out of grid");

  if (strategy == BijectionStrategy::Raster) return from_ordering(set.pixels, d);

  // Locality-balanced: of a family of space-filling enumerations, keep the
  // one whose grid-adjacent members receive the closest labels. Raster is in
  // the family, so the score never regresses below it. A plain Hilbert sort
  // loses to raster on scattered sets (rows compress to consecutive labels),
  // which is why the whole family is scored.
  std::size_t side = 1;
  while (side < d) side *= 2;
  using Key = std::size_t (*)(std::size_t, std::size_t, std::size_t);
  static constexpr Key keys[] = {
      [](std::size_t p, std::size_t q, std::size_t n) { return p * n + q; },
      [](std::size_t p, std::size_t q, std::size_t n) { return q * n + p; },
      [](std::size_t p, std::size_t q, std::size_t n) {
        return p * n + (p % 2 == 0 ? q : n - 1 - q);
      },
      [](std::size_t p, std::size_t q, std::size_t n) {
        return q * n + (q % 2 == 0 ? p : n - 1 - p);
      },
      hilbert_index,
  };
  Bijection best;
  double best_score = 0.0;
  for (const Key key : keys) {
    std::vector<std::size_t> ordered = set.pixels;
    std::stable_sort(ordered.begin(), ordered.end(), [&](std::size_t a, std::size_t b) {
      return key(a / d, a % d, side) < key(b / d, b % d, side);
    });
    Bijection f = from_ordering(ordered, d);
    const double score = adjacency_score(f, d);
    if (best.pixel_of_beta.empty() || score < best_score) {
      best = std::move(f);
      best_score = score;
    }
  }
  return best;
}

CandidateSet CandidateSet::from_maps(std::vector<PhaseMap> maps, std::size_t k,
                                     BijectionStrategy strategy) {
  if (maps.empty()) throw std::invalid_argument("candidates: empty set");
  if (k < 1) throw std::invalid_argument("candidates: k < 1");
  CandidateSet cs;
  cs.d = maps.front().d();
  cs.k = k;
  for (const auto& m : maps) {
    if (m.d() != cs.d) throw std::invalid_argument("candidates: mixed grid sizes");
    if (!m.is_zero_mean(1e-9))
      throw std::invalid_argument("candidates: hypothesis map is not zero-mean");
    cs.pixel_sets.push_back(build_pixel_set(m));
    cs.bijections.push_back(build_bijection(cs.pixel_sets.back(), strategy, cs.d));
  }
  cs.maps = std::move(maps);
  return cs;
}

CandidateSet CandidateSet::load_directory(const std::filesystem::path& dir, std::size_t k,
                                          BijectionStrategy strategy) {
  if (!std::filesystem::is_directory(dir))
    throw std::runtime_error("candidates: not a directory: " + dir.string());
  std::map<int, PhaseMap> by_alpha;
  std::vector<PhaseMap> unlabeled;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".csv") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::optional<int> alpha;
    PhaseMap m = PhaseMap::load_csv(f, &alpha);
    if (alpha) {
      if (!by_alpha.emplace(*alpha, std::move(m)).second)
        throw std::runtime_error("candidates: duplicate alpha in " + f.string());
    } else {
      unlabeled.push_back(std::move(m));
    }
  }
  std::vector<PhaseMap> maps;
  for (auto& [a, m] : by_alpha) maps.push_back(std::move(m));
  for (auto& m : unlabeled) maps.push_back(std::move(m));
  if (maps.empty()) throw std::runtime_error("candidates: no CSV maps in " + dir.string());
  return from_maps(std::move(maps), k, strategy);
}

void CandidateSet::save_directory(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (std::size_t a = 0; a < maps.size(); ++a) {
    char name[32];
    std::snprintf(name, sizeof name, "candidate_%03zu.csv", a);
    maps[a].save_csv(dir / name, static_cast<int>(a));
  }
}

namespace {

double binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0.0;
  double v = 1.0;
  for (std::size_t i = 0; i < r; ++i)
    v *= static_cast<double>(n - i) / static_cast<double>(i + 1);
  return v;
}

} // namespace

SyntheticProblem make_synthetic_problem(std::size_t d, std::size_t n_candidates,
                                        std::size_t k, CounterRng& rng,
                                        double hot_fraction) {
  if (n_candidates < 2) throw std::invalid_argument("synthetic: need at least 2 candidates");
  if (k < 1) throw std::invalid_argument("synthetic: k < 1");
  const std::size_t n_pixels = d * d;
  const std::size_t half = n_pixels / 2;

  // Hot-subset size: as close to hot_fraction * half as still leaves enough
  // distinct half-sets avoiding the hot pixels.
  std::size_t hot = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                 std::llround(hot_fraction * static_cast<double>(half))));
  while (hot > 1 && binomial(n_pixels - hot, half) < static_cast<double>(n_candidates - 1) * 2.0)
    --hot;
  if (binomial(n_pixels - hot, half) < static_cast<double>(n_candidates - 1))
    throw std::invalid_argument("synthetic: too many candidates for this grid");

  // True specimen: mean phase over the correct half equals pi/k exactly,
  // concentrated on the hot pixels; zero elsewhere.
  const double t = std::numbers::pi / static_cast<double>(k) *
                   static_cast<double>(half) / static_cast<double>(hot);
  std::vector<double> theta(n_pixels, 0.0);
  for (std::size_t i = 0; i < hot; ++i) theta[i] = t;
  PhaseMap true_map(d, std::move(theta));

  // Correct hypothesis: +1 on the raster first half.
  std::vector<PhaseMap> maps;
  {
    std::vector<double> v(n_pixels, -1.0);
    for (std::size_t i = 0; i < half; ++i) v[i] = 1.0;
    maps.emplace_back(d, std::move(v));
  }

  // Wrong hypotheses: distinct half-sets drawn from the cold pixels only.
  std::vector<std::size_t> cold(n_pixels - hot);
  std::iota(cold.begin(), cold.end(), hot);
  std::set<std::vector<std::size_t>> seen;
  std::size_t attempts = 0;
  while (maps.size() < n_candidates) {
    if (++attempts > 200000 * n_candidates)
      throw std::runtime_error("synthetic: could not draw enough distinct candidates");
    std::vector<std::size_t> pool = cold;
    for (std::size_t i = 0; i + 1 < pool.size(); ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.uniform() *
                                                         static_cast<double>(pool.size() - i));
      std::swap(pool[i], pool[std::min(j, pool.size() - 1)]);
    }
    std::vector<std::size_t> set(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(half));
    std::sort(set.begin(), set.end());
    if (!seen.insert(set).second) continue;
    std::vector<double> v(n_pixels, -1.0);
    for (std::size_t p : set) v[p] = 1.0;
    maps.emplace_back(d, std::move(v));
  }

  return SyntheticProblem{CandidateSet::from_maps(std::move(maps), k), std::move(true_map),
                          0};
}

std::vector<double> coverage_score(const CandidateSet& candidates, double radius) {
  const std::size_t d = candidates.d;
  std::vector<double> score(d * d, 0.0);
  for (std::size_t p = 0; p < d; ++p) {
    for (std::size_t q = 0; q < d; ++q) {
      std::size_t covered = 0;
      for (const auto& set : candidates.pixel_sets) {
        bool hit = false;
        for (std::size_t flat : set.pixels) {
          const double dp = std::fabs(static_cast<double>(flat / d) - static_cast<double>(p));
          const double dq = std::fabs(static_cast<double>(flat % d) - static_cast<double>(q));
          if (std::max(dp, dq) <= radius) {
            hit = true;
            break;
          }
        }
        if (hit) ++covered;
      }
      score[p * d + q] =
          static_cast<double>(covered) / static_cast<double>(candidates.count());
    }
  }
  return score;
}

} // namespace qem
