/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#ifndef QEM_CANDIDATES_HPP
#define QEM_CANDIDATES_HPP

#include <cstddef>
#include <filesystem>
#include <limits>
#include <vector>

#include "qem/phase_map.hpp"
#include "qem/rng.hpp"

namespace qem {

/// Half of all pixels, stored as sorted flat indices p * d + q.
struct PixelSet {
  std::vector<std::size_t> pixels;
  std::size_t size() const { return pixels.size(); }
  bool contains(std::size_t flat) const;
};

/// Relabeling of a pixel set onto the linear index range [0, d^2/2).
struct Bijection {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> beta_of_pixel; ///< size d^2; npos outside the set
  std::vector<std::size_t> pixel_of_beta; ///< size d^2/2
};

enum class BijectionStrategy { Raster, LocalityBalanced };

/// The d^2/2 pixels with the largest phase values; ties broken by raster
/// order (row-major ascending).
PixelSet build_pixel_set(const PhaseMap& map);

/// Raster: enumerate the set in row-major order. LocalityBalanced: of a small
/// family of space-filling enumerations (raster, column-major, both
/// boustrophedons, Hilbert curve) keep the one whose grid-adjacent members
/// receive the closest labels; never scores worse than raster.
Bijection build_bijection(const PixelSet& set, BijectionStrategy strategy, std::size_t d);

/// Hilbert-curve index of (p, q) on a 2^order x 2^order grid.
std::size_t hilbert_index(std::size_t p, std::size_t q, std::size_t side);

/// N hypothesis phase maps with their derived pixel sets and relabelings,
/// plus the electrons-per-subroutine count k.
struct CandidateSet {
  std::size_t d = 0;
  std::size_t k = 1;
  std::vector<PhaseMap> maps;
  std::vector<PixelSet> pixel_sets;
  std::vector<Bijection> bijections;

  std::size_t count() const { return maps.size(); }

  static CandidateSet from_maps(std::vector<PhaseMap> maps, std::size_t k,
                                BijectionStrategy strategy = BijectionStrategy::Raster);
  /// Loads every *.csv in the directory; files are ordered by their
  /// `# alpha=<index>` header.
  static CandidateSet load_directory(const std::filesystem::path& dir, std::size_t k,
                                     BijectionStrategy strategy = BijectionStrategy::Raster);
  void save_directory(const std::filesystem::path& dir) const;
};

/// Synthetic structure-search instance: the true map concentrates its phase
/// on a hot subset of the correct candidate's pixel set with mean pi/k over
/// that set; wrong candidates avoid the hot pixels, so their branch means are
/// exactly zero.
struct SyntheticProblem {
  CandidateSet candidates;
  PhaseMap true_map;
  std::size_t correct_alpha = 0;
};

SyntheticProblem make_synthetic_problem(std::size_t d, std::size_t n_candidates,
                                        std::size_t k, CounterRng& rng,
                                        double hot_fraction = 0.75);

/// Per-pixel fraction of candidates whose pixel set has a member within
/// `radius` (Chebyshev); diagnostic for inelastic resilience.
std::vector<double> coverage_score(const CandidateSet& candidates, double radius);

} // namespace qem

#endif
