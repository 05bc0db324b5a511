/**
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE.txt file in the root directory of this source tree.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qem/statevector.hpp"

using namespace qem;

namespace {

constexpr double kPi = std::numbers::pi;

using Matrix = std::vector<std::vector<cplx>>;

Matrix identity(std::size_t n) {
  Matrix m(n, std::vector<cplx>(n, cplx{0, 0}));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = cplx{1, 0};
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  const std::size_t ra = a.size(), ca = a[0].size(), rb = b.size(), cb = b[0].size();
  Matrix m(ra * rb, std::vector<cplx>(ca * cb, cplx{0, 0}));
  for (std::size_t i = 0; i < ra; ++i)
    for (std::size_t j = 0; j < ca; ++j)
      for (std::size_t p = 0; p < rb; ++p)
        for (std::size_t q = 0; q < cb; ++q) m[i * rb + p][j * cb + q] = a[i][j] * b[p][q];
  return m;
}

/// Independent brute-force oracle: lift a single-subregister gate to the full
/// space by Kronecker products and multiply naively.
Matrix lift(const RegisterLayout& layout, std::size_t sub, const Matrix& gate) {
  Matrix m = identity(1);
  for (std::size_t i = 0; i < layout.num_subregisters(); ++i)
    m = kron(m, i == sub ? gate : identity(layout.dim(i)));
  return m;
}

std::vector<cplx> matvec(const Matrix& m, std::span<const cplx> v) {
  std::vector<cplx> out(m.size(), cplx{0, 0});
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Matrix dft_matrix(std::size_t n, double sign) {
  Matrix m(n, std::vector<cplx>(n));
  const double inv = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      m[k][j] = std::polar(inv, sign * 2.0 * kPi * static_cast<double>(j * k) /
                                    static_cast<double>(n));
  return m;
}

} // namespace

TEST_CASE("basis state construction") {
  {
    const std::size_t idx[] = {0};
    auto s = StateVector::basis_state(RegisterLayout({2}), idx);
    CHECK(s.amp(0) == cplx{1, 0});
    CHECK(s.amp(1) == cplx{0, 0});
  }
  {
    const std::size_t idx[] = {1, 0};
    auto s = StateVector::basis_state(RegisterLayout({2, 2}), idx);
    CHECK(s.amp(2) == cplx{1, 0}); // row-major flat index
  }
  {
    const std::size_t idx[] = {5};
    CHECK_THROWS_AS(StateVector::basis_state(RegisterLayout({4}), idx),
                    std::invalid_argument);
  }
}

TEST_CASE("layout validation") {
  CHECK_THROWS_AS(RegisterLayout({0}), std::invalid_argument);
  CHECK_THROWS_AS(RegisterLayout({1 << 12, 1 << 12}), std::invalid_argument); // over cap
  CHECK_NOTHROW(RegisterLayout({1 << 12, 1 << 12}, {}, std::size_t{1} << 24));
}

TEST_CASE("diagonal phase") {
  const std::size_t subs[] = {0};

  SUBCASE("all zero phases is the identity") {
    auto s = StateVector::uniform(RegisterLayout({4}));
    const std::vector<double> zero(4, 0.0);
    const std::vector<cplx> before(s.amps().begin(), s.amps().end());
    s.apply_diagonal_phase(subs, zero);
    CHECK(max_diff(before, s.amps()) == 0.0);
  }

  SUBCASE("pi flips the sign") {
    auto s = StateVector::uniform(RegisterLayout({2}));
    const std::vector<double> phases = {0.0, kPi};
    s.apply_diagonal_phase(subs, phases);
    CHECK(s.amp(0).real() == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(s.amp(1).real() == doctest::Approx(-1 / std::sqrt(2.0)).epsilon(1e-14));
  }

  SUBCASE("matches an explicit diagonal matrix") {
    CounterRng rng(71);
    RegisterLayout layout({4});
    auto s = random_state(layout, rng);
    std::vector<double> phases(4);
    for (double& p : phases) p = rng.uniform() * 2 * kPi;
    Matrix gate = identity(4);
    for (std::size_t i = 0; i < 4; ++i) gate[i][i] = std::polar(1.0, phases[i]);
    const auto expected = matvec(lift(layout, 0, gate), s.amps());
    s.apply_diagonal_phase(subs, phases);
    CHECK(max_diff(expected, s.amps()) < 1e-12);
  }

  SUBCASE("length mismatch is rejected") {
    auto s = StateVector::uniform(RegisterLayout({4}));
    const std::vector<double> wrong(3, 0.0);
    CHECK_THROWS_AS(s.apply_diagonal_phase(subs, wrong), std::invalid_argument);
  }
}

TEST_CASE("fourier transform") {
  SUBCASE("column zero is uniform") {
    const std::size_t idx[] = {0};
    auto s = StateVector::basis_state(RegisterLayout({4}), idx);
    s.apply_fourier(0, FourierDirection::Forward);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(s.amp(i) - cplx{0.5, 0}) < 1e-14);
  }

  SUBCASE("forward then inverse is the identity") {
    CounterRng rng(5);
    auto s = random_state(RegisterLayout({16}), rng);
    const std::vector<cplx> before(s.amps().begin(), s.amps().end());
    s.apply_fourier(0, FourierDirection::Forward);
    s.apply_fourier(0, FourierDirection::Inverse);
    CHECK(max_diff(before, s.amps()) < 1e-12);
  }

  SUBCASE("matches the dense DFT matrix") {
    CounterRng rng(6);
    RegisterLayout layout({8});
    auto s = random_state(layout, rng);
    const auto expected = matvec(lift(layout, 0, dft_matrix(8, +1.0)), s.amps());
    s.apply_fourier(0, FourierDirection::Forward);
    CHECK(max_diff(expected, s.amps()) < 1e-12);
  }

  SUBCASE("acts on one factor of a product register") {
    CounterRng rng(7);
    RegisterLayout layout({3, 4, 2});
    auto s = random_state(layout, rng);
    const auto expected = matvec(lift(layout, 1, dft_matrix(4, +1.0)), s.amps());
    s.apply_fourier(1, FourierDirection::Forward);
    CHECK(max_diff(expected, s.amps()) < 1e-12);
  }
}

TEST_CASE("permutations") {
  SUBCASE("identity and swap") {
    CounterRng rng(8);
    auto s = random_state(RegisterLayout({2}), rng);
    const cplx a = s.amp(0), b = s.amp(1);
    const std::size_t ident[] = {0, 1};
    s.apply_permutation(0, ident);
    CHECK(s.amp(0) == a);
    const std::size_t swp[] = {1, 0};
    s.apply_permutation(0, swp);
    CHECK(s.amp(0) == b);
    CHECK(s.amp(1) == a);
  }

  SUBCASE("non-bijective table is rejected") {
    auto s = StateVector::uniform(RegisterLayout({3}));
    const std::size_t bad[] = {0, 0, 2};
    CHECK_THROWS_AS(s.apply_permutation(0, bad), std::invalid_argument);
  }

  SUBCASE("controlled permutation matches the block-diagonal matrix") {
    CounterRng rng(9);
    RegisterLayout layout({2, 4});
    auto s = random_state(layout, rng);
    const std::vector<std::vector<std::size_t>> perms = {{2, 0, 3, 1}, {1, 2, 3, 0}};
    Matrix m(8, std::vector<cplx>(8, cplx{0, 0}));
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t j = 0; j < 4; ++j) m[c * 4 + perms[c][j]][c * 4 + j] = cplx{1, 0};
    const auto expected = matvec(m, s.amps());
    s.apply_controlled_permutation(0, 1, perms);
    CHECK(max_diff(expected, s.amps()) < 1e-12);
  }
}

TEST_CASE("grover diffusion") {
  const std::size_t subs[] = {0};

  SUBCASE("uniform superposition is a fixed point") {
    auto s = StateVector::uniform(RegisterLayout({8}));
    const std::vector<cplx> before(s.amps().begin(), s.amps().end());
    s.apply_grover_diffusion(subs);
    CHECK(max_diff(before, s.amps()) < 1e-14);
  }

  SUBCASE("hand-evaluated 4-dim case") {
    const std::size_t idx[] = {0};
    auto s = StateVector::basis_state(RegisterLayout({4}), idx);
    s.apply_grover_diffusion(subs);
    CHECK(s.amp(0).real() == doctest::Approx(-0.5).epsilon(1e-14));
    for (std::size_t i = 1; i < 4; ++i)
      CHECK(s.amp(i).real() == doctest::Approx(0.5).epsilon(1e-14));
  }

  SUBCASE("one marked iteration on 4 elements reaches certainty") {
    // sin((2s+1) asin(1/sqrt(4))) = sin(pi/2) = 1 at s = 1
    auto s = StateVector::uniform(RegisterLayout({4}));
    std::vector<double> phases(4, 0.0);
    phases[2] = kPi;
    s.apply_diagonal_phase(subs, phases);
    s.apply_grover_diffusion(subs);
    const auto marg = s.marginal(subs);
    CHECK(marg[2] == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("matches the dense reflection matrix 2/N - I") {
    CounterRng rng(10);
    RegisterLayout layout({2, 4});
    auto s = random_state(layout, rng);
    Matrix refl(4, std::vector<cplx>(4, cplx{0.5, 0}));
    for (std::size_t i = 0; i < 4; ++i) refl[i][i] -= cplx{1, 0};
    const auto expected = matvec(lift(layout, 1, refl), s.amps());
    const std::size_t target[] = {1};
    s.apply_grover_diffusion(target);
    CHECK(max_diff(expected, s.amps()) < 1e-12);
  }
}

TEST_CASE("measurement") {
  SUBCASE("basis state yields its own index with probability 1") {
    const std::size_t idx[] = {3};
    auto s = StateVector::basis_state(RegisterLayout({5}), idx);
    CounterRng rng(11);
    const auto rec = s.measure(0, rng);
    CHECK(rec.outcome == 3);
    CHECK(rec.probability == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("uniform qubit frequencies over 1e4 seeded samples") {
    CounterRng rng(12);
    std::size_t zeros = 0;
    const std::size_t n = 10000;
    for (std::size_t i = 0; i < n; ++i) {
      auto s = StateVector::uniform(RegisterLayout({2}));
      if (s.measure(0, rng).outcome == 0) ++zeros;
    }
    const double freq = static_cast<double>(zeros) / static_cast<double>(n);
    CHECK(std::fabs(freq - 0.5) < 0.02);
  }

  SUBCASE("entangled pair collapses jointly") {
    RegisterLayout layout({2, 2});
    std::vector<cplx> amps = {cplx{1, 0}, {}, {}, cplx{1, 0}};
    StateVector s(layout, std::move(amps), true);
    const auto rec = s.measure_forced(0, 0);
    CHECK(rec.probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(s.amp(0) - cplx{1, 0}) < 1e-12);
    for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(s.amp(i)) < 1e-12);
  }

  SUBCASE("marginals equal |amp|^2 sums exactly") {
    CounterRng rng(13);
    RegisterLayout layout({3, 2, 4});
    auto s = random_state(layout, rng);
    const std::size_t subs[] = {1};
    const auto marg = s.marginal(subs);
    double direct0 = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (layout.digit(i, 1) == 0) direct0 += std::norm(s.amp(i));
    CHECK(marg[0] == doctest::Approx(direct0).epsilon(1e-15));
    CHECK(marg[0] + marg[1] == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("forcing an impossible outcome is rejected") {
    const std::size_t idx[] = {0};
    auto s = StateVector::basis_state(RegisterLayout({4}), idx);
    CHECK_THROWS_AS(s.measure_forced(0, 2), std::invalid_argument);
  }
}

TEST_CASE("norm preservation across random states and operations") {
  CounterRng rng(14);
  for (std::size_t trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 2 + static_cast<std::size_t>(rng.uniform() * 1022);
    RegisterLayout layout({dim});
    auto s = random_state(layout, rng);
    const std::size_t subs[] = {0};

    std::vector<double> phases(dim);
    for (double& p : phases) p = rng.uniform() * 2 * kPi;
    s.apply_diagonal_phase(subs, phases);
    CHECK(std::fabs(s.norm() - 1.0) < 1e-10);

    s.apply_fourier(0, FourierDirection::Forward);
    CHECK(std::fabs(s.norm() - 1.0) < 1e-10);

    s.apply_grover_diffusion(subs);
    CHECK(std::fabs(s.norm() - 1.0) < 1e-10);

    s.measure(0, rng);
    CHECK(std::fabs(s.norm() - 1.0) < 1e-10);
  }
}

TEST_CASE("layout surgery") {
  SUBCASE("append, drop, merge round trip") {
    CounterRng rng(15);
    RegisterLayout layout({2, 3});
    auto s = random_state(layout, rng);
    const std::vector<cplx> before(s.amps().begin(), s.amps().end());

    const std::size_t e = s.append_subregister(4, "aux", 2);
    CHECK(e == 2);
    CHECK(s.size() == 24);
    CHECK(s.amp(0 * 4 + 2) == before[0]);

    s.drop_subregister(e);
    CHECK(s.size() == 6);
    CHECK(max_diff(before, s.amps()) < 1e-12);

    s.merge_subregisters(0, 2, "xy");
    CHECK(s.layout().num_subregisters() == 1);
    CHECK(max_diff(before, s.amps()) < 1e-12); // merging is a relabeling
  }

  SUBCASE("truncate requires an empty tail") {
    RegisterLayout layout({4});
    std::vector<cplx> amps = {cplx{1, 0}, cplx{1, 0}, {}, {}};
    StateVector s(layout, std::move(amps), true);
    s.truncate_subregister(0, 2);
    CHECK(s.size() == 2);
    CHECK(std::abs(s.amp(0).real() - 1 / std::sqrt(2.0)) < 1e-12);

    auto u = StateVector::uniform(RegisterLayout({4}));
    CHECK_THROWS_AS(u.truncate_subregister(0, 2), std::logic_error);
  }

  SUBCASE("dropping an indefinite subregister is rejected") {
    auto s = StateVector::uniform(RegisterLayout({2, 2}));
    CHECK_THROWS_AS(s.drop_subregister(0), std::logic_error);
  }
}

TEST_CASE("distance up to global phase") {
  CounterRng rng(16);
  RegisterLayout layout({8});
  auto a = random_state(layout, rng);
  std::vector<cplx> rotated(a.amps().begin(), a.amps().end());
  const cplx phase = std::polar(1.0, 1.234);
  for (cplx& v : rotated) v *= phase;
  const StateVector b(layout, std::move(rotated));
  CHECK(distance_up_to_phase(a, b) < 1e-12);

  auto c = random_state(layout, rng);
  CHECK(distance_up_to_phase(a, c) > 1e-3);
}
