#include "doctest.h"

#include <cmath>

#include "catbound/quantum.hpp"
#include "helpers.hpp"

using namespace catbound;

namespace {

BipartiteKet seeded_ket(std::size_t d, std::minstd_rand& g) {
  return testing::ket_from_flat(oracle::random_unit(2 * d, g), d);
}

}  // namespace

TEST_CASE("ket construction enforces shape and norm") {
  CMatrix m(2, 2);
  m(0, 0) = 1.0;
  CHECK_NOTHROW(BipartiteKet::from_amplitudes(m));
  m(1, 1) = 1.0;
  CHECK_THROWS_AS(BipartiteKet::from_amplitudes(m), Error);
  const BipartiteKet k = BipartiteKet::normalize(m);
  CHECK(k.amp().frobenius_norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(BipartiteKet::normalize(CMatrix(2, 3)), Error);
  CHECK_THROWS_AS(BipartiteKet::normalize(CMatrix(3, 3)), DimensionError);
}

TEST_CASE("partial trace agrees with the brute-force oracle") {
  std::minstd_rand g(17);
  for (std::size_t d = 1; d <= 8; ++d) {
    for (int i = 0; i < 40; ++i) {
      const BipartiteKet k = seeded_ket(d, g);
      const auto want = oracle::partial_trace(testing::flat(k), d);
      const CatDensity got = partial_trace_env(k);
      for (int q = 0; q < 2; ++q)
        for (int qp = 0; qp < 2; ++qp) CHECK(std::abs(got(q, qp) - want[q][qp]) < 1e-14);
      CHECK_NOTHROW(got.validate());
    }
  }
}

TEST_CASE("bloch uses x = 2 Re rho12, y = -2 Im rho12, z = rho11 - rho22") {
  std::minstd_rand g(8);
  for (int i = 0; i < 200; ++i) {
    const BipartiteKet k = seeded_ket(3, g);
    const CatDensity rho = partial_trace_env(k);
    const auto want = oracle::bloch(testing::mat(rho));
    const BlochVector p = bloch(rho);
    CHECK(std::abs(p.x - want[0]) < 1e-14);
    CHECK(std::abs(p.y - want[1]) < 1e-14);
    CHECK(std::abs(p.z - want[2]) < 1e-14);
    const CatDensity back = from_bloch(p);
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(back.entries[j] - rho.entries[j]) < 1e-14);
  }
  // |+i> = (|1> + i|2>)/sqrt2 points along +y.
  const BlochVector py = bloch(pure_density(CVector{Complex(1 / std::sqrt(2.0)), Complex(0, 1 / std::sqrt(2.0))}));
  CHECK(py.y == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bloch(pure_density(CVector{1.0, 0.0})).z == 1.0);
}

TEST_CASE("probabilities, purity and eigenvalues") {
  std::minstd_rand g(23);
  for (int i = 0; i < 200; ++i) {
    const CatDensity rho = partial_trace_env(seeded_ket(4, g));
    CHECK(p_alive(rho) + p_dead(rho) == doctest::Approx(1.0).epsilon(1e-14));
    const double len = bloch(rho).length();
    CHECK(std::abs(rho.purity() - 0.5 * (1 + len * len)) < 1e-14);
    const auto ev = rho.eigenvalues();
    const auto want = oracle::eigenvalues(testing::mat(rho));
    CHECK(std::abs(ev[0] - want[0]) < 1e-12);
    CHECK(std::abs(ev[1] - want[1]) < 1e-12);
  }
  CatDensity bad = CatDensity::diag(0.7, 0.4);
  CHECK_THROWS(bad.validate());
}

TEST_CASE("Schmidt form reconstructs and orders the alive label") {
  std::minstd_rand g(31);
  for (std::size_t d = 1; d <= 8; ++d) {
    for (int i = 0; i < 40; ++i) {
      const BipartiteKet k = seeded_ket(d, g);
      const SchmidtForm f = schmidt(k);
      CHECK(testing::max_diff(reconstruct(f).amp(), k.amp()) < 1e-12);
      CHECK(f.coeff_alive * f.coeff_alive + f.coeff_dead * f.coeff_dead == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(std::norm(f.qubit_vecs[0][0]) >= std::norm(f.qubit_vecs[1][0]) - 1e-14);
      const auto ev = oracle::eigenvalues(oracle::partial_trace(testing::flat(k), d));
      const double hi = std::max(f.coeff_alive, f.coeff_dead), lo = std::min(f.coeff_alive, f.coeff_dead);
      CHECK(std::abs(hi * hi - ev[0]) < 1e-12);
      CHECK(std::abs(lo * lo - ev[1]) < 1e-12);
    }
  }
  const BipartiteKet product = tensor({0.6, 0.8}, CVector{1.0, 0.0, 0.0});
  const SchmidtForm f = schmidt(product);
  CHECK(f.rank_one);
  CHECK(testing::max_diff(reconstruct(f).amp(), product.amp()) < 1e-14);
}

TEST_CASE("trace distance and ray distance against oracles") {
  std::minstd_rand g(41);
  for (int i = 0; i < 200; ++i) {
    const BipartiteKet a = seeded_ket(3, g), b = seeded_ket(3, g);
    const CatDensity ra = partial_trace_env(a), rb = partial_trace_env(b);
    CHECK(std::abs(trace_distance(ra, rb) - oracle::trace_distance(testing::mat(ra), testing::mat(rb))) < 1e-12);
    CHECK(std::abs(trace_distance(ra, rb) - 0.5 * (bloch(ra) - bloch(rb)).length()) < 1e-14);
    const double inf = oracle::infidelity(testing::flat(a), testing::flat(b));
    CHECK(std::abs(ray_distance(a, b) - std::sqrt(std::max(0.0, inf))) < 1e-12);
  }
  // Global phase is invisible; tiny differences are not lost to cancellation.
  const BipartiteKet k = seeded_ket(2, g);
  CMatrix rotated = k.amp();
  CMatrix nudged = k.amp();
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t e = 0; e < 2; ++e) rotated(q, e) *= std::polar(1.0, 0.7);
  nudged(0, 0) += 1e-13;
  CHECK(ray_distance(k, BipartiteKet::normalize(rotated)) < 1e-15);
  const double r = ray_distance(k, BipartiteKet::normalize(nudged));
  CHECK(r > 0.0);
  CHECK(r < 2e-13);
}

TEST_CASE("combine reports norm deviation") {
  const BipartiteKet up = tensor({1.0, 0.0}, CVector{1.0, 0.0});
  const BipartiteKet down = tensor({0.0, 1.0}, CVector{0.0, 1.0});
  const Combination c = combine(std::sqrt(0.5), up, std::sqrt(0.5), down);
  CHECK_FALSE(c.norm_deviated);
  CHECK(c.raw_norm == doctest::Approx(1.0).epsilon(1e-15));
  const Combination dup = combine(std::sqrt(0.5), up, std::sqrt(0.5), up);
  CHECK(dup.norm_deviated);
  CHECK(dup.ket.amp().frobenius_norm() == doctest::Approx(1.0).epsilon(1e-15));
  const BipartiteKet other = tensor({1.0, 0.0}, CVector{1.0, 0.0, 0.0});
  CHECK_THROWS_AS(combine(1.0, up, 1.0, other), DimensionError);
}
