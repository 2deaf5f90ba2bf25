#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "nanorevival/rotorstate.hpp"
#include "oracles.hpp"

using namespace nanorevival;
using doctest::Approx;

TEST_CASE("hamiltonian block assembly") {
  const auto free = hamiltonian_block(3, Parity::odd, 11, 0.0);
  CHECK(free.j_first == 3);
  REQUIRE(free.size() == 5);
  for (std::size_t r = 0; r < free.size(); ++r) {
    const int j = 3 + 2 * static_cast<int>(r);
    CHECK(free.diag[r] == j * (j + 1.0));
  }
  for (double e : free.offdiag) CHECK(e == 0.0);

  const auto b = hamiltonian_block(0, Parity::even, 2, 1.0);
  REQUIRE(b.size() == 2);
  CHECK(b.diag[0] == Approx(-1.0 / 3.0).epsilon(1e-15));
  CHECK(b.diag[1] == Approx(6.0 - 11.0 / 21.0).epsilon(1e-15));
  CHECK(b.offdiag[0] == Approx(-2.0 / (3.0 * std::sqrt(5.0))).epsilon(1e-15));

  CHECK(hamiltonian_block(2, Parity::odd, 6, 1.0).j_first == 3);
  CHECK_THROWS_AS(hamiltonian_block(5, Parity::odd, 4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(hamiltonian_block(0, static_cast<Parity>(2), 4, 1.0), std::invalid_argument);
}

TEST_CASE("m = 0 spectrum matches Legendre collocation") {
  const double v0 = 10.0;
  std::vector<double> ours;
  for (auto par : {Parity::even, Parity::odd}) {
    const auto h = hamiltonian_block(0, par, 40, v0);
    const auto eig = tridiagonal_eigen(h.diag, h.offdiag, false);
    ours.insert(ours.end(), eig.values.begin(), eig.values.end());
  }
  std::sort(ours.begin(), ours.end());
  const auto ref = oracle::collocation_m0_spectrum(v0, 41);
  for (int k = 0; k < 20; ++k) CHECK(ours[k] == Approx(ref[k]).epsilon(1e-8).scale(1.0));
}

TEST_CASE("free rotor state") {
  ExactOptions opt;
  const auto cold = prepare_exact(ReducedParameters{0.1, 0.0}, opt);
  CHECK(cold.band.trace() == Approx(1.0).epsilon(1e-12));
  CHECK(cold.band.at(0, 0, 0) == Approx(1.0).epsilon(1e-8));
  CHECK(initial_alignment(cold) == Approx(1.0 / 3.0).epsilon(1e-12));

  for (double kT : {3.0, 50.0, 400.0}) {
    const auto s = prepare_exact(ReducedParameters{kT, 0.0}, opt);
    CHECK(std::abs(initial_alignment(s) - 1.0 / 3.0) < 1e-10);
  }
}

TEST_CASE("mean j of a warm free rotor") {
  // kT = 400 B; the physcore closed form in reduced units is sqrt(pi kT / 4B).
  const auto s = prepare_exact(ReducedParameters{400.0, 0.0});
  CHECK(s.band.mean_j() == Approx(std::sqrt(std::numbers::pi * 400.0 / 4.0)).epsilon(0.03));
}

TEST_CASE("state invariants") {
  ExactOptions opt;
  opt.keep_eigenvectors = true;
  const auto s = prepare_exact(ReducedParameters{40.0, 400.0}, opt);
  KahanSum total;
  for (const auto& blk : s.blocks) {
    for (double w : blk.weights) {
      CHECK(w >= 0.0);
      total += (blk.m == 0 ? 1.0 : 2.0) * w;
    }
    const std::size_t n = blk.eigen.size;
    for (std::size_t a = 0; a < blk.eigen.count(); a += 3)
      for (std::size_t b = a; b < blk.eigen.count(); b += 5) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += blk.eigen.vector(a, i) * blk.eigen.vector(b, i);
        CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-10);
      }
  }
  CHECK(total.value() == Approx(1.0).epsilon(1e-12));
  CHECK(s.band.trace() == Approx(1.0).epsilon(1e-10));
  const int J = s.j_max;
  for (int m = -J; m <= J; ++m)
    for (int j = std::abs(m); j <= J; ++j) {
      CHECK(s.band.at(j, 0, m) >= -1e-12);
      CHECK(s.band.at(j, 0, m) == s.band.at(j, 0, -m));
      if (j + 2 <= J) {
        const double bound = std::sqrt(s.band.at(j, 0, m) * s.band.at(j + 2, 0, m)) + 1e-12;
        CHECK(std::abs(s.band.at(j, 1, m)) <= bound);
        CHECK(s.band.element(j + 2, j, m) == s.band.at(j, 1, m));
      }
      CHECK(s.band.element(j, j + 1, m) == 0.0);
    }
}

TEST_CASE("deep trap alignment against the leading-order estimate") {
  // kT / V0 = 0.02 with kT = 2000 B.
  const ReducedParameters p{2000.0, 1e5};
  const auto s = prepare_exact(p);
  const double a = initial_alignment(s);
  CHECK(std::abs((1.0 - a) - (1.0 - asymptotic_alignment(p))) / (1.0 - a) < 0.05);
  CHECK(asymptotic_alignment(ReducedParameters{1.0, 20.0}) == Approx(0.95));
}

TEST_CASE("high temperature approaches the classical Boltzmann alignment") {
  for (double a : {0.0, 0.1, 1.0, 5.0, 50.0, 2000.0})
    CHECK(classical_alignment(a) == Approx(oracle::classical_alignment_simpson(a)).epsilon(1e-9));
  const ReducedParameters p{3000.0, 300.0};
  const auto s = prepare_exact(p);
  const double exact = initial_alignment(s);
  CHECK(exact == Approx(classical_alignment(0.1)).epsilon(2e-3));
  CHECK(std::abs(exact - 1.0 / 3.0) < 0.02);
}

TEST_CASE("asymptotic partition function") {
  const ReducedParameters p{5000.0, 1e5};
  // k T d lnZ / d V0 = 1 - kT / V0 for the closed form.
  const double h = 1.0;
  const double d = (partition_function_asymptotic({p.kT_over_B, p.v0_over_B + h}) -
                    partition_function_asymptotic({p.kT_over_B, p.v0_over_B - h})) /
                   (2.0 * h);
  CHECK(p.kT_over_B * d == Approx(1.0 - p.kT_over_B / p.v0_over_B).epsilon(1e-8));
  CHECK(partition_function_asymptotic({p.kT_over_B, 2e5}) > partition_function_asymptotic(p));

  // Exact state: finite difference of ln Z at kT / V0 = 0.05.
  const ReducedParameters q{1000.0, 2e4};
  const double dv = 50.0;
  const double lz_hi = log_partition_exact(prepare_exact({q.kT_over_B, q.v0_over_B + dv}));
  const double lz_lo = log_partition_exact(prepare_exact({q.kT_over_B, q.v0_over_B - dv}));
  const double exact_slope = q.kT_over_B * (lz_hi - lz_lo) / (2.0 * dv);
  CHECK(exact_slope == Approx(1.0 - q.kT_over_B / q.v0_over_B).epsilon(0.05));
  CHECK(exact_slope == Approx(initial_alignment(prepare_exact(q))).epsilon(1e-3));
}

TEST_CASE("truncation failure carries the tail estimate") {
  ExactOptions opt;
  opt.truncation.j_max = 10;
  try {
    prepare_exact(ReducedParameters{50.0, 10.0}, opt);
    FAIL("expected TruncationError");
  } catch (const TruncationError& e) {
    CHECK(e.j_max() == 10);
    CHECK(e.tail_estimate() > opt.truncation.tail_epsilon);
  }
  CHECK(automatic_j_max(ReducedParameters{100.0, 0.0}, 1e-8) ==
        static_cast<int>(std::ceil(std::sqrt(100.0 * std::log(1e8)))) + 8);
}

TEST_CASE("semiclassical band") {
  const ReducedParameters p{2000.0, 4e4};
  const auto sc = prepare_semiclassical(p, BasisTruncation{});
  CHECK(sc.trace() == Approx(1.0).epsilon(1e-12));
  // Diagonal elements follow I0(z) exp(z) exp(-(2j+1)^2 B / 4kT) up to normalization.
  const int j = 100, m = 7;
  const double s = 2.0 * j + 1.0;
  const double z = p.v0_over_B / (2.0 * p.kT_over_B) * (1.0 - 4.0 * m * m / (s * s));
  const double s0 = 1.0;
  const double z0 = p.v0_over_B / (2.0 * p.kT_over_B);
  const double ratio = std::exp(specfun::log_bessel_i_scaled(0, z) + 2.0 * z - s * s / (4.0 * p.kT_over_B) -
                                (specfun::log_bessel_i_scaled(0, z0) + 2.0 * z0 - s0 * s0 / (4.0 * p.kT_over_B)));
  CHECK(sc.at(j, 0, m) / sc.at(0, 0, 0) == Approx(ratio).epsilon(1e-12));
  CHECK(sc.element(j, j + 1, m) == 0.0);

  std::string warning;
  prepare_semiclassical(ReducedParameters{0.5, 2.0}, BasisTruncation{}, 1, &warning);
  CHECK_FALSE(warning.empty());

  // Alignment agrees with the exact state in the semiclassical regime.
  const auto ex = prepare_exact(p);
  CHECK(initial_alignment(sc) == Approx(initial_alignment(ex)).epsilon(2e-3));
}

TEST_CASE("band cache round trip") {
  const auto s = prepare_exact(ReducedParameters{20.0, 50.0});
  const auto path = std::filesystem::temp_directory_path() / "nanorevival_band_test.nrvband";
  save_band(path, "abc", s.band);
  const auto back = load_band(path, "abc");
  REQUIRE(back.has_value());
  CHECK(back->raw() == s.band.raw());
  CHECK_FALSE(load_band(path, "other").has_value());
  std::filesystem::remove(path);
}
