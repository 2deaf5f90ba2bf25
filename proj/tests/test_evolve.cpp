#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nanorevival/evolve.hpp"
#include "oracles.hpp"

using namespace nanorevival;
using doctest::Approx;

namespace {
const ThermalRotorState& warm_state() {
  static const ThermalRotorState s = prepare_exact(ReducedParameters{200.0, 2000.0});
  return s;
}
} // namespace

TEST_CASE("two-level pure state") {
  // (|0 0> + |2 0>) / sqrt 2
  BandedDensity band(2, 1);
  band.at(0, 0, 0) = 0.5;
  band.at(2, 0, 0) = 0.5;
  band.at(0, 1, 0) = 0.5;
  const AlignmentKernel k(band);
  CHECK(k.diagonal == Approx(3.0 / 7.0).epsilon(1e-15));
  for (double tau : {0.0, 0.01, 0.1, 0.25, 0.37, 0.5, 1.0, 1.73, 12.5}) {
    const double expected = 3.0 / 7.0 + 2.0 / (3.0 * std::sqrt(5.0)) * std::cos(6.0 * oracle::pi * tau);
    CHECK(k(tau) == Approx(expected).epsilon(1e-14).scale(1.0));
  }
}

TEST_CASE("free evolution matches a dense propagator") {
  const double kT = 5.0, v0 = 20.0;
  const oracle::DenseBasis b(10);
  const Eigen::MatrixXd rho = oracle::dense_thermal_state(b, kT, v0);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(b.size(), b.size());
  for (int r = 0; r < b.size(); ++r) h(r, r) = b.states[r].first * (b.states[r].first + 1.0);
  const std::vector<double> taus{0.0, 0.013, 0.1, 0.25, 0.5, 0.77, 1.0, 2.31};
  const auto ref = oracle::dense_alignment(rho, h, oracle::dense_cos2(b), taus);

  ExactOptions opt;
  opt.truncation.j_max = 10;
  opt.truncation.tail_epsilon = 1.0;
  const auto s = prepare_exact(ReducedParameters{kT, v0}, opt);
  const AlignmentKernel k(s);
  for (std::size_t i = 0; i < taus.size(); ++i) CHECK(k(taus[i]) == Approx(ref[i]).epsilon(1e-12));
}

TEST_CASE("full revivals return the initial alignment") {
  const auto& s = warm_state();
  const AlignmentKernel k(s);
  const double a0 = k(0.0);
  CHECK(a0 == Approx(initial_alignment(s)).epsilon(1e-13));
  for (int n = 1; n <= 100; ++n) CHECK(std::abs(k(static_cast<double>(n)) - a0) <= 1e-10);
  CHECK(unitary_alignment(s, 7.0) == k(7.0));
}

TEST_CASE("half revival mirrors about the diagonal") {
  const AlignmentKernel k(warm_state());
  for (int n = 0; n <= 20; ++n) {
    const double tau = n + 0.5;
    CHECK(k(tau) == Approx(2.0 * k.diagonal - k(static_cast<double>(n))).epsilon(1e-12));
  }
  CHECK(k(0.5) < 1.0 / 3.0);
}

TEST_CASE("time reversal and period") {
  const AlignmentKernel k(warm_state());
  for (double tau : {0.013, 0.21, 0.4999, 0.77}) {
    CHECK(k(-tau) == Approx(k(tau)).epsilon(1e-12));
    CHECK(k(1.0 - tau) == Approx(k(tau)).epsilon(1e-12));
    CHECK(k(tau + 3.0) == Approx(k(tau)).epsilon(1e-12));
  }
}

TEST_CASE("dephasing between revivals") {
  const AlignmentKernel k(warm_state());
  CHECK(std::abs(k(0.25) - k.diagonal) < 1e-3);
  CHECK(k.diagonal > 1.0 / 3.0);
  CHECK(k.diagonal < k(0.0));
}

TEST_CASE("decoherence and classical channels") {
  CHECK(decohered_alignment(0.9, 0.0, 1.0) == 0.9);
  CHECK(decohered_alignment(0.9, 5.0, 0.0) == 0.9);
  CHECK(decohered_alignment(0.9, 5.0, 1e3) == Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(decohered_alignment(0.9, 2.0, 0.5) == Approx(0.9 * std::exp(-1.0) + (1.0 - std::exp(-1.0)) / 3.0));
  CHECK(classical_shear_alignment(0.9, 0.0, 10.0) == 0.9);
  CHECK(classical_shear_alignment(0.9, 3.0, 1e3) == Approx(0.5).epsilon(1e-15));
  CHECK(classical_shear_alignment(0.9, 2.0, 0.5) == Approx(0.9 * std::exp(-1.0) + (1.0 - std::exp(-1.0)) / 2.0));
  CHECK(classical_baseline(0.0, 1.0) == Approx(0.5));
  CHECK(classical_baseline(1.0, 1e3) == Approx(1.0 / 3.0));
  // fully sheared then decohered equals the baseline
  for (double t : {0.1, 1.0, 4.0})
    CHECK(decohered_alignment(classical_shear_alignment(0.9, 1e6, t), 0.7, t) ==
          Approx(classical_baseline(0.7, t)).epsilon(1e-14));
}

TEST_CASE("tau grid") {
  TimeGrid g;
  g.revivals = 2.0;
  g.points = 101;
  g.refine_revivals = false;
  auto tau = make_tau_grid(g, 0.0);
  REQUIRE(tau.size() == 101);
  CHECK(tau.front() == 0.0);
  CHECK(tau.back() == 2.0);

  g.refine_revivals = true;
  g.refine_points = 11;
  tau = make_tau_grid(g, 1000.0);
  CHECK(std::is_sorted(tau.begin(), tau.end()));
  CHECK(std::adjacent_find(tau.begin(), tau.end()) == tau.end());
  CHECK(tau.size() > 101);
  const double width = 10.0 / 1000.0;
  for (double c : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const auto n = std::count_if(tau.begin(), tau.end(), [&](double x) { return std::abs(x - c) <= width; });
    CHECK(n >= 5);
  }
  CHECK(tau.back() == 2.0);
  CHECK_THROWS(make_tau_grid(TimeGrid{0.0}, 1.0));
}

TEST_CASE("trace columns") {
  const AlignmentKernel k(warm_state());
  TraceInputs in{3.9e-3, 7.0, 4000.0, k(0.0)};
  const std::vector<double> tau{0.0, 0.5, 1.0, 2.0};
  const auto tr = trace(k, in, tau);
  REQUIRE(tr.size() == 4);
  for (std::size_t i = 0; i < tau.size(); ++i) {
    CHECK(tr.t_seconds[i] == tau[i] * 3.9e-3);
    CHECK(tr.alignment_unitary[i] == k(tau[i]));
    CHECK(tr.envelope[i] == Approx(std::exp(-7.0 * tr.t_seconds[i])));
    CHECK(tr.alignment_decohered[i] == Approx(decohered_alignment(k(tau[i]), 7.0, tr.t_seconds[i])));
  }
  CHECK(tr.alignment_decohered[3] < tr.alignment_decohered[2]);
  CHECK(tr.alignment_classical[3] == Approx(classical_baseline(7.0, tr.t_seconds[3])).epsilon(1e-6));

  const auto cl = classical_trace(in, tau);
  CHECK(cl.alignment_unitary[0] == in.initial_alignment);
  CHECK(cl.alignment_decohered[2] == cl.alignment_classical[2]);
  CHECK_THROWS(trace(k, in, std::vector<double>{1.0, 0.0}));
}
