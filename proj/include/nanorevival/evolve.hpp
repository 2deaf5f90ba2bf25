#pragma once

#include <vector>

#include "nanorevival/rotorstate.hpp"

namespace nanorevival {

/// Band contracted over m: A(tau) = D + 2 sum_j W_j cos(pi tau (4j + 6)).
struct AlignmentKernel {
  double diagonal = 0.0;          // D
  std::vector<double> coherence;  // W_j, j = 0 .. j_max - 2

  explicit AlignmentKernel(const BandedDensity& band);
  AlignmentKernel(const ThermalRotorState& state) : AlignmentKernel(state.band) {}

  /// Free-evolution alignment at tau = t / T_rev.
  double operator()(double tau) const;
};

double unitary_alignment(const BandedDensity& band, double tau);
double unitary_alignment(const ThermalRotorState& state, double tau);

/// A_u e^{-gamma t} + (1 - e^{-gamma t}) / 3.
double decohered_alignment(double unitary_value, double gamma, double t);
/// A0 e^{-k^2 t^2} + (1 - e^{-k^2 t^2}) / 2.
double classical_shear_alignment(double initial_alignment, double kappa, double t);
/// 1/3 + e^{-gamma t} / 6.
double classical_baseline(double gamma, double t);

struct TimeGrid {
  double revivals = 3.0;      // grid spans tau in [0, revivals]
  int points = 2001;          // uniform points
  bool refine_revivals = true;
  double refine_width = 0.0;  // tau half-width of refined windows; 0 = 10 / (kappa T_rev)
  int refine_points = 201;    // points per refined window
};

/// Monotone tau grid: uniform samples plus dense windows at integer and half-integer tau.
std::vector<double> make_tau_grid(const TimeGrid& grid, double kappa_T_rev);

struct AlignmentTrace {
  std::vector<double> tau;
  std::vector<double> t_seconds;
  std::vector<double> alignment_unitary;
  std::vector<double> alignment_decohered;
  std::vector<double> alignment_classical;
  std::vector<double> envelope;
  std::size_t size() const { return tau.size(); }
};

struct TraceInputs {
  double revival_time_s = 0.0;
  double gamma = 0.0;               // total decoherence rate, 1/s
  double kappa = 0.0;               // shear rate, 1/s
  double initial_alignment = 1.0;   // A0 for the classical channel
};

/// Evaluates every channel on the tau grid; time points run in parallel.
AlignmentTrace trace(const AlignmentKernel& kernel, const TraceInputs& in, const std::vector<double>& tau);
/// Classical channels only; the unitary column carries the shear curve.
AlignmentTrace classical_trace(const TraceInputs& in, const std::vector<double>& tau);

} // namespace nanorevival
