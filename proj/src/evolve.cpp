#include "nanorevival/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nanorevival/specfun.hpp"

namespace nanorevival {

AlignmentKernel::AlignmentKernel(const BandedDensity& band) {
  const int J = band.j_max();
  std::vector<double> rows;
  rows.reserve(2 * J + 1);
  for (int m = -J; m <= J; ++m) {
    KahanSum s;
    const int am = std::abs(m);
    for (int j = am; j <= J; ++j) s += band.at(j, 0, m) * specfun::cos2_element(j, j, am);
    rows.push_back(s.value());
  }
  diagonal = pairwise_sum(rows);

  coherence.assign(J >= 2 ? J - 1 : 0, 0.0);
  for (int j = 0; j + 2 <= J; ++j) {
    KahanSum s;
    for (int m = -j; m <= j; ++m) s += band.at(j, 1, m) * specfun::cos2_element(j, j + 2, std::abs(m));
    coherence[j] = s.value();
  }
}

double AlignmentKernel::operator()(double tau) const {
  // Only the fractional part matters: every phase factor (4j + 6) is even.
  const double f = tau - std::floor(tau);
  KahanSum s;
  for (std::size_t j = 0; j < coherence.size(); ++j) {
    const double w = coherence[j];
    if (w == 0.0) continue;
    s += w * std::cos(std::numbers::pi * f * (4.0 * static_cast<double>(j) + 6.0));
  }
  return diagonal + 2.0 * s.value();
}

double unitary_alignment(const BandedDensity& band, double tau) { return AlignmentKernel(band)(tau); }
double unitary_alignment(const ThermalRotorState& state, double tau) {
  return AlignmentKernel(state.band)(tau);
}

double decohered_alignment(double unitary_value, double gamma, double t) {
  if (!(gamma >= 0.0) || !(t >= 0.0)) throw std::invalid_argument("gamma and t must be non-negative");
  const double e = std::exp(-gamma * t);
  return unitary_value * e + (1.0 - e) / 3.0;
}

double classical_shear_alignment(double initial_alignment, double kappa, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("t must be non-negative");
  const double g = std::exp(-kappa * kappa * t * t);
  return initial_alignment * g + 0.5 * (1.0 - g);
}

double classical_baseline(double gamma, double t) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be non-negative");
  return 1.0 / 3.0 + std::exp(-gamma * t) / 6.0;
}

std::vector<double> make_tau_grid(const TimeGrid& grid, double kappa_T_rev) {
  if (!(grid.revivals > 0.0)) throw std::invalid_argument("grid must span a positive number of revivals");
  if (grid.points < 2) throw std::invalid_argument("grid needs at least two points");
  std::vector<double> tau;
  tau.reserve(grid.points);
  for (int i = 0; i < grid.points; ++i)
    tau.push_back(grid.revivals * static_cast<double>(i) / (grid.points - 1));
  if (grid.refine_revivals) {
    const double width = grid.refine_width > 0.0 ? grid.refine_width
                         : kappa_T_rev > 0.0     ? 10.0 / kappa_T_rev
                                                 : 0.0;
    if (width > 0.0 && grid.refine_points > 1) {
      const int centers = static_cast<int>(std::floor(2.0 * grid.revivals));
      for (int c = 0; c <= centers; ++c) {
        const double center = 0.5 * c;
        for (int i = 0; i < grid.refine_points; ++i) {
          const double x = center - width + 2.0 * width * i / (grid.refine_points - 1);
          if (x >= 0.0 && x <= grid.revivals) tau.push_back(x);
        }
      }
    }
  }
  std::sort(tau.begin(), tau.end());
  tau.erase(std::unique(tau.begin(), tau.end()), tau.end());
  return tau;
}

namespace {

AlignmentTrace frame(const TraceInputs& in, const std::vector<double>& tau) {
  if (!std::is_sorted(tau.begin(), tau.end())) throw std::invalid_argument("tau grid must be monotone");
  if (!(in.revival_time_s > 0.0)) throw std::invalid_argument("revival time must be positive");
  AlignmentTrace out;
  const std::size_t n = tau.size();
  out.tau = tau;
  out.t_seconds.resize(n);
  out.alignment_unitary.resize(n);
  out.alignment_decohered.resize(n);
  out.alignment_classical.resize(n);
  out.envelope.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = tau[i] * in.revival_time_s;
    out.t_seconds[i] = t;
    out.envelope[i] = std::exp(-in.gamma * t);
    out.alignment_classical[i] =
        decohered_alignment(classical_shear_alignment(in.initial_alignment, in.kappa, t), in.gamma, t);
  }
  return out;
}

} // namespace

AlignmentTrace trace(const AlignmentKernel& kernel, const TraceInputs& in, const std::vector<double>& tau) {
  AlignmentTrace out = frame(in, tau);
  parallel_for(tau.size(), [&](std::size_t i) { out.alignment_unitary[i] = kernel(tau[i]); });
  for (std::size_t i = 0; i < tau.size(); ++i)
    out.alignment_decohered[i] = decohered_alignment(out.alignment_unitary[i], in.gamma, out.t_seconds[i]);
  return out;
}

AlignmentTrace classical_trace(const TraceInputs& in, const std::vector<double>& tau) {
  AlignmentTrace out = frame(in, tau);
  for (std::size_t i = 0; i < tau.size(); ++i) {
    out.alignment_unitary[i] = classical_shear_alignment(in.initial_alignment, in.kappa, out.t_seconds[i]);
    out.alignment_decohered[i] = decohered_alignment(out.alignment_unitary[i], in.gamma, out.t_seconds[i]);
  }
  return out;
}

} // namespace nanorevival
