#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nanorevival/rotorstate.hpp"

namespace nanorevival {

/// V_ext / B inside shell j: -(N/B) <j m|sin^2 b cos^2 a|j m'>, rows and columns m + j.
Eigen::MatrixXd vj_block(int j, double n_ext_over_B);

/// exp(-i pi tau (j(j+1) + V_j / B)) on shell j, rows and columns m + j.
Eigen::MatrixXcd propagator_j(int j, double n_ext_over_B, double tau);

enum class TorqueObservable { alignment, identity };

struct TorqueOptions {
  double n_ext_over_B = 0.0;
  /// Sum_j (2j+1)^2 above this streams shells instead of caching contracted blocks.
  double memory_cap = 2e9;
  TorqueObservable observable = TorqueObservable::alignment;
};

/// Alignment under the shell-conserving propagators sum_j U_j. Only the |dj| <= 2 band
/// of the initial state enters.
class TorqueEvolution {
 public:
  TorqueEvolution(const BandedDensity& band, const TorqueOptions& options);
  TorqueEvolution(const ThermalRotorState& state, const TorqueOptions& options)
      : TorqueEvolution(state.band, options) {}
  ~TorqueEvolution();
  TorqueEvolution(TorqueEvolution&&) noexcept;
  TorqueEvolution& operator=(TorqueEvolution&&) noexcept;

  bool cached() const;
  std::vector<double> alignment(const std::vector<double>& tau) const;
  double alignment(double tau) const { return alignment(std::vector<double>{tau}).front(); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Empty when N is well below kT; otherwise a perturbative-validity warning.
std::string torque_validity_warning(const ReducedParameters& p, double n_ext_over_B);

struct SweepRow {
  double n_ext_over_B;
  double alignment;
};

struct RevivalSweep {
  std::vector<SweepRow> rows;
  bool monotone = true;  // non-increasing within 1e-6
};

RevivalSweep revival_decay_sweep(const BandedDensity& band, int revival_index,
                                 const std::vector<double>& n_ext_over_B, double memory_cap = 2e9);

} // namespace nanorevival
