#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nanorevival/numerics.hpp"
#include "nanorevival/physcore.hpp"

namespace nanorevival {

struct BasisTruncation {
  int j_max = 0;               // 0 selects the automatic rule
  double tail_epsilon = 1e-8;  // largest acceptable neglected Boltzmann weight
};

/// Thrown when the Boltzmann tail beyond j_max exceeds the requested tolerance.
class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, int j_max, double tail)
      : NumericalError(what), j_max_(j_max), tail_(tail) {}
  int j_max() const { return j_max_; }
  double tail_estimate() const { return tail_; }

 private:
  int j_max_;
  double tail_;
};

/// Automatic cutoff: ceil(sqrt((kT/B + sqrt(V0/B)) ln(1/eps))) + 8.
int automatic_j_max(const ReducedParameters& p, double tail_epsilon);

enum class Parity { even = 0, odd = 1 };

/// H/B restricted to {|j m> : j = parity (mod 2), |m| <= j <= j_max}, j ascending.
struct HamiltonianBlock {
  int m = 0;
  int j_first = 0;  // j of row 0; row r holds j_first + 2r
  std::vector<double> diag;
  std::vector<double> offdiag;
  std::size_t size() const { return diag.size(); }
};

HamiltonianBlock hamiltonian_block(int m, Parity parity, int j_max, double v0_over_B);

/// The |dj| <= 2k_max, dm = 0 band of a density operator in the |j m> basis.
/// at(j, k, m) is <j m|rho|j+2k m>; the lower triangle follows by symmetry.
class BandedDensity {
 public:
  BandedDensity() = default;
  BandedDensity(int j_max, int max_offset = 1);

  int j_max() const { return j_max_; }
  int max_offset() const { return max_offset_; }

  double& at(int j, int k, int m) { return data_[index(j, k, m)]; }
  double at(int j, int k, int m) const { return data_[index(j, k, m)]; }
  /// Symmetric closure, zero outside the stored band.
  double element(int j, int j_prime, int m) const;

  double trace() const;
  double mean_j() const;
  void scale(double factor);

  const std::vector<double>& raw() const { return data_; }
  std::vector<double>& raw() { return data_; }

 private:
  std::size_t index(int j, int k, int m) const {
    const int am = m < 0 ? -m : m;
    return row_start_[static_cast<std::size_t>(m + j_max_)] +
           static_cast<std::size_t>(j - am) * static_cast<std::size_t>(max_offset_ + 1) +
           static_cast<std::size_t>(k);
  }

  int j_max_ = 0;
  int max_offset_ = 1;
  std::vector<std::size_t> row_start_;
  std::vector<double> data_;
};

/// One diagonalized (m, parity) block, m >= 0; the -m block is identical.
struct EigenBlock {
  int m = 0;
  Parity parity = Parity::even;
  int j_first = 0;
  TridiagonalEigen eigen;       // energies in units of B
  std::vector<double> weights;  // normalized Boltzmann weight of each kept eigenstate
};

struct ThermalRotorState {
  ReducedParameters reduced{};
  double temperature_K = 0.0;
  double v0_J = 0.0;
  double energy_unit_J = 0.0;
  int j_max = 0;
  double tail_estimate = 0.0;
  double ground_energy = 0.0;   // lowest eigenvalue, units of B
  double log_partition = 0.0;   // ln sum exp(-(E - E_ground)/kT)
  bool has_eigenvectors = false;
  std::vector<EigenBlock> blocks;
  BandedDensity band;
};

struct ExactOptions {
  BasisTruncation truncation;
  bool keep_eigenvectors = false;
  /// Eigenstates more than this many kT above the ground state are dropped.
  double energy_window_kT = 60.0;
};

/// Exact diagonalization in reduced units. Throws TruncationError when the tail
/// estimate exceeds truncation.tail_epsilon.
ThermalRotorState prepare_exact(const ReducedParameters& p, const ExactOptions& options = {});
ThermalRotorState prepare_exact(const RotorSpec& spec, const TrapSpec& trap, double temperature_K,
                                const ExactOptions& options = {});

/// Semiclassical band from the Bessel-function matrix elements, trace renormalized to 1.
/// Sets *warning when kT < B.
BandedDensity prepare_semiclassical(const ReducedParameters& p, const BasisTruncation& truncation,
                                    int max_offset = 1, std::string* warning = nullptr);
BandedDensity prepare_semiclassical(const RotorSpec& spec, const TrapSpec& trap,
                                    double temperature_K, const BasisTruncation& truncation,
                                    int max_offset = 1, std::string* warning = nullptr);

/// Boltzmann weight beyond j_max, extrapolated geometrically from the two outermost shells.
double band_tail_estimate(const BandedDensity& band, const ReducedParameters& p);

/// tr(rho cos^2 beta) from the band.
double initial_alignment(const BandedDensity& band);
double initial_alignment(const ThermalRotorState& state);
/// Leading-order deep-trap estimate 1 - kT/V0.
double asymptotic_alignment(const ReducedParameters& p);

/// Boltzmann alignment of a classical rotor, integral of x^2 exp(a x^2) over [0, 1]
/// normalized, with a = V0/kT.
double classical_alignment(double v0_over_kT);

/// ln Z = 2 ln(kT/B) - ln(2 V0/B) + V0/kT, deep-trap asymptotics (energies from the
/// classical zero of the free rotor).
double partition_function_asymptotic(const ReducedParameters& p);
double partition_function_asymptotic(const RotorSpec& spec, const TrapSpec& trap,
                                     double temperature_K);

/// ln Z of an exact state, referenced to the same zero as the asymptotic form.
double log_partition_exact(const ThermalRotorState& state);

/// On-disk cache of a band keyed by a content hash string.
void save_band(const std::filesystem::path& path, const std::string& key, const BandedDensity& band);
std::optional<BandedDensity> load_band(const std::filesystem::path& path, const std::string& key);

} // namespace nanorevival
