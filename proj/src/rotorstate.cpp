#include "nanorevival/rotorstate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

#include "nanorevival/specfun.hpp"

namespace nanorevival {

using specfun::cos2_element;

int automatic_j_max(const ReducedParameters& p, double tail_epsilon) {
  if (!(tail_epsilon > 0.0 && tail_epsilon < 1.0))
    throw std::invalid_argument("tail_epsilon must lie in (0, 1)");
  const double scale = p.kT_over_B + std::sqrt(std::max(p.v0_over_B, 0.0));
  return static_cast<int>(std::ceil(std::sqrt(scale * std::log(1.0 / tail_epsilon)))) + 8;
}

HamiltonianBlock hamiltonian_block(int m, Parity parity, int j_max, double v0_over_B) {
  const int am = std::abs(m);
  const int p = static_cast<int>(parity);
  if (p != 0 && p != 1) throw std::invalid_argument("hamiltonian_block: invalid parity");
  const int j_first = (am % 2 == p) ? am : am + 1;
  if (j_max < j_first) throw std::invalid_argument("hamiltonian_block: empty (m, parity) block");
  HamiltonianBlock block;
  block.m = m;
  block.j_first = j_first;
  const int n = (j_max - j_first) / 2 + 1;
  block.diag.resize(n);
  block.offdiag.resize(n - 1);
  for (int r = 0; r < n; ++r) {
    const int j = j_first + 2 * r;
    block.diag[r] = static_cast<double>(j) * (j + 1) - v0_over_B * cos2_element(j, j, am);
    if (r + 1 < n) block.offdiag[r] = -v0_over_B * cos2_element(j, j + 2, am);
  }
  return block;
}

// ---------------------------------------------------------------------------

BandedDensity::BandedDensity(int j_max, int max_offset) : j_max_(j_max), max_offset_(max_offset) {
  if (j_max < 0) throw std::invalid_argument("BandedDensity: negative j_max");
  if (max_offset < 0) throw std::invalid_argument("BandedDensity: negative offset");
  row_start_.resize(2 * static_cast<std::size_t>(j_max) + 1);
  std::size_t total = 0;
  for (int m = -j_max; m <= j_max; ++m) {
    row_start_[m + j_max] = total;
    total += static_cast<std::size_t>(j_max - std::abs(m) + 1) * (max_offset + 1);
  }
  data_.assign(total, 0.0);
}

double BandedDensity::element(int j, int j_prime, int m) const {
  if (j > j_prime) std::swap(j, j_prime);
  const int d = j_prime - j;
  if (d % 2 != 0 || d / 2 > max_offset_) return 0.0;
  if (std::abs(m) > j || j_prime > j_max_) return 0.0;
  return at(j, d / 2, m);
}

double BandedDensity::trace() const {
  std::vector<double> rows;
  rows.reserve(2 * j_max_ + 1);
  for (int m = -j_max_; m <= j_max_; ++m) {
    KahanSum s;
    for (int j = std::abs(m); j <= j_max_; ++j) s += at(j, 0, m);
    rows.push_back(s.value());
  }
  return pairwise_sum(rows);
}

double BandedDensity::mean_j() const {
  std::vector<double> rows;
  rows.reserve(2 * j_max_ + 1);
  for (int m = -j_max_; m <= j_max_; ++m) {
    KahanSum s;
    for (int j = std::abs(m); j <= j_max_; ++j) s += j * at(j, 0, m);
    rows.push_back(s.value());
  }
  return pairwise_sum(rows) / trace();
}

void BandedDensity::scale(double factor) {
  for (double& x : data_) x *= factor;
}

// ---------------------------------------------------------------------------

namespace {

void check_reduced(const ReducedParameters& p) {
  if (!(p.kT_over_B > 0.0) || !std::isfinite(p.kT_over_B))
    throw std::invalid_argument("temperature must be positive");
  if (!(p.v0_over_B >= 0.0) || !std::isfinite(p.v0_over_B))
    throw std::invalid_argument("trap depth must be non-negative");
}

double shell_population(const BandedDensity& band, int j) {
  KahanSum s;
  for (int m = -j; m <= j; ++m) s += band.at(j, 0, m);
  return s.value();
}

} // namespace

double band_tail_estimate(const BandedDensity& band, const ReducedParameters& p) {
  const int J = band.j_max();
  if (J < 1) return 0.0;
  const double edge = 0.5 * (shell_population(band, J) + shell_population(band, J - 1));
  const double spread = std::max(p.kT_over_B, std::sqrt(p.v0_over_B));
  return edge * spread / (2.0 * J) / band.trace();
}

ThermalRotorState prepare_exact(const ReducedParameters& p, const ExactOptions& options) {
  check_reduced(p);
  const int J = options.truncation.j_max > 0 ? options.truncation.j_max
                                             : automatic_j_max(p, options.truncation.tail_epsilon);
  ThermalRotorState state;
  state.reduced = p;
  state.j_max = J;
  state.has_eigenvectors = options.keep_eigenvectors;
  state.band = BandedDensity(J, 1);

  struct Slot {
    int m;
    Parity parity;
  };
  std::vector<Slot> slots;
  for (int m = 0; m <= J; ++m)
    for (int par = 0; par < 2; ++par) {
      const int j_first = (m % 2 == par) ? m : m + 1;
      if (j_first <= J) slots.push_back({m, static_cast<Parity>(par)});
    }

  // The m = 0 blocks hold the ground state and fix the energy reference.
  double e_ref = std::numeric_limits<double>::infinity();
  for (int par = 0; par < 2 && par <= J; ++par) {
    const auto h = hamiltonian_block(0, static_cast<Parity>(par), J, p.v0_over_B);
    const auto eig = tridiagonal_eigen(h.diag, h.offdiag, false);
    if (eig.count() > 0) e_ref = std::min(e_ref, eig.values.front());
  }
  const double cutoff = e_ref + options.energy_window_kT * p.kT_over_B;

  state.blocks.resize(slots.size());
  std::vector<double> block_z(slots.size(), 0.0);
  auto& band = state.band;
  parallel_for(slots.size(), [&](std::size_t b) {
    const auto h = hamiltonian_block(slots[b].m, slots[b].parity, J, p.v0_over_B);
    EigenBlock& blk = state.blocks[b];
    blk.m = slots[b].m;
    blk.parity = slots[b].parity;
    blk.j_first = h.j_first;
    blk.eigen = tridiagonal_eigen(h.diag, h.offdiag, true, cutoff);
    const std::size_t n = h.size();
    const std::size_t kept = blk.eigen.count();
    blk.weights.resize(kept);
    KahanSum z;
    for (std::size_t k = 0; k < kept; ++k) {
      blk.weights[k] = std::exp(-(blk.eigen.values[k] - e_ref) / p.kT_over_B);
      z += blk.weights[k];
    }
    block_z[b] = (blk.m == 0 ? 1.0 : 2.0) * z.value();

    std::vector<double> diag(n, 0.0), up(n > 0 ? n - 1 : 0, 0.0);
    for (std::size_t k = 0; k < kept; ++k) {
      const double w = blk.weights[k];
      const double* v = blk.eigen.vectors.data() + k * n;
      for (std::size_t r = 0; r < n; ++r) diag[r] += w * v[r] * v[r];
      for (std::size_t r = 0; r + 1 < n; ++r) up[r] += w * v[r] * v[r + 1];
    }
    for (std::size_t r = 0; r < n; ++r) {
      const int j = h.j_first + 2 * static_cast<int>(r);
      for (int m : {blk.m, -blk.m}) {
        band.at(j, 0, m) = diag[r];
        if (r + 1 < n) band.at(j, 1, m) = up[r];
      }
    }
    if (!options.keep_eigenvectors) {
      blk.eigen.vectors.clear();
      blk.eigen.vectors.shrink_to_fit();
    }
  });

  const double z = pairwise_sum(block_z);
  if (!(z > 0.0) || !std::isfinite(z)) throw NumericalError("partition sum is not finite and positive");
  band.scale(1.0 / z);
  for (auto& blk : state.blocks)
    for (double& w : blk.weights) w /= z;

  state.ground_energy = e_ref;
  state.log_partition = std::log(z);
  state.tail_estimate = band_tail_estimate(band, p);
  if (state.tail_estimate > options.truncation.tail_epsilon)
    throw TruncationError("Boltzmann tail " + std::to_string(state.tail_estimate) +
                              " exceeds tolerance at j_max = " + std::to_string(J),
                          J, state.tail_estimate);
  return state;
}

ThermalRotorState prepare_exact(const RotorSpec& spec, const TrapSpec& trap, double temperature_K,
                                const ExactOptions& options) {
  const double v0 = trap_depth(spec, trap);
  auto state = prepare_exact(reduce(spec, v0, temperature_K), options);
  state.temperature_K = temperature_K;
  state.v0_J = v0;
  state.energy_unit_J = rotational_energy_unit(spec);
  return state;
}

BandedDensity prepare_semiclassical(const ReducedParameters& p, const BasisTruncation& truncation,
                                    int max_offset, std::string* warning) {
  check_reduced(p);
  if (max_offset < 1) throw std::invalid_argument("semiclassical band needs max_offset >= 1");
  if (warning) {
    warning->clear();
    if (p.kT_over_B < 1.0) *warning = "kT < B: semiclassical matrix elements are unreliable";
  }
  const int J = truncation.j_max > 0 ? truncation.j_max : automatic_j_max(p, truncation.tail_epsilon);
  BandedDensity band(J, max_offset);
  const double a = p.v0_over_B / (2.0 * p.kT_over_B);

  auto log_element = [&](int j, int k, int m) {
    const double s = 2.0 * j + 2.0 * k + 1.0;  // j + j' + 1
    const double z = a * (1.0 - 4.0 * m * static_cast<double>(m) / (s * s));
    return specfun::log_bessel_i_scaled(k, z) + 2.0 * z - s * s / (4.0 * p.kT_over_B);
  };

  // Rows m >= 0 are computed in parallel and mirrored; the largest log fixes the scale.
  std::vector<double> row_max(J + 1, -std::numeric_limits<double>::infinity());
  parallel_for(static_cast<std::size_t>(J) + 1, [&](std::size_t mi) {
    const int m = static_cast<int>(mi);
    for (int j = m; j <= J; ++j)
      for (int k = 0; k <= max_offset && j + 2 * k <= J; ++k) {
        const double v = log_element(j, k, m);
        band.at(j, k, m) = v;
        row_max[mi] = std::max(row_max[mi], v);
      }
  });
  const double peak = *std::max_element(row_max.begin(), row_max.end());
  parallel_for(static_cast<std::size_t>(J) + 1, [&](std::size_t mi) {
    const int m = static_cast<int>(mi);
    for (int j = m; j <= J; ++j)
      for (int k = 0; k <= max_offset && j + 2 * k <= J; ++k) {
        const double v = std::exp(band.at(j, k, m) - peak);
        band.at(j, k, m) = v;
        band.at(j, k, -m) = v;
      }
  });
  band.scale(1.0 / band.trace());
  return band;
}

BandedDensity prepare_semiclassical(const RotorSpec& spec, const TrapSpec& trap,
                                    double temperature_K, const BasisTruncation& truncation,
                                    int max_offset, std::string* warning) {
  return prepare_semiclassical(reduce(spec, trap_depth(spec, trap), temperature_K), truncation,
                               max_offset, warning);
}

double initial_alignment(const BandedDensity& band) {
  const int J = band.j_max();
  std::vector<double> rows;
  rows.reserve(2 * J + 1);
  for (int m = -J; m <= J; ++m) {
    KahanSum s;
    const int am = std::abs(m);
    for (int j = am; j <= J; ++j) {
      s += band.at(j, 0, m) * cos2_element(j, j, am);
      if (j + 2 <= J) s += 2.0 * band.at(j, 1, m) * cos2_element(j, j + 2, am);
    }
    rows.push_back(s.value());
  }
  return pairwise_sum(rows);
}

double initial_alignment(const ThermalRotorState& state) { return initial_alignment(state.band); }

double asymptotic_alignment(const ReducedParameters& p) { return 1.0 - p.kT_over_B / p.v0_over_B; }

double classical_alignment(double a) {
  if (!(a >= 0.0)) throw std::invalid_argument("classical_alignment: V0/kT must be non-negative");
  // Integrands scaled by exp(-a) so that deep traps do not overflow; panels are
  // refined geometrically toward x = 1 where the weight concentrates.
  static const QuadratureRule rule = gauss_legendre(24);
  std::vector<double> edges{0.0};
  double gap = 0.5;
  const double finest = std::min(0.5, 0.05 / std::max(a, 1.0));
  while (gap > finest) {
    edges.push_back(1.0 - gap);
    gap *= 0.5;
  }
  edges.push_back(1.0);
  KahanSum num, den;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = mid + half * rule.nodes[q];
      const double w = half * rule.weights[q] * std::exp(a * (x * x - 1.0));
      num += w * x * x;
      den += w;
    }
  }
  return num.value() / den.value();
}

double partition_function_asymptotic(const ReducedParameters& p) {
  check_reduced(p);
  if (!(p.v0_over_B > 0.0)) throw std::invalid_argument("asymptotic partition function needs V0 > 0");
  return 2.0 * std::log(p.kT_over_B) - std::log(2.0 * p.v0_over_B) + p.v0_over_B / p.kT_over_B;
}

double partition_function_asymptotic(const RotorSpec& spec, const TrapSpec& trap,
                                     double temperature_K) {
  return partition_function_asymptotic(reduce(spec, trap_depth(spec, trap), temperature_K));
}

double log_partition_exact(const ThermalRotorState& state) {
  return state.log_partition - state.ground_energy / state.reduced.kT_over_B;
}

// ---------------------------------------------------------------------------

namespace {
constexpr char kMagic[8] = {'N', 'R', 'V', 'B', 'A', 'N', 'D', '1'};
}

void save_band(const std::filesystem::path& path, const std::string& key, const BandedDensity& band) {
  const nlohmann::json meta = {{"key", key},
                               {"j_max", band.j_max()},
                               {"max_offset", band.max_offset()},
                               {"count", band.raw().size()}};
  const std::string text = meta.dump();
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write state cache " + tmp);
    const std::uint64_t len = text.size();
    out.write(kMagic, sizeof kMagic);
    out.write(reinterpret_cast<const char*>(&len), sizeof len);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.write(reinterpret_cast<const char*>(band.raw().data()),
              static_cast<std::streamsize>(band.raw().size() * sizeof(double)));
    if (!out) throw std::runtime_error("failed writing state cache " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::optional<BandedDensity> load_band(const std::filesystem::path& path, const std::string& key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  std::uint64_t len = 0;
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(&len), sizeof len) || len > (1u << 20)) return std::nullopt;
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len))) return std::nullopt;
  const auto meta = nlohmann::json::parse(text, nullptr, false);
  if (meta.is_discarded() || meta.value("key", std::string{}) != key) return std::nullopt;
  BandedDensity band(meta.at("j_max").get<int>(), meta.at("max_offset").get<int>());
  if (meta.at("count").get<std::size_t>() != band.raw().size()) return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(band.raw().data()),
               static_cast<std::streamsize>(band.raw().size() * sizeof(double))))
    return std::nullopt;
  return band;
}

} // namespace nanorevival
