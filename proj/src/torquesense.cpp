#include "nanorevival/torquesense.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "nanorevival/specfun.hpp"

namespace nanorevival {

using specfun::cos2_element;
using specfun::sin2cos2_element;

Eigen::MatrixXd vj_block(int j, double n_ext_over_B) {
  if (j < 0) throw std::invalid_argument("vj_block: j must be non-negative");
  const int n = 2 * j + 1;
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (int m = -j; m <= j; ++m)
    for (int mp = m - 2; mp <= m + 2; mp += 2)
      if (mp >= -j && mp <= j) v(m + j, mp + j) = -n_ext_over_B * sin2cos2_element(j, m, mp);
  return v;
}

namespace {

// One m-parity chain of a shell: m = first, first + 2, ..., eigenpairs of V_j / B.
struct Chain {
  int first_m = 0;
  int size = 0;
  Eigen::VectorXd lambda;
  Eigen::MatrixXd vectors;  // rows: m index in chain, columns: eigenvector
};

Chain make_chain(int j, int parity, double n) {
  Chain c;
  c.first_m = ((j % 2 == 0) == (parity == 0)) ? -j : -j + 1;
  if (c.first_m > j) return c;
  c.size = (j - c.first_m) / 2 + 1;
  std::vector<double> diag(c.size), off(c.size - 1);
  for (int r = 0; r < c.size; ++r) {
    const int m = c.first_m + 2 * r;
    diag[r] = -n * sin2cos2_element(j, m, m);
    if (r + 1 < c.size) off[r] = -n * sin2cos2_element(j, m, m + 2);
  }
  const auto eig = tridiagonal_eigen(diag, off, true);
  if (static_cast<int>(eig.count()) != c.size) throw NumericalError("shell eigensolver lost eigenpairs");
  c.lambda = Eigen::Map<const Eigen::VectorXd>(eig.values.data(), c.size);
  c.vectors = Eigen::Map<const Eigen::MatrixXd>(eig.vectors.data(), c.size, c.size);
  return c;
}

// Contracted blocks W = (V^T C V') o (V^T rho V') for the pairs (j, j) and (j, j + 2).
struct ShellBlocks {
  std::array<Chain, 2> chains;
  std::array<Chain, 2> next;  // chains of j + 2, absent at the top of the basis
  std::array<Eigen::MatrixXd, 2> w_same;
  std::array<Eigen::MatrixXd, 2> w_up;
  bool has_up = false;
};

Eigen::MatrixXd contract(const Chain& a, const Chain& b, int row_offset, const Eigen::VectorXd& c,
                         const Eigen::VectorXd& rho) {
  // a spans the common m range; b has row_offset extra rows below it.
  const Eigen::MatrixXd vb = b.vectors.middleRows(row_offset, a.size);
  const Eigen::MatrixXd m = a.vectors.transpose() * c.asDiagonal() * vb;
  const Eigen::MatrixXd s = a.vectors.transpose() * rho.asDiagonal() * vb;
  return m.cwiseProduct(s);
}

ShellBlocks build_shell(const BandedDensity& band, int j, double n, TorqueObservable obs) {
  ShellBlocks sb;
  const int J = band.j_max();
  sb.has_up = (j + 2 <= J) && obs == TorqueObservable::alignment;
  for (int p = 0; p < 2; ++p) {
    sb.chains[p] = make_chain(j, p, n);
    const Chain& a = sb.chains[p];
    if (a.size == 0) continue;
    Eigen::VectorXd c(a.size), rho(a.size);
    for (int r = 0; r < a.size; ++r) {
      const int m = a.first_m + 2 * r;
      c[r] = obs == TorqueObservable::alignment ? cos2_element(j, j, std::abs(m)) : 1.0;
      rho[r] = band.at(j, 0, m);
    }
    sb.w_same[p] = contract(a, a, 0, c, rho);
    if (sb.has_up) {
      sb.next[p] = make_chain(j + 2, p, n);
      for (int r = 0; r < a.size; ++r) {
        const int m = a.first_m + 2 * r;
        c[r] = cos2_element(j, j + 2, std::abs(m));
        rho[r] = band.at(j, 1, m);
      }
      sb.w_up[p] = contract(a, sb.next[p], 1, c, rho);
    }
  }
  return sb;
}

Eigen::VectorXcd phases(const Chain& c, int j, double tau) {
  const double f = tau - std::floor(tau);
  const double base = f * static_cast<double>(j) * (j + 1);
  Eigen::VectorXcd a(c.size);
  for (int r = 0; r < c.size; ++r) a[r] = std::polar(1.0, -std::numbers::pi * (base + tau * c.lambda[r]));
  return a;
}

double shell_contribution(const ShellBlocks& sb, int j, double tau) {
  double total = 0.0;
  for (int p = 0; p < 2; ++p) {
    const Chain& a = sb.chains[p];
    if (a.size == 0) continue;
    const Eigen::VectorXcd pa = phases(a, j, tau);
    total += (pa.adjoint() * (sb.w_same[p] * pa)).value().real();
    if (sb.has_up) {
      const Eigen::VectorXcd pb = phases(sb.next[p], j + 2, tau);
      total += 2.0 * (pa.adjoint() * (sb.w_up[p] * pb)).value().real();
    }
  }
  return total;
}

} // namespace

Eigen::MatrixXcd propagator_j(int j, double n_ext_over_B, double tau) {
  if (j < 0) throw std::invalid_argument("propagator_j: j must be non-negative");
  const int dim = 2 * j + 1;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  for (int p = 0; p < 2; ++p) {
    const Chain c = make_chain(j, p, n_ext_over_B);
    if (c.size == 0) continue;
    const Eigen::VectorXcd a = phases(c, j, tau);
    const Eigen::MatrixXcd block = c.vectors.cast<std::complex<double>>() * a.asDiagonal() *
                                   c.vectors.transpose().cast<std::complex<double>>();
    for (int r = 0; r < c.size; ++r)
      for (int s = 0; s < c.size; ++s) u(c.first_m + 2 * r + j, c.first_m + 2 * s + j) = block(r, s);
  }
  return u;
}

struct TorqueEvolution::Impl {
  BandedDensity band;
  TorqueOptions options;
  std::vector<ShellBlocks> cache;  // empty in streaming mode
};

TorqueEvolution::TorqueEvolution(const BandedDensity& band, const TorqueOptions& options)
    : impl_(std::make_unique<Impl>()) {
  if (!(options.n_ext_over_B >= 0.0)) throw std::invalid_argument("torque must be non-negative");
  impl_->band = band;
  impl_->options = options;
  const int J = band.j_max();
  double entries = 0.0;
  for (int j = 0; j <= J; ++j) entries += (2.0 * j + 1.0) * (2.0 * j + 1.0);
  if (entries <= options.memory_cap) {
    impl_->cache.resize(J + 1);
    parallel_for(static_cast<std::size_t>(J) + 1, [&](std::size_t j) {
      impl_->cache[j] = build_shell(impl_->band, static_cast<int>(j), options.n_ext_over_B, options.observable);
    });
  }
}

TorqueEvolution::~TorqueEvolution() = default;
TorqueEvolution::TorqueEvolution(TorqueEvolution&&) noexcept = default;
TorqueEvolution& TorqueEvolution::operator=(TorqueEvolution&&) noexcept = default;

bool TorqueEvolution::cached() const { return !impl_->cache.empty(); }

std::vector<double> TorqueEvolution::alignment(const std::vector<double>& tau) const {
  const auto& band = impl_->band;
  const int J = band.j_max();
  const std::size_t T = tau.size();
  std::vector<double> contrib((static_cast<std::size_t>(J) + 1) * T, 0.0);
  parallel_for(static_cast<std::size_t>(J) + 1, [&](std::size_t js) {
    const int j = static_cast<int>(js);
    std::optional<ShellBlocks> streamed;
    if (impl_->cache.empty())
      streamed = build_shell(band, j, impl_->options.n_ext_over_B, impl_->options.observable);
    const ShellBlocks& sb = streamed ? *streamed : impl_->cache[js];
    for (std::size_t t = 0; t < T; ++t) contrib[js * T + t] = shell_contribution(sb, j, tau[t]);
  });
  std::vector<double> out(T);
  for (std::size_t t = 0; t < T; ++t) {
    KahanSum s;
    for (int j = 0; j <= J; ++j) s += contrib[static_cast<std::size_t>(j) * T + t];
    out[t] = s.value();
  }
  return out;
}

std::string torque_validity_warning(const ReducedParameters& p, double n_ext_over_B) {
  if (n_ext_over_B > 0.1 * p.kT_over_B)
    return "torque exceeds 0.1 kT; the shell-conserving approximation may fail";
  return {};
}

RevivalSweep revival_decay_sweep(const BandedDensity& band, int revival_index,
                                 const std::vector<double>& n_ext_over_B, double memory_cap) {
  if (revival_index < 0) throw std::invalid_argument("revival index must be non-negative");
  RevivalSweep sweep;
  for (double n : n_ext_over_B) {
    TorqueOptions opt;
    opt.n_ext_over_B = n;
    opt.memory_cap = memory_cap;
    const TorqueEvolution evo(band, opt);
    sweep.rows.push_back({n, evo.alignment(static_cast<double>(revival_index))});
  }
  for (std::size_t i = 1; i < sweep.rows.size(); ++i)
    if (sweep.rows[i].n_ext_over_B >= sweep.rows[i - 1].n_ext_over_B &&
        sweep.rows[i].alignment > sweep.rows[i - 1].alignment + 1e-6)
      sweep.monotone = false;
  return sweep;
}

} // namespace nanorevival
