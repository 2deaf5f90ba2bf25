#include "nanorevival/numerics.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <utility>

namespace nanorevival {

namespace {

std::atomic<unsigned> g_threads{0};

unsigned default_threads() {
  if (const char* env = std::getenv("NANOREVIVAL_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double pairwise_impl(const double* v, std::size_t n) {
  if (n <= 16) {
    KahanSum s;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s.value();
  }
  const std::size_t half = n / 2;
  return pairwise_impl(v, half) + pairwise_impl(v + half, n - half);
}

} // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_impl(values.data(), values.size());
}

void set_thread_count(unsigned n) { g_threads = n; }

unsigned thread_count() {
  const unsigned n = g_threads.load();
  return n == 0 ? default_threads() : n;
}

TridiagonalEigen tridiagonal_eigen(std::span<const double> diag, std::span<const double> offdiag,
                                   bool want_vectors, std::optional<double> upper) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  if (offdiag.size() + 1 != n) throw std::invalid_argument("tridiagonal: off-diagonal size mismatch");

  TridiagonalEigen out;
  out.size = n;
  if (n == 1) {
    if (!upper || diag[0] <= *upper) {
      out.values = {diag[0]};
      if (want_vectors) out.vectors = {1.0};
    }
    return out;
  }

  // Gershgorin bounds let an empty window return early.
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(offdiag[i - 1]) : 0.0) + (i + 1 < n ? std::abs(offdiag[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
  }
  if (upper && *upper < lo) return out;

  // The full spectrum keeps the driver on its MRRR path (a value window falls back to
  // bisection plus inverse iteration, which is cubic for clustered spectra).
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(n, 0.0);
  std::copy(offdiag.begin(), offdiag.end(), e.begin());
  std::vector<double> w(n);
  std::vector<double> z(want_vectors ? n * n : 1);
  std::vector<lapack_int> isuppz(2 * n);
  lapack_int found = 0;
  const auto ni = static_cast<lapack_int>(n);
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'A', ni, d.data(), e.data(), 0.0, 0.0,
                     0, 0, 0.0, &found, w.data(), z.data(), want_vectors ? ni : 1, isuppz.data());
  if (info != 0)
    throw NumericalError("tridiagonal eigensolver failed (dstevr info " + std::to_string(info) + ")");
  if (upper)
    found = static_cast<lapack_int>(std::upper_bound(w.begin(), w.begin() + found, *upper) - w.begin());

  out.values.assign(w.begin(), w.begin() + found);
  if (want_vectors) {
    z.resize(n * static_cast<std::size_t>(found));
    out.vectors = std::move(z);
    // Fix the sign so that the largest-magnitude component is positive.
    for (lapack_int k = 0; k < found; ++k) {
      double* v = out.vectors.data() + static_cast<std::size_t>(k) * n;
      std::size_t arg = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
      if (v[arg] < 0)
        for (std::size_t i = 0; i < n; ++i) v[i] = -v[i];
    }
  }
  return out;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  // Returns (P_n(x), P_{n-1}(x)) by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{n == 0 ? 1.0 : p1, p0};
  };
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [pn, pm] = legendre(x);
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [pn, pm] = legendre(x);
    dp = n * (x * pn - pm) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_laguerre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre: n must be positive");
  // Golub-Welsch on the Jacobi matrix of the Laguerre recurrence.
  std::vector<double> diag(n), off(n - 1);
  for (int i = 0; i < n; ++i) diag[i] = 2.0 * i + 1.0;
  for (int i = 1; i < n; ++i) off[i - 1] = i;
  const auto eig = tridiagonal_eigen(diag, off, true);
  QuadratureRule rule;
  rule.nodes = eig.values;
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    const double v0 = eig.vector(k, 0);
    rule.weights[k] = v0 * v0;
  }
  return rule;
}

} // namespace nanorevival
