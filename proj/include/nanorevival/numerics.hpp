#pragma once

// Small numerical building blocks shared by the physics modules: compensated
// summation, a fixed-order parallel loop, the symmetric tridiagonal eigensolver
// and Gauss quadrature rules.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace nanorevival {

/// Raised for numerical failures (eigensolver breakdown, truncation, non-convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Neumaier variant of Kahan summation.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  KahanSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  static double abs(double x) { return x < 0 ? -x : x; }
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Pairwise summation in a fixed tree order; result independent of thread count.
double pairwise_sum(std::span<const double> values);

/// Number of worker threads used by parallel_for; 0 restores the hardware default.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls fn(i) for i in [0, n) on the configured worker threads. Work items must write
/// only to their own output slots; any reduction happens afterwards in index order.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::atomic_flag error_set = ATOMIC_FLAG_INIT;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n || failed.load(std::memory_order_relaxed)) return;
      try {
        fn(i);
      } catch (...) {
        if (!error_set.test_and_set()) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  if (error) std::rethrow_exception(error);
}

/// Eigen-decomposition of a real symmetric tridiagonal matrix.
/// Eigenvectors are stored column-major: vectors[k * size + i] is component i of vector k.
struct TridiagonalEigen {
  std::size_t size = 0;
  std::vector<double> values;
  std::vector<double> vectors;

  std::size_t count() const { return values.size(); }
  double vector(std::size_t k, std::size_t i) const { return vectors[k * size + i]; }
};

/// Ascending eigenpairs of the matrix with the given diagonal and off-diagonal. With
/// `upper`, only eigenvalues <= *upper are returned.
TridiagonalEigen tridiagonal_eigen(std::span<const double> diag, std::span<const double> offdiag,
                                   bool want_vectors, std::optional<double> upper = std::nullopt);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);
/// Gauss-Laguerre rule for integrals of e^{-s} f(s) over [0, inf).
QuadratureRule gauss_laguerre(int n);

} // namespace nanorevival
