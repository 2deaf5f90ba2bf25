#include "nanorevival/macroscopicity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "nanorevival/numerics.hpp"
#include "nanorevival/physcore.hpp"

namespace nanorevival {

namespace {

double sinc(double y) { return std::abs(y) < 1e-8 ? 1.0 - y * y / 6.0 : std::sin(y) / y; }

// Angle average of the squared sinc difference at c = u x / 2. Over the uniform torus the
// pair alpha -+ phi/2 is uniform and independent, so half the average is Var[sinc(c cos a)].
double sinc_variance(double c, int n) {
  std::vector<double> f(n);
  KahanSum mean;
  for (int k = 0; k < n; ++k) {
    f[k] = sinc(c * std::cos(2.0 * std::numbers::pi * k / n));
    mean += f[k];
  }
  const double m = mean.value() / n;
  KahanSum var;
  for (double v : f) var += (v - m) * (v - m);
  return var.value() / n;
}

} // namespace

double theta(double x, const ThetaQuadrature& q) {
  if (!(x >= 0.0)) throw std::invalid_argument("theta: x must be non-negative");
  if (x == 0.0) return 0.0;
  const int n_base = std::max(q.min_angle_nodes, static_cast<int>(std::ceil(q.angle_nodes_per_x * x)));
  auto variance = [&](double u) {
    const double c = 0.5 * u * x;
    return sinc_variance(c, std::max(n_base, static_cast<int>(std::ceil(4.0 * c))));
  };
  KahanSum s;
  if (x <= q.laguerre_max_x) {
    const auto rule = gauss_laguerre(q.radial_nodes);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * variance(std::sqrt(2.0 * rule.nodes[k]));
    return s.value();
  }
  // Large x: the u-integrand oscillates with period 4 pi / x; panels of half that width.
  const auto rule = gauss_legendre(q.panel_nodes);
  const int panels = std::max(8, static_cast<int>(std::ceil(q.u_max * x / (2.0 * std::numbers::pi))));
  const double h = q.u_max / panels;
  for (int p = 0; p < panels; ++p)
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double u = h * (p + 0.5 * (rule.nodes[k] + 1.0));
      s += 0.5 * h * rule.weights[k] * u * std::exp(-0.5 * u * u) * variance(u);
    }
  return s.value();
}

ThetaMax theta_max(const ThetaQuadrature& q) {
  constexpr int kScan = 41;
  const double lo = std::log(1e-2), hi = std::log(1e2);
  std::vector<double> xs(kScan), vals(kScan);
  for (int i = 0; i < kScan; ++i) xs[i] = std::exp(lo + (hi - lo) * i / (kScan - 1));
  parallel_for(kScan, [&](std::size_t i) { vals[i] = theta(xs[i], q); });
  const auto best = static_cast<int>(std::max_element(vals.begin(), vals.end()) - vals.begin());
  if (best == 0 || best == kScan - 1) throw NumericalError("theta_max: maximum at the edge of the search bracket");

  // Golden section in ln x between the scan neighbours.
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(xs[best - 1]), b = std::log(xs[best + 1]);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = theta(std::exp(c), q), fd = theta(std::exp(d), q);
  int iter = 0;
  while (b - a > 1e-6 && iter++ < 200) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = theta(std::exp(c), q);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = theta(std::exp(d), q);
    }
  }
  if (b - a > 1e-6) throw NumericalError("theta_max: golden-section search did not converge");
  const double x = std::exp(0.5 * (a + b));
  return {x, std::max({theta(x, q), fc, fd})};
}

namespace {

void check(const MacroInputs& in) {
  if (!(in.visibility_ratio > 0.0 && in.visibility_ratio < 1.0))
    throw std::invalid_argument("visibility ratio f must lie in (0, 1)");
  if (in.revival_index < 1) throw std::invalid_argument("revival index must be at least 1");
  if (!(in.mass_kg > 0.0)) throw std::invalid_argument("mass must be positive");
  if (!(in.revival_time_s > 0.0)) throw std::invalid_argument("revival time must be positive");
}

double mass_ratio_sq(const MacroInputs& in) {
  const double r = in.mass_kg / constants::electron_mass;
  return r * r;
}

} // namespace

double planar_alignment_decay(const MacroInputs& in, double theta_value) {
  if (in.revival_index < 1) throw std::invalid_argument("revival index must be at least 1");
  if (std::isinf(in.tau_modification)) return 1.0;
  if (!(in.tau_modification > 0.0)) throw std::invalid_argument("modification time must be positive");
  const double exponent =
      in.revival_index * (in.revival_time_s / in.tau_modification) * theta_value * mass_ratio_sq(in);
  return 0.5 + 0.5 * std::exp(-exponent);
}

double planar_alignment_decay(const MacroInputs& in) {
  return planar_alignment_decay(in, theta(in.length_m * in.sigma_q / constants::hbar));
}

double mu_bound(const MacroInputs& in, double theta_m) {
  check(in);
  return std::log10(in.revival_index * theta_m * mass_ratio_sq(in) * in.revival_time_s /
                    std::abs(std::log(in.visibility_ratio)));
}

double mu_bound(const MacroInputs& in) {
  static const double theta_m = theta_max().theta_m;
  return mu_bound(in, theta_m);
}

double solve_modification_time(const MacroInputs& in, double theta_m) {
  check(in);
  const double target = 0.5 * (1.0 + in.visibility_ratio);
  MacroInputs probe = in;
  // The alignment rises monotonically with tau; bisect in log10 tau.
  double lo = -300.0, hi = 300.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    probe.tau_modification = std::pow(10.0, mid);
    if (planar_alignment_decay(probe, theta_m) < target)
      lo = mid;
    else
      hi = mid;
  }
  return std::pow(10.0, 0.5 * (lo + hi));
}

} // namespace nanorevival
