#include "nanorevival/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace nanorevival::specfun {

namespace {

long double log_factorial(int n) { return std::lgamma(static_cast<long double>(n) + 1.0L); }

bool is_odd(int n) { return (n % 2) != 0; }

} // namespace

double wigner3j(const ThreeJArgs& a) {
  const int J1 = a.two_j1, J2 = a.two_j2, J3 = a.two_j3;
  const int M1 = a.two_m1, M2 = a.two_m2, M3 = a.two_m3;
  if (J1 < 0 || J2 < 0 || J3 < 0) return 0.0;
  if (M1 + M2 + M3 != 0) return 0.0;
  if (std::abs(M1) > J1 || std::abs(M2) > J2 || std::abs(M3) > J3) return 0.0;
  if (is_odd(J1 + M1) || is_odd(J2 + M2) || is_odd(J3 + M3)) return 0.0;
  if (is_odd(J1 + J2 + J3)) return 0.0;
  if (J3 > J1 + J2 || J3 < std::abs(J1 - J2)) return 0.0;
  // (j1 j2 j3; 0 0 0) vanishes for odd j1 + j2 + j3.
  if (M1 == 0 && M2 == 0 && M3 == 0 && is_odd((J1 + J2 + J3) / 2)) return 0.0;

  // Integer combinations of the (possibly half-integer) arguments.
  const int a_ = (J1 + J2 - J3) / 2;
  const int b_ = (J1 - J2 + J3) / 2;
  const int c_ = (-J1 + J2 + J3) / 2;
  const int d_ = (J1 + J2 + J3) / 2 + 1;
  const int j1pm1 = (J1 + M1) / 2, j1mm1 = (J1 - M1) / 2;
  const int j2pm2 = (J2 + M2) / 2, j2mm2 = (J2 - M2) / 2;
  const int j3pm3 = (J3 + M3) / 2, j3mm3 = (J3 - M3) / 2;

  const long double log_prefactor =
      0.5L * (log_factorial(a_) + log_factorial(b_) + log_factorial(c_) - log_factorial(d_ - 1) -
              std::log(static_cast<long double>(d_)) + log_factorial(j1pm1) + log_factorial(j1mm1) +
              log_factorial(j2pm2) + log_factorial(j2mm2) + log_factorial(j3pm3) + log_factorial(j3mm3));

  const int t1 = (J3 - J2 + M1) / 2;  // j3 - j2 + m1
  const int t2 = (J3 - J1 - M2) / 2;  // j3 - j1 - m2
  const int kmin = std::max({0, -t1, -t2});
  const int kmax = std::min({a_, j1mm1, j2pm2});
  if (kmin > kmax) return 0.0;

  std::vector<long double> logs;
  logs.reserve(kmax - kmin + 1);
  for (int k = kmin; k <= kmax; ++k) {
    logs.push_back(-(log_factorial(k) + log_factorial(t1 + k) + log_factorial(t2 + k) +
                     log_factorial(a_ - k) + log_factorial(j1mm1 - k) + log_factorial(j2pm2 - k)));
  }
  const long double peak = *std::max_element(logs.begin(), logs.end());
  long double sum = 0.0L, comp = 0.0L;
  for (int k = kmin; k <= kmax; ++k) {
    const long double term = (is_odd(k) ? -1.0L : 1.0L) * std::exp(logs[k - kmin] - peak);
    const long double y = term - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  const int phase = (J1 - J2 - M3) / 2;
  const long double value = (is_odd(phase) ? -1.0L : 1.0L) * sum * std::exp(peak + log_prefactor);
  return static_cast<double>(value);
}

double cos2_element(int j, int j_prime, int m) {
  const int lo = std::min(j, j_prime);
  if (lo < 0 || std::abs(m) > lo) return 0.0;
  const double mm = static_cast<double>(m) * m;
  if (j == j_prime) {
    const double jj = j;
    return 1.0 / 3.0 + (2.0 / 3.0) * (jj * (jj + 1.0) - 3.0 * mm) / ((2.0 * jj - 1.0) * (2.0 * jj + 3.0));
  }
  if (std::abs(j - j_prime) != 2) return 0.0;
  const double l = lo;
  const double num = ((l + 1.0) * (l + 1.0) - mm) * ((l + 2.0) * (l + 2.0) - mm);
  const double den = (2.0 * l + 1.0) * (2.0 * l + 3.0) * (2.0 * l + 3.0) * (2.0 * l + 5.0);
  return std::sqrt(num / den);
}

double sin2cos2_element(int j, int m, int m_prime) {
  if (j < 0 || std::abs(m) > j || std::abs(m_prime) > j) return 0.0;
  // sin^2 b cos^2 a = (1 - cos^2 b) / 2 + sin^2 b cos(2a) / 2
  if (m == m_prime) return 0.5 * (1.0 - cos2_element(j, j, m));
  if (std::abs(m - m_prime) != 2) return 0.0;
  const double jj = j;
  const double lo = std::min(m, m_prime);
  const double num = (jj - lo - 1.0) * (jj - lo) * (jj + lo + 1.0) * (jj + lo + 2.0);
  return -0.5 * std::sqrt(num) / ((2.0 * jj - 1.0) * (2.0 * jj + 3.0));
}

namespace {

// Orders at or above this use the uniform (Debye) expansion.
constexpr int kUniformMinOrder = 20;
// Below kUniformMinOrder, arguments at or above this use the Hankel expansion.
constexpr double kHankelMinArgument = 1000.0;

// Debye polynomials U_k(p), k = 0..10, coefficients in ascending powers of p.
const std::array<std::vector<double>, 11> kDebye = {{
    {1},
    {0, 0.125, 0, -0.20833333333333334},
    {0, 0, 0.0703125, 0, -0.40104166666666669, 0, 0.3342013888888889},
    {0, 0, 0, 0.0732421875, 0, -0.89121093750000002, 0, 1.8464626736111112, 0, -1.0258125964506173},
    {0, 0, 0, 0, 0.112152099609375, 0, -2.3640869140624998, 0, 8.78912353515625, 0,
     -11.207002616222994, 0, 4.6695844234262474},
    {0, 0, 0, 0, 0, 0.22710800170898438, 0, -7.3687943594796321, 0, 42.534998745388457, 0,
     -91.818241543240021, 0, 84.636217674600729, 0, -28.212072558200244},
    {0, 0, 0, 0, 0, 0, 0.57250142097473145, 0, -26.491430486951554, 0, 218.19051174421159, 0,
     -699.57962737613252, 0, 1059.9904525279999, 0, -765.25246814118168, 0, 212.57013003921713},
    {0, 0, 0, 0, 0, 0, 0, 1.7277275025844574, 0, -108.09091978839466, 0, 1200.9029132163525, 0,
     -5305.646978613403, 0, 11655.393336864534, 0, -13586.550006434138, 0, 8061.7221817373093, 0,
     -1919.4576623184071},
    {0, 0, 0, 0, 0, 0, 0, 0, 6.074042001273483, 0, -493.915304773088, 0, 7109.5143024893641, 0,
     -41192.65496889755, 0, 122200.46498301746, 0, -203400.17728041555, 0, 192547.00123253153, 0,
     -96980.598388637518, 0, 20204.291330966149},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 24.380529699556064, 0, -2499.8304818112097, 0, 45218.768981362729,
     0, -331645.17248456361, 0, 1268365.2733216248, 0, -2813563.2265865342, 0, 3763271.2976564039,
     0, -2998015.9185381066, 0, 1311763.6146629772, 0, -242919.18790055133},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 110.01714026924674, 0, -13886.08975371704, 0,
     308186.40461266239, 0, -2785618.1280864547, 0, 13288767.166421818, 0, -37567176.660763353, 0,
     66344512.274729028, 0, -74105148.211532652, 0, 50952602.492664643, 0, -19706819.118432228, 0,
     3284469.8530720379},
}};

double horner(const std::vector<double>& c, double p) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * p + *it;
  return v;
}

double log_bessel_uniform(double nu, double z) {
  const double t = z / nu;
  const double r = std::sqrt(1.0 + t * t);
  const double p = 1.0 / r;
  double log_ratio;  // ln[t / (1 + r)]
  if (t > 1.0) {
    const double u = 1.0 / (t * t);
    log_ratio = -std::log1p(1.0 / t + u / (std::sqrt(1.0 + u) + 1.0));
  } else {
    log_ratio = std::log(t) - std::log1p(r);
  }
  double series = 0.0;
  double inv_pow = 1.0;
  for (const auto& u : kDebye) {
    series += horner(u, p) * inv_pow;
    inv_pow /= nu;
  }
  return nu / (r + t) + nu * log_ratio - 0.5 * std::log(2.0 * std::numbers::pi * nu * r) +
         std::log(series);
}

double log_bessel_hankel(int n, double z) {
  const double mu = 4.0 * n * n;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 80; ++k) {
    const double next = -term * (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * z);
    if (std::abs(next) >= std::abs(term) && k > 1) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return -0.5 * std::log(2.0 * std::numbers::pi * z) + std::log(sum);
}

// Power series; every term is positive, so no cancellation occurs.
double log_bessel_series(int n, double z) {
  const double q = 0.25 * z * z;
  double term = 1.0, sum = 1.0, log_scale = 0.0;
  for (int k = 1; k < 100000; ++k) {
    term *= q / (static_cast<double>(k) * (n + k));
    sum += term;
    if (term < 1e-17 * sum) break;
    if (sum > 1e200) {
      term /= sum;
      log_scale += std::log(sum);
      sum = 1.0;
    }
  }
  return n * std::log(0.5 * z) - std::lgamma(n + 1.0) + std::log(sum) + log_scale - z;
}

} // namespace

double log_bessel_i_scaled(int n, double z) {
  if (!(z >= 0.0)) throw std::invalid_argument("log_bessel_i_scaled: z must be non-negative");
  n = std::abs(n);
  if (z == 0.0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (n >= kUniformMinOrder) return log_bessel_uniform(n, z);
  if (z >= kHankelMinArgument) return log_bessel_hankel(n, z);
  return log_bessel_series(n, z);
}

} // namespace nanorevival::specfun
