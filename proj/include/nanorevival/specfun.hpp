#pragma once

namespace nanorevival::specfun {

/// Arguments of a Wigner 3j symbol, stored as doubled values so half-integers are exact.
struct ThreeJArgs {
  int two_j1, two_j2, two_j3;
  int two_m1, two_m2, two_m3;

  static constexpr ThreeJArgs integer(int j1, int j2, int j3, int m1, int m2, int m3) {
    return {2 * j1, 2 * j2, 2 * j3, 2 * m1, 2 * m2, 2 * m3};
  }
};

/// General Wigner 3j symbol via the Racah sum (log-gamma terms, compensated summation).
/// Returns 0 whenever a selection rule fails.
double wigner3j(const ThreeJArgs& args);

/// <j m| cos^2(beta) |j' m>. Vanishes unless j' - j is 0 or +-2.
double cos2_element(int j, int j_prime, int m);

/// <j m| sin^2(beta) cos^2(alpha) |j m'> inside a fixed-j shell. Vanishes unless m' - m is 0 or +-2.
double sin2cos2_element(int j, int m, int m_prime);

/// ln[I_n(z) e^{-z}] for z >= 0; returns -infinity when the scaled value is exactly zero.
double log_bessel_i_scaled(int n, double z);

} // namespace nanorevival::specfun
