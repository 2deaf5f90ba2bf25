#pragma once

namespace nanorevival {

struct ThetaQuadrature {
  int radial_nodes = 64;      // Gauss-Laguerre nodes in s = u^2 / 2
  int min_angle_nodes = 64;   // trapezoid nodes per angle
  double angle_nodes_per_x = 8.0;
  double laguerre_max_x = 16.0;  // above this, composite Gauss-Legendre panels in u
  int panel_nodes = 16;
  double u_max = 10.0;
};

/// Geometry factor theta(x) of the planar-rotor classicalization rate.
double theta(double x, const ThetaQuadrature& q = {});

struct ThetaMax {
  double x_star;
  double theta_m;
};

/// Maximum of theta over x in [1e-2, 1e2]: log-grid scan then golden-section refinement.
ThetaMax theta_max(const ThetaQuadrature& q = {});

struct MacroInputs {
  double mass_kg = 0.0;
  int revival_index = 1;
  double visibility_ratio = 0.8;   // f
  double revival_time_s = 0.0;
  double length_m = 0.0;
  double sigma_q = 0.0;            // momentum-kick width, kg m / s
  double tau_modification = 0.0;  // s
};

/// 1/2 + 1/2 exp[-n (T_rev / tau) theta(l sigma_q / hbar) (M / m_e)^2].
double planar_alignment_decay(const MacroInputs& in);
/// Same with a given theta value in place of theta(l sigma_q / hbar).
double planar_alignment_decay(const MacroInputs& in, double theta_value);

/// log10[n theta_m (M/m_e)^2 (T_rev / 1 s) / |ln f|].
double mu_bound(const MacroInputs& in);
double mu_bound(const MacroInputs& in, double theta_m);

/// Modification time tau at which the planar alignment after n revivals equals (1 + f) / 2,
/// found by bisection on planar_alignment_decay.
double solve_modification_time(const MacroInputs& in, double theta_m);

} // namespace nanorevival
