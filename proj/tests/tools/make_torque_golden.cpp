// Writes the reference sweep for a small torque config from dense shell-conserving
// propagation. Usage: make_torque_golden CONFIG OUT
#include <fstream>
#include <iostream>

#include "nanorevival/cli.hpp"
#include "oracles.hpp"

int main(int argc, char** argv) {
  using namespace nanorevival;
  if (argc != 3) {
    std::cerr << "usage: make_torque_golden CONFIG OUT\n";
    return 2;
  }
  const auto cfg = cli::load_config(argv[1]);
  const double b = rotational_energy_unit(cfg.rotor);
  const auto p = reduce(cfg.rotor, trap_depth(cfg.rotor, cfg.trap), cfg.temperature_K);
  const oracle::DenseBasis basis(cfg.jmax_override);
  const Eigen::MatrixXd rho = oracle::dense_thermal_state(basis, p.kT_over_B, p.v0_over_B);
  const Eigen::MatrixXd c = oracle::dense_cos2(basis);

  std::ofstream out(argv[2]);
  out << "n_ext_Nm,n_ext_over_B,revival_alignment\n";
  for (double n : cfg.torques_Nm) {
    const auto h = oracle::dense_torque_hamiltonian(basis, n / b, true);
    const double a = oracle::dense_alignment(rho, h, c, {static_cast<double>(cfg.revival_index)}).front();
    out << cli::format_number(n) << ',' << cli::format_number(n / b) << ',' << cli::format_number(a) << '\n';
  }
  return 0;
}
