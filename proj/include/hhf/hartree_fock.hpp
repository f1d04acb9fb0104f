#pragma once

#include <cstdint>
#include <vector>

#include "hhf/lattice.hpp"
#include "hhf/types.hpp"

namespace hhf {

// Nearest-neighbour hopping on the torus, normalised so that its spectrum is
// the dispersion omega_xi = -sum cos(xi_nu): each bond carries -1/2.
RMat hopping_matrix(const TorusLattice& lat);
// Diagonal matrix of gauge signs (-1)^x.
RMat gauge_matrix(const TorusLattice& lat);

// mean_xi g / sqrt(omega^2 + g^2 delta^2) - 2
double gap_residual(const TorusLattice& lat, double g, double delta);

struct GapSolution {
  double delta = 0.0;
  double residual = 0.0;
  int bisection_steps = 0;
  int newton_steps = 0;
};

GapSolution solve_gap_detailed(const TorusLattice& lat, double g, double tol = 1e-12);
double solve_gap(const TorusLattice& lat, double g, double tol = 1e-12);

// F_L(t) = g t - mean_xi sqrt(omega^2 + g^2 t)
double free_energy_term(const TorusLattice& lat, double g, double t);

// Energy per site of the Slater determinant built from P_HF under
// H = T + g sum_x n_up n_down, i.e. g/4 + F_L(delta^2).
double hf_energy_density(const TorusLattice& lat, double g, double delta);
// The variant with the constant g/2 in place of g/4.
double hf_energy_density_half_coupling(const TorusLattice& lat, double g, double delta);

// H_r = T (x) 1 + r G (x) sigma_3 on l^2(Lambda x {up, down}), index 2x + s.
CMat one_particle_hamiltonian(const TorusLattice& lat, double r);

struct Eigenpair {
  CVec vector;
  double energy = 0.0;
};

// psi_{xi,sigma,kappa} for xi in the plus half of the Brillouin zone.
Eigenpair eigenpair(const TorusLattice& lat, double r, std::size_t xi, int sigma, int kappa);

struct Orbital {
  std::size_t xi = 0;  // momentum index, always in the plus half
  int sigma = 1;
  int kappa = -1;
  double lambda = 0.0;  // sqrt(omega^2 + r^2)
  double energy = 0.0;  // kappa * lambda, eigenvalue of H_r
};

struct HartreeFockSolution {
  int d = 0;
  int L = 0;
  double g = 0.0;
  double delta = 0.0;
  double gap = 0.0;            // r = g * delta
  double fermi_level = 0.0;    // of H_r; the mean-field Hamiltonian is H_r + hartree_shift
  double hartree_shift = 0.0;  // g/2
  std::vector<Orbital> orbitals;  // occupied (kappa = -1) first, then (xi, sigma)
  std::size_t occupied = 0;
  CMat orbital_matrix;  // columns are the orbitals in the order above
  CMat projector;       // P_HF in the (x, spin) basis
  double energy_density = 0.0;

  bool is_occupied(std::size_t k) const { return k < occupied; }
  std::size_t mode_count() const { return orbitals.size(); }
  // omega_k = |e_k - mu_N|
  double excitation_energy(std::size_t k) const { return orbitals[k].lambda; }
};

HartreeFockSolution hf_projector(const TorusLattice& lat, double g, double delta,
                                 std::size_t max_volume = 4096);

// Tr[(T (x) 1) gamma] + g sum_x det(gamma_x)
//   = Tr[(T (x) 1) gamma] + (g/4) sum_x (rho_x^2 - |v_x|^2).
double hf_functional(const TorusLattice& lat, double g, const CMat& gamma, double tol = 1e-9);

struct PauliDensity {
  double rho = 0.0;
  double v[3] = {0.0, 0.0, 0.0};
};
// gamma_x = (rho/2) 1 + (v/2) . sigma
PauliDensity pauli_decompose(const Eigen::Matrix2cd& block);
Eigen::Matrix2cd site_block(const CMat& gamma, std::size_t x);

struct LowerBoundConstant {
  double a_half_coupling = 0.0;  // denominator omega^2 + (g/2)^2
  double a_full_coupling = 0.0;  // denominator omega^2 + g^2
  double floor = 0.0;            // 4^-d d^2 / (d^2 + g^2)
};
LowerBoundConstant lower_bound_constant_a(const TorusLattice& lat, double g);

// Projector onto the eigenvectors of the `rank` lowest eigenvalues.
CMat spectral_projector(const CMat& h, std::size_t rank);

// Energies of rank-|Lambda| projectors obtained from H_{g delta} + eps K with
// random Hermitian K, ||K|| = 1, eps alternating over {0.01, 0.1}.
std::vector<double> perturbed_energies(const TorusLattice& lat, const HartreeFockSolution& hf,
                                       int count, std::uint64_t seed);

}  // namespace hhf
