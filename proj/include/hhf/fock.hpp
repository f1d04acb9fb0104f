#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hhf/hartree_fock.hpp"
#include "hhf/lattice.hpp"
#include "hhf/types.hpp"

namespace hhf {

inline constexpr int kDefaultFockCap = 16;
inline constexpr int kHardFockCap = 24;

enum class ModeOrder { position, orbital };

// Occupation-number basis over M modes. A basis state is the M-bit word whose
// bit m is the occupation of mode m; bit 0 is the leftmost factor, so
// c*_m picks up (-1)^(number of occupied modes below m).
struct FockSpace {
  int modes = 0;
  std::size_t dimension = 0;
  ModeOrder order = ModeOrder::position;
};

class FockCapError : public std::runtime_error {
 public:
  FockCapError(int modes, int cap);
  int modes() const { return modes_; }
  int cap() const { return cap_; }

 private:
  int modes_;
  int cap_;
};

FockSpace build_fock_space(int modes, ModeOrder order, int cap = kDefaultFockCap);

struct SparseOperator {
  SpMat matrix;
  bool hermitian = false;

  Eigen::Index dim() const { return matrix.rows(); }
  CVec operator*(const CVec& v) const { return matrix * v; }
};

// CAR layer: act with c*_m (dagger) or c_m on a basis word. Returns false if
// the result vanishes; otherwise updates the word and multiplies sign.
inline bool apply_ladder(std::uint64_t& word, int mode, bool dagger, int& sign) {
  const std::uint64_t bit = std::uint64_t{1} << mode;
  if (((word & bit) != 0) == dagger) return false;
  if (__builtin_popcountll(word & (bit - 1)) & 1) sign = -sign;
  word ^= bit;
  return true;
}

SparseOperator creation(const FockSpace& space, int mode);
SparseOperator annihilation(const FockSpace& space, int mode);
// c*(f) = sum_m f_m c*_m
SparseOperator orbital_operator(const FockSpace& space, const CVec& coeffs);
SparseOperator identity_operator(const FockSpace& space);
SparseOperator adjoint(const SparseOperator& a);
// (A + A*) / 2
SparseOperator real_part(const SparseOperator& a);
// sum of c*_m c_m over the listed modes
SparseOperator number_operator(const FockSpace& space, const std::vector<int>& modes);
// Max |A - A*| over a few random columns, the cheap Hermiticity witness.
double hermitian_defect(const SparseOperator& a, int columns = 8, std::uint64_t seed = 1);

// Sorted coordinate list "row col re im" per line.
std::string to_coordinate_text(const SparseOperator& a);

// H = sum t c*_{x s} c_{y s} + g sum_x n_{x up} n_{x down} on position modes (index 2x + s).
SparseOperator assemble_hubbard_hamiltonian(const FockSpace& space, const TorusLattice& lat, double g);

// Particle-hole operators on the orbital-mode Fock space.
//   orbital:  h*_k = c*_k for k unoccupied, l*_k = c*_k for k occupied
//   position: h*_{x s} = sum_{k unocc} conj(f_k(x s)) c*_k
//             l*_{x s} = sum_{k occ}   f_k(x s) c*_k
struct ParticleHoleOps {
  std::vector<SparseOperator> h_dag;      // indexed by orbital; empty matrix outside I(h)
  std::vector<SparseOperator> l_dag;      // indexed by orbital; empty matrix outside I(l)
  std::vector<SparseOperator> h_dag_pos;  // indexed by 2x + s
  std::vector<SparseOperator> l_dag_pos;  // indexed by 2x + s
};
ParticleHoleOps particle_hole_ops(const FockSpace& space, const HartreeFockSolution& hf);

// V_{j,k;m,n} = <f_j (x) f_k | v (f_m (x) f_n)> for on-site v, flattened as ((j M + k) M + m) M + n.
std::vector<cplx> two_body_matrix(const HartreeFockSolution& hf);

enum class BasisForm { orbital, position };

struct QuarticSuite {
  std::array<SparseOperator, 7> terms;  // Q1 .. Q7
  SparseOperator t_hf;
  SparseOperator n, n_h, n_l;
  SparseOperator q_main;  // Q1 + Q2
  SparseOperator q;       // Re[Q1 + Q2 - 2Q3 + 2Q4 + 4Q5 + 4Q6 + 2Q7]
  double e_hf_offset = 0.0;
  double g = 0.0;
  BasisForm form = BasisForm::orbital;
};

inline constexpr std::array<double, 7> kQuarticWeights = {1.0, 1.0, -2.0, 2.0, 4.0, 4.0, 2.0};
// [N, Q_nu] = s_nu Q_nu
inline constexpr std::array<int, 7> kQuarticGrading = {0, 0, 0, 0, 2, -2, 4};

QuarticSuite assemble_quartics(const FockSpace& space, const HartreeFockSolution& hf, const TorusLattice& lat,
                               double g, BasisForm form = BasisForm::orbital);

// Tr[t P] + (g/2) Tr[v (1 - Ex)(P (x) P)]
double hf_energy_offset(const HartreeFockSolution& hf, const TorusLattice& lat);

// The conjugated Hamiltonian obtained by substituting c*_k -> h*_k + l_k in
// sum T_{k,m} c*_k c_m + (g/2) sum V_{j,k;m,n} c*_k c*_j c_m c_n.
SparseOperator assemble_substituted_hamiltonian(const FockSpace& space, const HartreeFockSolution& hf,
                                                const TorusLattice& lat, double g);

struct WickReport {
  double g = 0.0;
  double delta = 0.0;
  double residual = 0.0;                 // || H - (E + T_HF + (g/2) Q) ||, full space
  double residual_balanced = 0.0;        // same, restricted to N_h = N_l
  double chemical_potential = 0.0;       // mu = g/2
  double residual_with_chemical_potential = 0.0;  // after adding mu (N_h - N_l)
  double fitted_number_coefficient = 0.0;          // best alpha for alpha (N_h - N_l)
  std::array<double, 7> coefficient_repair{};     // best single Re Q_nu rescaling
  std::array<double, 7> repaired_residual{};      // residual after that rescaling
  int best_repair = -1;                            // nu - 1 with the smallest residual
  double vacuum_energy = 0.0;                      // <Omega| H Omega>
  double e_hf_offset = 0.0;
  double energy_density = 0.0;                     // g/4 + F_L
  double energy_density_half_coupling = 0.0;       // g/2 + F_L
  int volume = 0;
};

WickReport wick_identity_check(const TorusLattice& lat, double g, int cap = kDefaultFockCap);

}  // namespace hhf
