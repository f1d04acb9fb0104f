#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hhf/fock.hpp"
#include "hhf/hartree_fock.hpp"
#include "hhf/lattice.hpp"
#include "hhf/linalg.hpp"

namespace hhf {

// Tolerances for equality and inequality claims.
inline constexpr double kEqualityRelTol = 1e-9;
inline constexpr double kInequalitySlack = 1e-8;

// A single verified statement. `kind` is one of
//   "claim"     - the bound or identity exactly as formulated,
//   "corrected" - the statement with the corrected constant or identity,
//   "info"      - a measured value reported without a verdict.
struct CheckRecord {
  std::string name;
  std::string kind = "claim";
  std::string relation;  // "<=", ">=", "=="
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool passed = true;
  std::string note;
};

struct BoundReport {
  int d = 0;
  int L = 0;
  double g = 0.0;
  double delta = 0.0;
  std::vector<CheckRecord> records;

  bool passed() const;
  const CheckRecord* find(const std::string& name) const;
  void add(CheckRecord r) { records.push_back(std::move(r)); }
};

CheckRecord check_le(std::string name, double measured, double bound, double slack = kInequalitySlack,
                     std::string kind = "claim");
CheckRecord check_ge(std::string name, double measured, double bound, double slack = kInequalitySlack,
                     std::string kind = "claim");
// |measured - expected| <= tol * max(1, |expected|)
CheckRecord check_eq(std::string name, double measured, double expected, double tol = kEqualityRelTol,
                     std::string kind = "claim");
CheckRecord info(std::string name, double measured, std::string note = {});

// sup_x sum_y v_{x-y} rho_HF(y) for the on-site potential
double interaction_density_sup(const HartreeFockSolution& hf);
// Operator norm of the pair potential on h (x) h (on-site: 1).
double pair_potential_norm(const TorusLattice& lat);
// ||t|| = max |omega_xi|
double hopping_norm(const TorusLattice& lat);

BoundReport thm1_report(const QuarticSuite& suite, const HartreeFockSolution& hf, const TorusLattice& lat,
                        int theta_points = 16);

struct TrialVector {
  double epsilon = 0.0;
  CVec vector;
};
TrialVector trial_vector(const QuarticSuite& suite, double epsilon);

// Traces over h (x) h with v_wedge = (1/4)(1 - Ex) v (1 - Ex), PP = P (x) P, QQ = P^perp (x) P^perp.
struct TensorTraces {
  double pair = 0.0;   // Tr[v QQ v PP]
  double holes = 0.0;  // Tr[v QQ v QQ v PP]
  double parts = 0.0;  // Tr[v PP v QQ v PP]
};
TensorTraces tensor_traces(const HartreeFockSolution& hf, const TorusLattice& lat);

struct Q7Norms {
  double brute = 0.0;   // ||Q7 Omega||^2 from the Fock space
  double closed = 0.0;  // (1 - 4 delta^2) |Lambda|
  double exact = 0.0;   // translation-invariant evaluation of 4 sum |P_up P_down|^2
  double trace = 0.0;   // Tr[v QQ v PP]
  int resolved_prefactor = 0;  // c in {1,2,4} with brute = c * trace, 0 if none fits
  double closed_relative_error = 0.0;
  double exact_relative_error = 0.0;
};
Q7Norms q7_norm_three_ways(const QuarticSuite& suite, const HartreeFockSolution& hf, const TorusLattice& lat, double g);

// ||Q7 Omega||^2 / |Lambda| for any lattice size, from the momentum-space form of P_HF.
double q7_norm_per_volume(const TorusLattice& lat, double g, double delta);

BoundReport thm2_report(const QuarticSuite& suite, const HartreeFockSolution& hf, const TorusLattice& lat,
                        double epsilon, int resolved_prefactor);

BoundReport thm3_check(const TorusLattice& lat, double g);

struct SweepRow {
  int L = 0;
  double delta = 0.0;
  double q7_per_vol = 0.0;      // exact ||Q7 Omega||^2 / |Lambda|
  double a_half = 0.0;          // a / 2
  bool passed = false;          // q7_per_vol >= a_half
  double closed_per_vol = 0.0;  // 1 - 4 delta^2
  double floor = 0.0;           // (1 - 4 delta^2)^2 / 4
};

struct SweepResult {
  int d = 0;
  double g = 0.0;
  std::vector<SweepRow> rows;
  bool lower_bound_holds = false;  // every row passed
  bool floor_positive = false;     // every q7_per_vol >= floor > 0
  bool converging = false;         // successive differences shrink
};
SweepResult extensivity_sweep(int d, const std::vector<int>& lengths, double g);

}  // namespace hhf
