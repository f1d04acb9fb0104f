#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hhf/fock.hpp"
#include "hhf/types.hpp"

namespace hhf {

using MatVec = std::function<void(const CVec&, CVec&)>;

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double last) : std::runtime_error(what), last_(last) {}
  double last_estimate() const { return last_; }

 private:
  double last_;
};

struct LanczosOptions {
  double tol = 1e-11;
  int krylov = 60;
  int max_restarts = 400;
  std::uint64_t seed = 7;
};

struct EigEstimate {
  double value = 0.0;
  CVec vector;
  int matvecs = 0;
};

// Largest eigenvalue of a Hermitian map (thick-free restarted Lanczos with
// full reorthogonalisation).
EigEstimate lanczos_largest(const MatVec& op, Eigen::Index n, const LanczosOptions& opt = {},
                            const CVec* start = nullptr);

// Dimension up to which dense eigensolves are used as a second opinion.
inline constexpr Eigen::Index kDenseCheckDim = 4096;

struct NormResult {
  double value = 0.0;
  std::optional<double> dense;
};

// Largest singular value; for Hermitian input the largest |eigenvalue|.
NormResult operator_norm_detailed(const SparseOperator& a, double tol = 1e-11);
double operator_norm(const SparseOperator& a, double tol = 1e-11);

struct RadiusResult {
  double estimate = 0.0;
  double upper_bound = 0.0;  // estimate grid value times sec(pi / theta_points)
  double theta = 0.0;        // maximising angle
  int components = 0;
  std::optional<double> dense;
};

// w(A) = sup |<x, A x>| over unit x in span{e_i : keep[i]} (empty keep = all).
RadiusResult numerical_radius(const SparseOperator& a, const std::vector<char>& keep = {}, int theta_points = 16);

// W^{-1/2} A W^{-1/2} on the range of W, expressed on the coordinates that
// are not annihilated by W.
struct SandwichedOperator {
  SparseOperator op;                 // acts on span{e_basis[i]}
  std::vector<Eigen::Index> basis;   // coordinates kept from the full space
};

SandwichedOperator sandwich(const SparseOperator& a, const SparseOperator& w, double zero_tol = 1e-10);

// Connected components of the sparsity graph of A + A*; singleton rows are kept.
std::vector<std::vector<Eigen::Index>> sparsity_components(const std::vector<const SpMat*>& mats, Eigen::Index n);

// Smallest eigenvalue of a Hermitian operator.
double min_eigenvalue(const SparseOperator& a, double tol = 1e-11);

}  // namespace hhf
