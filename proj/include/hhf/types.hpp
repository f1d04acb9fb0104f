#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace hhf {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

// One-particle basis index for (site x, spin s), s = 0 for up, 1 for down.
inline Eigen::Index spin_index(std::size_t x, int s) { return static_cast<Eigen::Index>(2 * x + static_cast<std::size_t>(s)); }
// Spin label sigma = +1 (up) / -1 (down) to slot 0 / 1.
inline int spin_slot(int sigma) { return sigma > 0 ? 0 : 1; }

}  // namespace hhf
