#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace nodalab {

// Smallest eigenpairs of K x = mu M x (K symmetric, M SPD) by shift-invert
// subspace iteration: factor K + M once, iterate a block, Rayleigh-Ritz in
// the M inner product.  Deterministic for a fixed seed.
struct EigenResult {
  std::vector<double> values;
  Eigen::MatrixXd vectors;  // columns, M-orthonormal
  int iterations = 0;
  std::vector<double> residual_history;
  bool converged = false;
};

EigenResult sym_generalized_eig(const Eigen::SparseMatrix<double>& K,
                                const Eigen::SparseMatrix<double>& M, int k,
                                unsigned seed = 12345, double tol = 1e-10,
                                int max_iterations = 400);

}  // namespace nodalab
