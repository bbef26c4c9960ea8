#include "nodalab/eigensolver.hpp"

#include <random>
#include <stdexcept>

#include <Eigen/SparseCholesky>

namespace nodalab {

EigenResult sym_generalized_eig(const Eigen::SparseMatrix<double>& K,
                                const Eigen::SparseMatrix<double>& M, int k,
                                unsigned seed, double tol, int max_iterations) {
  const int n = static_cast<int>(K.rows());
  if (k < 1 || k > n) throw std::invalid_argument("eig: bad subspace size");
  const int p = std::min(n, std::max(2 * k, k + 8));

  // shift by -1 so the factored matrix stays positive definite even when the
  // potential part of K dips slightly negative
  Eigen::SparseMatrix<double> A = K + M;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(A);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig: factorization failed");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd X(n, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = gauss(rng);

  EigenResult out;
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(k);
  for (int iter = 0; iter < max_iterations; ++iter) {
    const Eigen::MatrixXd Y = solver.solve(M * X);
    // Rayleigh-Ritz on span(Y)
    const Eigen::MatrixXd KY = K * Y;
    const Eigen::MatrixXd MY = M * Y;
    const Eigen::MatrixXd Ar = Y.transpose() * KY;
    const Eigen::MatrixXd Br = Y.transpose() * MY;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Ar, Br);
    if (ges.info() != Eigen::Success)
      throw std::runtime_error("eig: dense Rayleigh-Ritz failed");
    X = Y * ges.eigenvectors();

    // residuals of the k requested pairs
    double worst = 0.0;
    for (int j = 0; j < k; ++j) {
      const double mu = ges.eigenvalues()(j);
      const Eigen::VectorXd x = X.col(j);
      const double rnorm = (K * x - mu * (M * x)).norm();
      const double scale = (std::abs(mu) + 1.0) * (M * x).norm();
      worst = std::max(worst, rnorm / scale);
    }
    out.residual_history.push_back(worst);
    out.iterations = iter + 1;

    double drift = 0.0;
    for (int j = 0; j < k; ++j)
      drift = std::max(drift, std::abs(ges.eigenvalues()(j) - prev(j)) /
                                  (std::abs(ges.eigenvalues()(j)) + 1.0));
    prev = ges.eigenvalues().head(k);

    if (worst < tol && drift < tol) {
      out.converged = true;
      out.values.assign(prev.data(), prev.data() + k);
      out.vectors = X.leftCols(k);
      return out;
    }
  }
  out.values.assign(prev.data(), prev.data() + k);
  out.vectors = X.leftCols(k);
  throw std::runtime_error(
      "eig: subspace iteration did not converge; last residual " +
      std::to_string(out.residual_history.empty()
                         ? -1.0
                         : out.residual_history.back()));
}

}  // namespace nodalab
