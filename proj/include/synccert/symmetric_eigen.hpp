#pragma once

#include <Eigen/Dense>

namespace synccert {

struct JacobiOptions {
  int max_sweeps = 100;
  // Converged once the off-diagonal Frobenius norm falls below tol * ||A||_F.
  double tol = 1e-14;
};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
/// Only the upper triangle is read. Throws NonConvergence after max_sweeps.
Eigen::VectorXd jacobi_eigenvalues(const Eigen::MatrixXd& a, const JacobiOptions& opts = {});

double min_eigenvalue(const Eigen::MatrixXd& a);
double max_eigenvalue(const Eigen::MatrixXd& a);

}  // namespace synccert
