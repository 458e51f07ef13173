#include "synccert/symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "synccert/error.hpp"

namespace synccert {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

Eigen::VectorXd jacobi_eigenvalues(const Eigen::MatrixXd& input, const JacobiOptions& opts) {
  if (input.rows() != input.cols())
    throw DimensionMismatch("jacobi_eigenvalues: matrix is " + std::to_string(input.rows()) + "x" +
                            std::to_string(input.cols()));
  const Eigen::Index n = input.rows();
  Eigen::MatrixXd a = input.selfadjointView<Eigen::Upper>();
  if (n <= 1) return a.diagonal();

  const double scale = a.norm();
  if (scale == 0.0) return Eigen::VectorXd::Zero(n);

  for (int sweep = 0; sweep <= opts.max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= opts.tol * scale) {
      Eigen::VectorXd d = a.diagonal();
      std::sort(d.data(), d.data() + n);
      return d;
    }
    if (sweep == opts.max_sweeps) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        // Rutishauser's stable rotation: t = tan(phi) solves t^2 + 2 theta t - 1 = 0.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
          a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
        }
      }
    }
  }
  throw NonConvergence("jacobi_eigenvalues: no convergence after " + std::to_string(opts.max_sweeps) +
                       " sweeps (off-diagonal norm " + std::to_string(off_diagonal_norm(a)) + ")");
}

double min_eigenvalue(const Eigen::MatrixXd& a) { return jacobi_eigenvalues(a)(0); }

double max_eigenvalue(const Eigen::MatrixXd& a) {
  const Eigen::VectorXd d = jacobi_eigenvalues(a);
  return d(d.size() - 1);
}

}  // namespace synccert
