#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "synccert/graph.hpp"

namespace synccert {

/// Sector [lo, hi] bounding theta(x)/x for x != 0; requires 0 < lo <= hi < inf.
struct SectorBound {
  double lo = 1.0;
  double hi = 1.0;

  bool is_point() const noexcept { return lo == hi; }
  double midpoint() const noexcept { return 0.5 * (lo + hi); }
  void validate() const;  // throws InadmissibleParams
};

/// Relative dissipativity parameters of one edge. `gamma` is the value used in
/// every certificate quantity and is min(gamma_raw, 0).
struct EdgeCertificate {
  double nu = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
  double gamma_raw = 0.0;
};

/// Throws InadmissibleParams if nu > 0. Clamps gamma to <= 0 and keeps the original.
EdgeCertificate make_edge_certificate(double nu, double gamma, double beta);

struct NetworkCertificate {
  std::vector<EdgeCertificate> edges;  // edge order of the graph
  std::vector<double> nu_tilde;        // sum of nu_k over edges incident to each node
  double beta_bar = 0.0;

  int edge_count() const noexcept { return static_cast<int>(edges.size()); }
};

NetworkCertificate make_network_certificate(const Graph& g, std::vector<EdgeCertificate> edges);

struct MarginReport {
  std::vector<double> slack;
  std::vector<bool> positive;
  bool verdict = false;
  double min_slack = 0.0;
};

/// Distributed per-edge synchronisation margin
///   (2 + r~_k)/hi_k - (1 + lo_k^2) r-bar_k / (2 lo_k^2) + gamma_k / lo_k^2 - r_i|nu~_i| - r_j|nu~_j|.
/// Verdict is true iff every slack exceeds kStrictPositivity.
MarginReport theorem1_margin(const EdgeStats& stats, std::span<const SectorBound> sectors,
                             std::span<const EdgeCertificate> certs);

struct Lemma1Matrices {
  Eigen::MatrixXd gamma;    // diag(gamma_k), p x p
  Eigen::MatrixXd xi;       // diag(nu~_i), n x n
  Eigen::MatrixXd dt_xi_d;  // D^T Xi D, p x p
  Eigen::MatrixXd phi;
  Eigen::MatrixXd phi_bar;
};

Lemma1Matrices lemma1_matrices(const Graph& g, const NetworkCertificate& cert);

struct PsiQ {
  Eigen::MatrixXd psi;  // D^T Xi D - Phi_bar + (2I + Phi) Lambda_hi^-1
  Eigen::MatrixXd q;    // Psi + Lambda_lo^-1 (Gamma - Phi_bar) Lambda_lo^-1
  double q_min_eigenvalue = 0.0;
};

PsiQ assemble_psi_q(const Graph& g, const NetworkCertificate& cert, std::span<const SectorBound> sectors);

struct GainBound {
  Eigen::MatrixXd psi;
  Eigen::MatrixXd q;
  double mu_lo = 0.0;      // min over samples of lambda_min(H Psi H + Gamma - Phi_bar)
  double mu_hi = 0.0;      // max over samples of lambda_max(H Psi H)
  double phi_max = 0.0;    // max_k (2 + r~_k)
  double alpha_max = 0.0;  // max_k hi_k
  double beta_bar = 0.0;
  double rho = 0.0;
  double eps = 0.0;
  bool certified = false;         // mu_lo > kStrictPositivity
  bool sampled_estimate = false;  // true unless every sector is a point
  int sample_count = 0;
};

/// Gain and offset of ||D^T Y||_T <= rho ||W||_T + eps from slope samples
/// eta in prod_k [lo_k, hi_k]. When mu_lo <= 0 the result has certified = false
/// and rho = eps = +inf.
GainBound gain_bound(const Graph& g, const NetworkCertificate& cert, std::span<const SectorBound> sectors,
                     std::span<const Eigen::VectorXd> slope_samples);

/// Slope samples covering the sector box: every vertex when p <= 12 (otherwise
/// the two extreme corners), the midpoint, and `random_count` seeded interior points.
/// Point sectors collapse to a single sample.
std::vector<Eigen::VectorXd> sector_box_samples(std::span<const SectorBound> sectors, int random_count = 0,
                                                std::uint64_t seed = 0);

/// Finite-horizon inner products entering the network dissipativity inequality.
struct Lemma1InnerProducts {
  double v_weighted_dty = 0.0;  // <V, (2I + Phi) D^T Y>_T
  double dty_quadratic = 0.0;   // <D^T Y, (Gamma - Phi_bar) D^T Y>_T
  double v_quadratic = 0.0;     // <V, (D^T Xi D - Phi_bar) V>_T
  double beta_bar = 0.0;

  double lhs() const noexcept { return -v_weighted_dty; }
  double rhs() const noexcept { return dty_quadratic + v_quadratic + beta_bar; }
};

/// LHS - RHS; nonnegative up to discretisation error whenever the edge certificates hold.
double lemma1_residual(const Lemma1InnerProducts& ip);

}  // namespace synccert
