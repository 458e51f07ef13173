#pragma once

#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "synccert/certificates.hpp"
#include "synccert/coupling.hpp"
#include "synccert/disturbance.hpp"
#include "synccert/goodwin.hpp"
#include "synccert/graph.hpp"

namespace synccert {

/// Closed network: Goodwin agents on the graph nodes, one coupling and one
/// disturbance source per edge. Agent outputs are the first species x_{i,1}.
struct NetworkModel {
  Graph graph;
  std::vector<GoodwinParams> agents;
  std::vector<Coupling> couplings;
  std::vector<DisturbanceSpec> disturbances;
  std::vector<AgentState> x0;

  void validate() const;
  std::vector<SectorBound> sectors() const;
  Eigen::VectorXd initial_state() const;
};

struct CouplingSignals {
  Eigen::VectorXd x;  // D^T Y + W
  Eigen::VectorXd v;  // theta_k(x_k)
  Eigen::VectorXd u;  // -D V
};

/// U = -D Theta(D^T Y + W).
CouplingSignals coupling_input(std::span<const double> y, std::span<const double> w, const Graph& g,
                               std::span<const Coupling> couplings);

/// One RK4 step of the stacked state (x_{1,1..3}, ..., x_{n,1..3}) with the
/// disturbance `w` held over [t, t + dt]. Throws BlowUp on a non-finite result.
Eigen::VectorXd step(const Eigen::VectorXd& state, double t, double dt, const NetworkModel& model,
                     std::span<const double> w);

/// Index of the unordered node pair (i, j), i < j (1-based) in row-major upper-triangle order.
int pair_index(int n, int i, int j);

/// Running finite-horizon integrals, accumulated by the trapezoidal rule
/// on each step using one-sided limits of the held disturbance.
struct RunningIntegrals {
  Eigen::VectorXd dty_sq;     // per edge: ||(D^T Y)_k||^2
  Eigen::VectorXd w_sq;       // per edge: ||W_k||^2
  Eigen::VectorXd v_sq;       // per edge: ||V_k||^2
  Eigen::VectorXd v_dty;      // per edge: <V_k, (D^T Y)_k>
  Eigen::VectorXd u_sq;       // per node: ||u_i||^2
  Eigen::VectorXd pair_du_dy; // per node pair: <u_i - u_j, y_i - y_j>
  Eigen::VectorXd pair_dy_sq; // per node pair: ||y_i - y_j||^2

  static RunningIntegrals zeros(int n, int p);
  double norm_dty() const { return std::sqrt(dty_sq.sum()); }
  double norm_w() const { return std::sqrt(w_sq.sum()); }
};

struct TraceRow {
  double t = 0.0;
  Eigen::VectorXd x;  // stacked 3n state
  Eigen::VectorXd y;
  Eigen::VectorXd u;
  Eigen::VectorXd edge_x;  // coupling argument
  Eigen::VectorXd edge_v;  // coupling output
  Eigen::VectorXd edge_w;  // disturbance held on the step ending at t (first step's value at t = 0)
  RunningIntegrals acc;
};

struct SimulationOptions {
  double dt = 1e-3;
  double horizon = 100.0;
  int stride = 100;  // record every stride-th step; the final step is always recorded
};

struct SimulationTrace {
  double dt = 0.0;
  long steps = 0;
  std::vector<TraceRow> rows;

  const TraceRow& at_time(double t) const;  // row whose time is closest to t
};

/// Integrates the network over [0, horizon]. Deterministic for fixed disturbance seeds.
SimulationTrace run(const NetworkModel& model, const SimulationOptions& opts);

inline constexpr double kCheckTolerance = 1e-6;

struct BoundCheck {
  std::vector<double> t;
  std::vector<double> margin;  // rho ||W||_T + eps - ||D^T Y||_T
  double min_margin = 0.0;
  bool verdict = false;  // all margins >= -tol (1 + rho ||W||_T)
};

/// Throws Uncertified when gb.certified is false.
BoundCheck bound_check(const SimulationTrace& trace, const GainBound& gb, double tol = kCheckTolerance);

Lemma1InnerProducts lemma1_inner_products(const RunningIntegrals& acc, const EdgeStats& stats,
                                          const NetworkCertificate& cert);

struct PairInequality {
  double lhs = 0.0;  // <u_i - u_j, y_i - y_j>_T
  double rhs = 0.0;  // nu (||u_i||^2 + ||u_j||^2) + gamma ||y_i - y_j||^2 + beta
  double residual() const noexcept { return lhs - rhs; }
};

/// Discretised pairwise dissipativity inequality for agents i < j (1-based),
/// using the certificate's unclamped gamma.
PairInequality pair_inequality(const RunningIntegrals& acc, int n, int i, int j, const EdgeCertificate& cert);

/// Relative tolerance test shared by the network and pairwise dissipativity checks.
inline bool within_tolerance(double residual, double rhs, double tol = kCheckTolerance) {
  return residual >= -tol * (1.0 + std::abs(rhs));
}

/// Per-row realised slopes eta_k = V_k / X_k (sector midpoint when |X_k| <= 1e-12),
/// clipped into the sector box, for post hoc gain estimation.
std::vector<Eigen::VectorXd> realised_slopes(const SimulationTrace& trace, std::span<const SectorBound> sectors);

/// max_{i<j} |y_i - y_j| in one row.
double max_disagreement(const TraceRow& row);

struct TraceCsvOptions {
  bool full = false;
  const GainBound* gain = nullptr;  // bound_margin column is "nan" without it
  const EdgeStats* stats = nullptr;  // with cert: adds a lemma1_residual column
  const NetworkCertificate* cert = nullptr;
};

/// Columns: t, y_1..y_n, normDTY, normW, bound_margin[, lemma1_residual][, X_e, V_e, W_e per edge].
/// Values use 17 significant digits.
void write_trace_csv(std::ostream& os, const SimulationTrace& trace, const Graph& g, const TraceCsvOptions& opts);

}  // namespace synccert
