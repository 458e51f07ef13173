#pragma once

#include <array>
#include <span>
#include <vector>

#include "synccert/certificates.hpp"
#include "synccert/graph.hpp"

namespace synccert {

/// One Goodwin oscillator
///   x1' = -a1 x1 - y4 + b1 u,  x2' = -a2 x2 + b2 x1,  x3' = -a3 x3 + b3 x2,
///   y4 = -1 / (x3^hill + 1),   output y = x1.
/// Only b1 may differ between agents of one network.
struct GoodwinParams {
  double a1 = 0.5;
  double a2 = 1.0;
  double a3 = 1.0;
  double b2 = 1.5;
  double b3 = 1.5;
  double b1 = 1.0;
  int hill = 14;

  void validate() const;
  bool shares_chain_with(const GoodwinParams& other) const noexcept;
};

using AgentState = std::array<double, 3>;

/// Repression term y4 = -1 / (x3^hill + 1).
double repression(double x3, int hill);

/// Vector field of one agent driven by input u.
AgentState goodwin_rhs(const GoodwinParams& g, const AgentState& x, double u);

/// Closed-form slope constant used by the certificate (requires hill >= 2).
double delta(int hill);

/// max over x > 0 of hill x^(hill-1) / (x^hill + 1)^2, by golden-section search.
/// This is the true Lipschitz constant of the repression term.
double delta_oracle(int hill);

enum class DeltaMode { ClosedForm, Oracle };

/// Free parameters of the pairwise certificate; theta3 must lie in (b3^2/(2 a3), 2 a2).
struct CertParams {
  double theta = 2.0;
  double theta3 = 1.5;
};

struct DerivedCertParams {
  double delta = 0.0;
  double theta1 = 0.0;  // delta^2 theta3 / (2 a3 theta3 - b3^2)
  double theta2 = 0.0;  // b2^2 / (2 a2 - theta3)
};

/// Throws InadmissibleParams naming the violated bound.
DerivedCertParams derive_cert_params(const GoodwinParams& chain, const CertParams& cp,
                                     DeltaMode mode = DeltaMode::ClosedForm);

/// gamma = a1 - theta - theta1/2 - theta2/2, shared by every edge of the network.
double certificate_gamma(const GoodwinParams& chain, const CertParams& cp, DeltaMode mode = DeltaMode::ClosedForm);

/// Heterogeneity measure max(|b1_i - 1|, |b1_j - 1|).
double gain_mismatch(const GoodwinParams& gi, const GoodwinParams& gj) noexcept;

/// beta = -1/2 sum_q (x_iq(0) - x_jq(0))^2.
double initial_bias(const AgentState& xi0, const AgentState& xj0) noexcept;

/// Pairwise certificate (nu, gamma, beta) for two agents sharing a1..b3 and hill.
EdgeCertificate certify_edge(const GoodwinParams& gi, const GoodwinParams& gj, const CertParams& cp,
                             const AgentState& xi0, const AgentState& xj0, DeltaMode mode = DeltaMode::ClosedForm);

/// Same as certify_edge with the heterogeneity measure supplied by the caller
/// (uniform mode passes the network-wide maximum).
EdgeCertificate certify_edge_with_mismatch(const GoodwinParams& gi, const GoodwinParams& gj, const CertParams& cp,
                                           const AgentState& xi0, const AgentState& xj0, double mismatch,
                                           DeltaMode mode = DeltaMode::ClosedForm);

enum class CertMode { UniformWorstCase, PerEdge };

NetworkCertificate certify_network(std::span<const GoodwinParams> agents, const Graph& g, const CertParams& cp,
                                   CertMode mode, std::span<const AgentState> x0,
                                   DeltaMode delta_mode = DeltaMode::ClosedForm);

/// Inclusive linear grid; n == 1 selects `lo` alone.
struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int n = 1;

  std::vector<double> points() const;
};

struct SearchPoint {
  double theta = 0.0;
  double theta3 = 0.0;
  double min_slack = 0.0;  // NaN when inadmissible
  bool feasible = false;   // theta3 admissible, so a certificate exists
};

struct SearchResult {
  CertParams best;
  double best_slack = 0.0;
  std::vector<SearchPoint> grid;  // theta-major grid order, then extra points
};

/// Grid search maximising the minimum per-edge margin over (theta, theta3).
/// Ties go to the smaller theta, then the smaller theta3. Throws
/// InadmissibleParams when no grid point is admissible.
SearchResult search_params(std::span<const GoodwinParams> agents, const Graph& g,
                           std::span<const SectorBound> sectors, const GridAxis& theta, const GridAxis& theta3,
                           CertMode mode, std::span<const AgentState> x0, std::span<const CertParams> extra = {},
                           DeltaMode delta_mode = DeltaMode::ClosedForm);

}  // namespace synccert
