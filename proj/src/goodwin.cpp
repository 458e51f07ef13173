#include "synccert/goodwin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "synccert/error.hpp"

namespace synccert {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

double int_pow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

void require_common_chain(std::span<const GoodwinParams> agents) {
  for (std::size_t i = 1; i < agents.size(); ++i)
    if (!agents[0].shares_chain_with(agents[i]))
      throw InadmissibleParams("agent " + std::to_string(i + 1) +
                               " differs from agent 1 in a1, a2, a3, b2, b3 or hill; only b1 may vary");
}

}  // namespace

void GoodwinParams::validate() const {
  if (!(a1 > 0 && a2 > 0 && a3 > 0 && b2 > 0 && b3 > 0 && b1 > 0))
    throw InadmissibleParams("Goodwin parameters a1, a2, a3, b2, b3, b1 must all be positive");
  if (hill < 2) throw InadmissibleParams("Hill coefficient must be >= 2, got " + std::to_string(hill));
}

bool GoodwinParams::shares_chain_with(const GoodwinParams& o) const noexcept {
  return a1 == o.a1 && a2 == o.a2 && a3 == o.a3 && b2 == o.b2 && b3 == o.b3 && hill == o.hill;
}

double repression(double x3, int hill) { return -1.0 / (int_pow(x3, hill) + 1.0); }

AgentState goodwin_rhs(const GoodwinParams& g, const AgentState& x, double u) {
  return {-g.a1 * x[0] - repression(x[2], g.hill) + g.b1 * u, -g.a2 * x[1] + g.b2 * x[0], -g.a3 * x[2] + g.b3 * x[1]};
}

double delta(int hill) {
  if (hill < 2) throw InadmissibleParams("delta requires hill >= 2, got " + std::to_string(hill));
  const double p = hill;
  const double root = std::pow(std::pow((p - 1.0) / (p + 1.0), p), 1.0 / (p - 1.0));
  return p * (p - 1.0) / ((root + 1.0) * (root + 1.0) * (p + 1.0));
}

double delta_oracle(int hill) {
  if (hill < 2) throw InadmissibleParams("delta_oracle requires hill >= 2, got " + std::to_string(hill));
  // The slope is unimodal on (0, inf) with its peak below 1.
  const auto slope = [hill](double x) {
    const double xp = int_pow(x, hill);
    return hill * int_pow(x, hill - 1) / ((xp + 1.0) * (xp + 1.0));
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 1.5;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = slope(c), fd = slope(d);
  while (b - a > 1e-13) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = slope(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = slope(d);
    }
  }
  return slope(0.5 * (a + b));
}

DerivedCertParams derive_cert_params(const GoodwinParams& chain, const CertParams& cp, DeltaMode mode) {
  chain.validate();
  if (!(cp.theta > 0.0)) throw InadmissibleParams("theta must be > 0, got " + num(cp.theta));
  const double lower = chain.b3 * chain.b3 / (2.0 * chain.a3);
  const double upper = 2.0 * chain.a2;
  if (!(cp.theta3 > lower))
    throw InadmissibleParams("theta3 = " + num(cp.theta3) + " violates theta3 > b3^2/(2 a3) = " + num(lower) +
                             " (theta1 would be nonpositive)");
  if (!(cp.theta3 < upper))
    throw InadmissibleParams("theta3 = " + num(cp.theta3) + " violates theta3 < 2 a2 = " + num(upper) +
                             " (theta2 would be nonpositive)");
  DerivedCertParams d;
  d.delta = mode == DeltaMode::ClosedForm ? delta(chain.hill) : delta_oracle(chain.hill);
  d.theta1 = d.delta * d.delta * cp.theta3 / (2.0 * chain.a3 * cp.theta3 - chain.b3 * chain.b3);
  d.theta2 = chain.b2 * chain.b2 / (2.0 * chain.a2 - cp.theta3);
  return d;
}

double certificate_gamma(const GoodwinParams& chain, const CertParams& cp, DeltaMode mode) {
  const DerivedCertParams d = derive_cert_params(chain, cp, mode);
  return chain.a1 - cp.theta - 0.5 * d.theta1 - 0.5 * d.theta2;
}

double gain_mismatch(const GoodwinParams& gi, const GoodwinParams& gj) noexcept {
  return std::max(std::abs(gi.b1 - 1.0), std::abs(gj.b1 - 1.0));
}

double initial_bias(const AgentState& xi0, const AgentState& xj0) noexcept {
  double s = 0.0;
  for (std::size_t q = 0; q < 3; ++q) s += (xi0[q] - xj0[q]) * (xi0[q] - xj0[q]);
  return -0.5 * s;
}

EdgeCertificate certify_edge_with_mismatch(const GoodwinParams& gi, const GoodwinParams& gj, const CertParams& cp,
                                           const AgentState& xi0, const AgentState& xj0, double mismatch,
                                           DeltaMode mode) {
  gi.validate();
  gj.validate();
  if (!gi.shares_chain_with(gj))
    throw InadmissibleParams("certify_edge: agents must share a1, a2, a3, b2, b3 and hill; only b1 may differ");
  const double gamma = certificate_gamma(gi, cp, mode);
  const double nu = -mismatch * mismatch / (2.0 * cp.theta);
  return make_edge_certificate(nu, gamma, initial_bias(xi0, xj0));
}

EdgeCertificate certify_edge(const GoodwinParams& gi, const GoodwinParams& gj, const CertParams& cp,
                             const AgentState& xi0, const AgentState& xj0, DeltaMode mode) {
  return certify_edge_with_mismatch(gi, gj, cp, xi0, xj0, gain_mismatch(gi, gj), mode);
}

NetworkCertificate certify_network(std::span<const GoodwinParams> agents, const Graph& g, const CertParams& cp,
                                   CertMode mode, std::span<const AgentState> x0, DeltaMode delta_mode) {
  const auto n = static_cast<std::size_t>(g.node_count());
  if (agents.size() != n)
    throw DimensionMismatch("agents has " + std::to_string(agents.size()) + " entries, graph has " +
                            std::to_string(n) + " nodes");
  if (x0.size() != n)
    throw DimensionMismatch("initial states has " + std::to_string(x0.size()) + " entries, graph has " +
                            std::to_string(n) + " nodes");
  require_common_chain(agents);

  double uniform = 0.0;
  for (const auto& e : g.edges())
    uniform = std::max(uniform, gain_mismatch(agents[static_cast<std::size_t>(e.lo - 1)],
                                              agents[static_cast<std::size_t>(e.hi - 1)]));

  std::vector<EdgeCertificate> certs;
  certs.reserve(g.edges().size());
  for (const auto& e : g.edges()) {
    const auto i = static_cast<std::size_t>(e.lo - 1);
    const auto j = static_cast<std::size_t>(e.hi - 1);
    const double mismatch = mode == CertMode::UniformWorstCase ? uniform : gain_mismatch(agents[i], agents[j]);
    certs.push_back(certify_edge_with_mismatch(agents[i], agents[j], cp, x0[i], x0[j], mismatch, delta_mode));
  }
  return make_network_certificate(g, std::move(certs));
}

std::vector<double> GridAxis::points() const {
  if (n < 1) throw InadmissibleParams("grid axis needs at least one point");
  if (n == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
  return out;
}

SearchResult search_params(std::span<const GoodwinParams> agents, const Graph& g,
                           std::span<const SectorBound> sectors, const GridAxis& theta, const GridAxis& theta3,
                           CertMode mode, std::span<const AgentState> x0, std::span<const CertParams> extra,
                           DeltaMode delta_mode) {
  if (agents.empty()) throw DimensionMismatch("search_params: no agents");
  require_common_chain(agents);
  const EdgeStats stats = edge_stats(g);

  std::vector<CertParams> candidates;
  for (double t : theta.points())
    for (double t3 : theta3.points()) candidates.push_back({t, t3});
  candidates.insert(candidates.end(), extra.begin(), extra.end());

  SearchResult result;
  result.best_slack = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (const CertParams& cp : candidates) {
    SearchPoint pt{cp.theta, cp.theta3, std::numeric_limits<double>::quiet_NaN(), false};
    try {
      const NetworkCertificate cert = certify_network(agents, g, cp, mode, x0, delta_mode);
      pt.min_slack = theorem1_margin(stats, sectors, cert.edges).min_slack;
      pt.feasible = true;
    } catch (const InadmissibleParams&) {
      // recorded as infeasible
    }
    result.grid.push_back(pt);
    if (!pt.feasible) continue;
    const bool better =
        !any || pt.min_slack > result.best_slack ||
        (pt.min_slack == result.best_slack &&
         (cp.theta < result.best.theta || (cp.theta == result.best.theta && cp.theta3 < result.best.theta3)));
    if (better) {
      result.best = cp;
      result.best_slack = pt.min_slack;
      any = true;
    }
  }
  if (!any) {
    const double lower = agents[0].b3 * agents[0].b3 / (2.0 * agents[0].a3);
    throw InadmissibleParams("search_params: no admissible grid point; theta must be > 0 and theta3 must lie in (" +
                             num(lower) + ", " + num(2.0 * agents[0].a2) + ")");
  }
  return result;
}

}  // namespace synccert
