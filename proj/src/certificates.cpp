#include "synccert/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "synccert/error.hpp"
#include "synccert/symmetric_eigen.hpp"

namespace synccert {

namespace {

void require_edges(const char* what, std::size_t got, int p) {
  if (static_cast<int>(got) != p)
    throw DimensionMismatch(std::string(what) + " has " + std::to_string(got) + " entries, graph has " +
                            std::to_string(p) + " edges");
}

Eigen::VectorXd gamma_vector(const NetworkCertificate& cert) {
  Eigen::VectorXd v(cert.edge_count());
  for (int k = 0; k < cert.edge_count(); ++k) v(k) = cert.edges[static_cast<std::size_t>(k)].gamma;
  return v;
}

}  // namespace

void SectorBound::validate() const {
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi))
    throw InadmissibleParams("sector bound must satisfy 0 < lo <= hi < inf, got [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
}

EdgeCertificate make_edge_certificate(double nu, double gamma, double beta) {
  if (!(nu <= 0.0)) throw InadmissibleParams("nu must be <= 0, got " + std::to_string(nu));
  return EdgeCertificate{nu, std::min(gamma, 0.0), beta, gamma};
}

NetworkCertificate make_network_certificate(const Graph& g, std::vector<EdgeCertificate> edges) {
  require_edges("edge certificate list", edges.size(), g.edge_count());
  NetworkCertificate cert;
  cert.nu_tilde.assign(static_cast<std::size_t>(g.node_count()), 0.0);
  for (int k = 0; k < g.edge_count(); ++k) {
    auto& e = edges[static_cast<std::size_t>(k)];
    if (!(e.nu <= 0.0))
      throw InadmissibleParams("edge " + g.edge(k).label() + ": nu must be <= 0, got " + std::to_string(e.nu));
    e.gamma = std::min(e.gamma_raw, 0.0);
    cert.nu_tilde[static_cast<std::size_t>(g.edge(k).lo - 1)] += e.nu;
    cert.nu_tilde[static_cast<std::size_t>(g.edge(k).hi - 1)] += e.nu;
    cert.beta_bar += e.beta;
  }
  cert.edges = std::move(edges);
  return cert;
}

MarginReport theorem1_margin(const EdgeStats& stats, std::span<const SectorBound> sectors,
                             std::span<const EdgeCertificate> certs) {
  const int p = stats.edge_count();
  require_edges("sector list", sectors.size(), p);
  require_edges("certificate list", certs.size(), p);

  std::vector<double> nu_tilde(static_cast<std::size_t>(stats.node_count()), 0.0);
  for (int k = 0; k < p; ++k) {
    const double nu = certs[static_cast<std::size_t>(k)].nu;
    if (!(nu <= 0.0))
      throw InadmissibleParams("edge " + stats.edges[static_cast<std::size_t>(k)].label() +
                               ": nu must be <= 0, got " + std::to_string(nu));
    nu_tilde[static_cast<std::size_t>(stats.edges[static_cast<std::size_t>(k)].lo - 1)] += nu;
    nu_tilde[static_cast<std::size_t>(stats.edges[static_cast<std::size_t>(k)].hi - 1)] += nu;
  }

  MarginReport out;
  out.verdict = true;
  out.min_slack = std::numeric_limits<double>::infinity();
  for (int k = 0; k < p; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const SectorBound& s = sectors[uk];
    s.validate();
    const Edge& e = stats.edges[uk];
    const double lo2 = s.lo * s.lo;
    const double gamma = std::min(certs[uk].gamma, 0.0);
    const auto i = static_cast<std::size_t>(e.lo - 1);
    const auto j = static_cast<std::size_t>(e.hi - 1);
    const double slack = (2.0 + stats.common[uk]) / s.hi - (1.0 + lo2) * stats.exclusive[uk] / (2.0 * lo2) +
                         gamma / lo2 - stats.degree[i] * std::abs(nu_tilde[i]) -
                         stats.degree[j] * std::abs(nu_tilde[j]);
    out.slack.push_back(slack);
    out.positive.push_back(slack > kStrictPositivity);
    out.verdict = out.verdict && out.positive.back();
    out.min_slack = std::min(out.min_slack, slack);
  }
  if (p == 0) out.min_slack = 0.0;
  return out;
}

Lemma1Matrices lemma1_matrices(const Graph& g, const NetworkCertificate& cert) {
  require_edges("certificate", cert.edges.size(), g.edge_count());
  const Eigen::MatrixXd d = incidence(g).cast<double>();
  const auto weights = weight_matrices(edge_stats(g));
  Lemma1Matrices m;
  m.gamma = gamma_vector(cert).asDiagonal();
  m.xi = Eigen::Map<const Eigen::VectorXd>(cert.nu_tilde.data(), g.node_count()).asDiagonal();
  m.dt_xi_d = d.transpose() * m.xi * d;
  m.phi = weights.phi;
  m.phi_bar = weights.phi_bar;
  return m;
}

PsiQ assemble_psi_q(const Graph& g, const NetworkCertificate& cert, std::span<const SectorBound> sectors) {
  const int p = g.edge_count();
  require_edges("sector list", sectors.size(), p);
  const Lemma1Matrices m = lemma1_matrices(g, cert);
  Eigen::VectorXd inv_hi(p), inv_lo(p);
  for (int k = 0; k < p; ++k) {
    sectors[static_cast<std::size_t>(k)].validate();
    inv_hi(k) = 1.0 / sectors[static_cast<std::size_t>(k)].hi;
    inv_lo(k) = 1.0 / sectors[static_cast<std::size_t>(k)].lo;
  }
  const Eigen::MatrixXd two_plus_phi = 2.0 * Eigen::MatrixXd::Identity(p, p) + m.phi;
  PsiQ out;
  out.psi = m.dt_xi_d - m.phi_bar + two_plus_phi * inv_hi.asDiagonal();
  out.q = out.psi + inv_lo.asDiagonal() * (m.gamma - m.phi_bar) * inv_lo.asDiagonal();
  out.q_min_eigenvalue = p > 0 ? min_eigenvalue(out.q) : 0.0;
  return out;
}

GainBound gain_bound(const Graph& g, const NetworkCertificate& cert, std::span<const SectorBound> sectors,
                     std::span<const Eigen::VectorXd> slope_samples) {
  const int p = g.edge_count();
  if (slope_samples.empty()) throw InadmissibleParams("gain_bound: empty slope sample set");
  const PsiQ pq = assemble_psi_q(g, cert, sectors);
  const Lemma1Matrices m = lemma1_matrices(g, cert);
  const Eigen::MatrixXd offset = m.gamma - m.phi_bar;
  const EdgeStats stats = edge_stats(g);

  GainBound gb;
  gb.psi = pq.psi;
  gb.q = pq.q;
  gb.beta_bar = cert.beta_bar;
  gb.mu_lo = std::numeric_limits<double>::infinity();
  gb.mu_hi = -std::numeric_limits<double>::infinity();
  for (const auto& eta : slope_samples) {
    if (eta.size() != p)
      throw DimensionMismatch("slope sample has " + std::to_string(eta.size()) + " entries, graph has " +
                              std::to_string(p) + " edges");
    for (int k = 0; k < p; ++k) {
      const SectorBound& s = sectors[static_cast<std::size_t>(k)];
      if (eta(k) < s.lo || eta(k) > s.hi)
        throw InadmissibleParams("slope sample " + std::to_string(eta(k)) + " on edge " + g.edge(k).label() +
                                 " lies outside [" + std::to_string(s.lo) + ", " + std::to_string(s.hi) + "]");
    }
    const Eigen::MatrixXd mm = eta.asDiagonal() * pq.psi * eta.asDiagonal();
    const Eigen::VectorXd eig_m = jacobi_eigenvalues(mm);
    gb.mu_hi = std::max(gb.mu_hi, eig_m(p - 1));
    gb.mu_lo = std::min(gb.mu_lo, min_eigenvalue(mm + offset));
  }
  gb.sample_count = static_cast<int>(slope_samples.size());

  for (int k = 0; k < p; ++k) {
    gb.phi_max = std::max(gb.phi_max, 2.0 + stats.common[static_cast<std::size_t>(k)]);
    gb.alpha_max = std::max(gb.alpha_max, sectors[static_cast<std::size_t>(k)].hi);
    gb.sampled_estimate = gb.sampled_estimate || !sectors[static_cast<std::size_t>(k)].is_point();
  }

  gb.certified = gb.mu_lo > kStrictPositivity;
  if (!gb.certified) {
    gb.rho = gb.eps = std::numeric_limits<double>::infinity();
    return gb;
  }
  const double a2 = gb.alpha_max * gb.alpha_max;
  gb.rho = std::sqrt(0.5 + (4.0 * a2 * gb.phi_max * gb.phi_max + 8.0 * gb.mu_hi * gb.mu_hi) / (gb.mu_lo * gb.mu_lo));
  gb.eps = std::sqrt(2.0 * std::abs(gb.beta_bar) / gb.mu_lo);
  return gb;
}

std::vector<Eigen::VectorXd> sector_box_samples(std::span<const SectorBound> sectors, int random_count,
                                                std::uint64_t seed) {
  const auto p = static_cast<Eigen::Index>(sectors.size());
  Eigen::VectorXd lo(p), hi(p);
  bool all_point = true;
  for (Eigen::Index k = 0; k < p; ++k) {
    const SectorBound& s = sectors[static_cast<std::size_t>(k)];
    s.validate();
    lo(k) = s.lo;
    hi(k) = s.hi;
    all_point = all_point && s.is_point();
  }
  if (all_point) return {lo};

  std::vector<Eigen::VectorXd> out;
  if (p <= 12) {
    const std::uint32_t count = 1u << p;
    out.reserve(count + 1 + static_cast<std::size_t>(random_count));
    for (std::uint32_t mask = 0; mask < count; ++mask) {
      Eigen::VectorXd v(p);
      for (Eigen::Index k = 0; k < p; ++k) v(k) = (mask >> k) & 1u ? hi(k) : lo(k);
      out.push_back(std::move(v));
    }
  } else {
    out.push_back(lo);
    out.push_back(hi);
  }
  out.push_back(0.5 * (lo + hi));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int r = 0; r < random_count; ++r) {
    Eigen::VectorXd v(p);
    for (Eigen::Index k = 0; k < p; ++k) v(k) = lo(k) + u(rng) * (hi(k) - lo(k));
    out.push_back(std::move(v));
  }
  return out;
}

double lemma1_residual(const Lemma1InnerProducts& ip) { return ip.lhs() - ip.rhs(); }

}  // namespace synccert
