#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "synccert/certificates.hpp"
#include "synccert/error.hpp"
#include "synccert/symmetric_eigen.hpp"

namespace synccert {
namespace {

// Reference values computed independently (numpy) for the five-node complete
// graph with gain-5 linear couplings and the default Goodwin parameters.
constexpr double kCaseGamma = -16.125001790814714;
constexpr double kCaseMuLo = 3.874998209185284;
constexpr double kCaseRho = 22.36023636507425;
constexpr double kCaseEps = 1.2085718167827528;

NetworkCertificate case_study_cert(const Graph& g) {
  const double x0[5] = {1.1, -0.2, 1.0, 0.5, 0.3};
  std::vector<EdgeCertificate> edges;
  for (const Edge& e : g.edges()) {
    const double d = x0[e.lo - 1] - x0[e.hi - 1];
    edges.push_back(make_edge_certificate(-0.01, kCaseGamma, -0.5 * d * d));
  }
  return make_network_certificate(g, std::move(edges));
}

std::vector<SectorBound> uniform_sectors(int p, double lo, double hi) {
  return std::vector<SectorBound>(static_cast<std::size_t>(p), SectorBound{lo, hi});
}

TEST(EdgeCertificate, ClampsPositiveGamma) {
  const auto c = make_edge_certificate(-0.1, 0.7, -1.0);
  EXPECT_EQ(c.gamma, 0.0);
  EXPECT_EQ(c.gamma_raw, 0.7);
  EXPECT_THROW(make_edge_certificate(0.1, -1.0, 0.0), InadmissibleParams);
}

TEST(NetworkCertificate, NuTildeAndBetaBar) {
  const Graph g = complete_graph(5);
  const auto cert = case_study_cert(g);
  for (double v : cert.nu_tilde) EXPECT_NEAR(v, -0.04, 1e-15);
  EXPECT_NEAR(cert.beta_bar, -2.83, 1e-12);
}

TEST(Margin, CaseStudy) {
  const Graph g = complete_graph(5);
  const auto cert = case_study_cert(g);
  const auto r = theorem1_margin(edge_stats(g), uniform_sectors(10, 5, 5), cert.edges);
  for (double s : r.slack) EXPECT_NEAR(s, 0.035, 1e-6);
  EXPECT_TRUE(r.verdict);
}

TEST(Margin, CaseStudyWithLargerDissipation) {
  const Graph g = complete_graph(5);
  std::vector<EdgeCertificate> edges(10, make_edge_certificate(-0.01, -25.0, 0.0));
  const auto r = theorem1_margin(edge_stats(g), uniform_sectors(10, 5, 5), edges);
  for (double s : r.slack) EXPECT_NEAR(s, -0.32, 1e-12);
  EXPECT_FALSE(r.verdict);
}

TEST(Margin, SingleEdgeUnitSector) {
  const Graph g = build_graph(2, {{1, 2}});
  const std::vector<EdgeCertificate> edges{make_edge_certificate(0.0, 0.0, 0.0)};
  const auto r = theorem1_margin(edge_stats(g), uniform_sectors(1, 1, 1), edges);
  EXPECT_DOUBLE_EQ(r.slack[0], 2.0);
  EXPECT_TRUE(r.verdict);
}

TEST(Margin, RejectsBadInputs) {
  const Graph g = path_graph(3);
  const auto stats = edge_stats(g);
  std::vector<EdgeCertificate> edges(2, make_edge_certificate(-0.1, -1.0, 0.0));
  EXPECT_THROW(theorem1_margin(stats, uniform_sectors(1, 1, 1), edges), DimensionMismatch);
  EXPECT_THROW(theorem1_margin(stats, uniform_sectors(2, 0, 1), edges), InadmissibleParams);
  EXPECT_THROW(theorem1_margin(stats, uniform_sectors(2, 2, 1), edges), InadmissibleParams);
  edges[1].nu = 0.5;
  EXPECT_THROW(theorem1_margin(stats, uniform_sectors(2, 1, 1), edges), InadmissibleParams);
}

TEST(Margin, MonotoneInNuAndGamma) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = random_connected_graph(6, 0.5, rng);
    const auto stats = edge_stats(g);
    const int p = g.edge_count();
    std::vector<SectorBound> sectors;
    std::vector<EdgeCertificate> base;
    for (int k = 0; k < p; ++k) {
      const double lo = 0.5 + 3 * u(rng);
      sectors.push_back({lo, lo + 2 * u(rng)});
      base.push_back(make_edge_certificate(-u(rng), -5 * u(rng), 0.0));
    }
    const auto m0 = theorem1_margin(stats, sectors, base);
    std::uniform_int_distribution<int> pick(0, p - 1);
    const auto k = static_cast<std::size_t>(pick(rng));

    auto more_nu = base;
    more_nu[k].nu -= 0.3;
    const auto m1 = theorem1_margin(stats, sectors, more_nu);
    auto more_gamma = base;
    more_gamma[k].gamma -= 0.3;
    const auto m2 = theorem1_margin(stats, sectors, more_gamma);
    for (int l = 0; l < p; ++l) {
      const auto ul = static_cast<std::size_t>(l);
      EXPECT_LE(m1.slack[ul], m0.slack[ul] + 1e-15);
      EXPECT_LE(m2.slack[ul], m0.slack[ul] + 1e-15);
    }
    EXPECT_LT(m2.slack[k], m0.slack[k]);
  }
}

TEST(Margin, PositiveGammaBehavesAsZero) {
  const Graph g = complete_graph(4);
  const auto stats = edge_stats(g);
  const auto sectors = uniform_sectors(6, 1, 2);
  std::vector<EdgeCertificate> zero(6, make_edge_certificate(-0.05, 0.0, 0.0));
  std::vector<EdgeCertificate> positive = zero;
  for (auto& c : positive) c.gamma = c.gamma_raw = 3.0;  // bypass the constructor clamp on purpose
  const auto a = theorem1_margin(stats, sectors, zero);
  const auto b = theorem1_margin(stats, sectors, positive);
  EXPECT_EQ(a.slack, b.slack);
}

TEST(Margin, EqualsGershgorinSlackOfQ) {
  // The per-edge margin is exactly the row-dominance slack of Q; Q = D^T Xi D + diag(sigma).
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = random_connected_graph(7, 0.5, rng);
    const int p = g.edge_count();
    std::vector<SectorBound> sectors;
    std::vector<EdgeCertificate> edges;
    for (int k = 0; k < p; ++k) {
      const double lo = 0.5 + 3 * u(rng);
      sectors.push_back({lo, lo + u(rng)});
      edges.push_back(make_edge_certificate(-0.2 * u(rng), -4 * u(rng), 0.0));
    }
    const auto cert = make_network_certificate(g, edges);
    const auto margin = theorem1_margin(edge_stats(g), sectors, cert.edges);
    const Eigen::MatrixXd q = assemble_psi_q(g, cert, sectors).q;
    const Eigen::MatrixXd d = incidence(g).cast<double>();
    const Eigen::VectorXd xi = Eigen::Map<const Eigen::VectorXd>(cert.nu_tilde.data(), g.node_count());
    const Eigen::MatrixXd dxd = d.transpose() * xi.asDiagonal() * d;
    std::vector<double> sigma(static_cast<std::size_t>(p));
    for (int k = 0; k < p; ++k) sigma[static_cast<std::size_t>(k)] = q(k, k) - dxd(k, k);
    const auto g_check = prop1_check(g, cert.nu_tilde, sigma);
    for (int k = 0; k < p; ++k) {
      EXPECT_NEAR(margin.slack[static_cast<std::size_t>(k)], g_check.slack[static_cast<std::size_t>(k)], 1e-12);
      double off = 0.0;
      for (int l = 0; l < p; ++l)
        if (l != k) off += std::abs(q(k, l));
      EXPECT_NEAR(margin.slack[static_cast<std::size_t>(k)], q(k, k) - off, 1e-12);
    }
    // Sufficiency: a positive margin on every edge forces Q > 0.
    if (margin.verdict) EXPECT_GT(min_eigenvalue(q), 0.0);
  }
}

TEST(CertificateMatrices, CaseStudy) {
  const Graph g = complete_graph(5);
  const auto m = lemma1_matrices(g, case_study_cert(g));
  EXPECT_TRUE(m.xi.isApprox(-0.04 * Eigen::MatrixXd::Identity(5, 5)));
  EXPECT_TRUE(m.gamma.isApprox(kCaseGamma * Eigen::MatrixXd::Identity(10, 10)));
  EXPECT_TRUE(m.phi.isApprox(3.0 * Eigen::MatrixXd::Identity(10, 10)));
  EXPECT_TRUE(m.phi_bar.isZero());
}

TEST(CertificateMatrices, ZeroNuGivesZeroXi) {
  const Graph g = path_graph(4);
  const auto cert = make_network_certificate(g, std::vector<EdgeCertificate>(3, make_edge_certificate(0.0, -1.0, 0.0)));
  const auto m = lemma1_matrices(g, cert);
  EXPECT_TRUE(m.xi.isZero());
  EXPECT_TRUE(m.dt_xi_d.isZero());
}

TEST(PsiQ, CaseStudySpectrum) {
  const Graph g = complete_graph(5);
  const auto pq = assemble_psi_q(g, case_study_cert(g), uniform_sectors(10, 5, 5));
  EXPECT_NEAR(pq.q_min_eigenvalue, 0.15499993, 1e-7);
  EXPECT_NEAR(max_eigenvalue(pq.q), 0.35499993, 1e-7);
}

TEST(PsiQ, PathOfThreeIsNotPositive) {
  const Graph g = path_graph(3);
  const auto cert =
      make_network_certificate(g, std::vector<EdgeCertificate>(2, make_edge_certificate(-0.01, kCaseGamma, 0.0)));
  const auto sectors = uniform_sectors(2, 5, 5);
  const auto pq = assemble_psi_q(g, cert, sectors);
  const Eigen::VectorXd ev = jacobi_eigenvalues(pq.q);
  EXPECT_NEAR(ev(0), -0.81500007, 1e-7);
  EXPECT_NEAR(ev(1), -0.77500007, 1e-7);
  const auto r = theorem1_margin(edge_stats(g), sectors, cert.edges);
  EXPECT_NEAR(r.slack[0], -0.8150000716325886, 1e-12);
  EXPECT_NEAR(r.slack[1], -0.8150000716325886, 1e-12);
  EXPECT_FALSE(r.verdict);
}

TEST(GainBound, CaseStudy) {
  const Graph g = complete_graph(5);
  const auto sectors = uniform_sectors(10, 5, 5);
  const auto gb = gain_bound(g, case_study_cert(g), sectors, sector_box_samples(sectors));
  ASSERT_TRUE(gb.certified);
  EXPECT_FALSE(gb.sampled_estimate);
  EXPECT_EQ(gb.sample_count, 1);
  EXPECT_NEAR(gb.mu_lo, kCaseMuLo, 1e-9);
  EXPECT_NEAR(gb.mu_hi, 25.0, 1e-9);
  EXPECT_NEAR(gb.rho, kCaseRho, 1e-8);
  EXPECT_NEAR(gb.eps, kCaseEps, 1e-9);
}

TEST(GainBound, SingleEdgeHandComputed) {
  // Psi = 2, N = Psi + gamma = 1, phi_max = 2, alpha = 1.
  const Graph g = build_graph(2, {{1, 2}});
  const auto cert = make_network_certificate(g, {make_edge_certificate(0.0, -1.0, 0.0)});
  const auto sectors = uniform_sectors(1, 1, 1);
  const auto gb = gain_bound(g, cert, sectors, sector_box_samples(sectors));
  ASSERT_TRUE(gb.certified);
  EXPECT_DOUBLE_EQ(gb.mu_lo, 1.0);
  EXPECT_DOUBLE_EQ(gb.mu_hi, 2.0);
  EXPECT_DOUBLE_EQ(gb.rho, std::sqrt(0.5 + 4.0 * 4.0 + 8.0 * 4.0));
  EXPECT_EQ(gb.eps, 0.0);
}

TEST(GainBound, UncertifiedReportsInfinity) {
  const Graph g = path_graph(3);
  const auto cert =
      make_network_certificate(g, std::vector<EdgeCertificate>(2, make_edge_certificate(-0.01, kCaseGamma, -1.0)));
  const auto sectors = uniform_sectors(2, 5, 5);
  const auto gb = gain_bound(g, cert, sectors, sector_box_samples(sectors));
  EXPECT_FALSE(gb.certified);
  EXPECT_TRUE(std::isinf(gb.rho));
  EXPECT_TRUE(std::isinf(gb.eps));
}

TEST(GainBound, RejectsEmptyOrOutOfBoxSamples) {
  const Graph g = build_graph(2, {{1, 2}});
  const auto cert = make_network_certificate(g, {make_edge_certificate(0.0, -1.0, 0.0)});
  const auto sectors = uniform_sectors(1, 1, 2);
  EXPECT_THROW(gain_bound(g, cert, sectors, {}), InadmissibleParams);
  const std::vector<Eigen::VectorXd> outside{Eigen::VectorXd::Constant(1, 2.5)};
  EXPECT_THROW(gain_bound(g, cert, sectors, outside), InadmissibleParams);
}

TEST(GainBound, QPositiveImpliesNPositiveAtLowerCorner) {
  // At eta = lo: H Psi H + Gamma - Phi_bar = Lambda_lo Q Lambda_lo.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = random_connected_graph(5, 0.7, rng);
    const int p = g.edge_count();
    std::vector<SectorBound> sectors;
    std::vector<EdgeCertificate> edges;
    for (int k = 0; k < p; ++k) {
      const double lo = 1 + 4 * u(rng);
      sectors.push_back({lo, lo + u(rng)});
      edges.push_back(make_edge_certificate(-0.01 * u(rng), -lo * lo * u(rng), 0.0));
    }
    const auto cert = make_network_certificate(g, edges);
    const auto pq = assemble_psi_q(g, cert, sectors);
    Eigen::VectorXd lo(p);
    for (int k = 0; k < p; ++k) lo(k) = sectors[static_cast<std::size_t>(k)].lo;
    const auto m = lemma1_matrices(g, cert);
    const Eigen::MatrixXd n = lo.asDiagonal() * pq.psi * lo.asDiagonal() + m.gamma - m.phi_bar;
    EXPECT_TRUE(n.isApprox(lo.asDiagonal() * pq.q * lo.asDiagonal(), 1e-12));
    if (pq.q_min_eigenvalue > 0) EXPECT_GT(min_eigenvalue(n), 0.0);
  }
}

TEST(SectorBoxSamples, CoversVerticesAndMidpoint) {
  const std::vector<SectorBound> sectors{{1, 2}, {3, 3}, {0.5, 4}};
  const auto s = sector_box_samples(sectors, 5, 42);
  ASSERT_EQ(s.size(), 8u + 1u + 5u);
  for (const auto& v : s)
    for (int k = 0; k < 3; ++k) {
      EXPECT_GE(v(k), sectors[static_cast<std::size_t>(k)].lo);
      EXPECT_LE(v(k), sectors[static_cast<std::size_t>(k)].hi);
    }
  EXPECT_TRUE(s[8].isApprox(Eigen::Vector3d(1.5, 3, 2.25)));
  const auto again = sector_box_samples(sectors, 5, 42);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s[i], again[i]);
}

TEST(NetworkResidual, ZeroTrajectory) {
  Lemma1InnerProducts ip;
  ip.beta_bar = -2.0;
  EXPECT_DOUBLE_EQ(ip.lhs(), 0.0);
  EXPECT_DOUBLE_EQ(ip.rhs(), -2.0);
  EXPECT_DOUBLE_EQ(lemma1_residual(ip), 2.0);
}

}  // namespace
}  // namespace synccert
