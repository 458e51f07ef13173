#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "synccert/commands.hpp"
#include "synccert/config.hpp"
#include "synccert/error.hpp"

namespace synccert {
namespace {

const char* kMinimal = R"({
  "graph": {"n": 3, "edges": [[1, 2], [2, 3]]},
  "agents": {"b1": [1, 1, 1]},
  "coupling": {"kind": "linear", "gain": 2}
})";

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string config_error_pointer(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.pointer();
  }
  return "<no error>";
}

TEST(ParseConfig, BundledCaseStudy) {
  const auto cfg = parse_config(SYNCCERT_DATA_DIR "/case_study.json");
  EXPECT_EQ(cfg.model.graph.node_count(), 5);
  EXPECT_EQ(cfg.model.graph.edge_count(), 10);
  EXPECT_EQ(cfg.model.agents[4].b1, 1.2);
  EXPECT_EQ(cfg.model.agents[0].hill, 14);
  EXPECT_EQ(cfg.model.x0[1][0], -0.2);
  EXPECT_EQ(cfg.model.x0[1][2], 0.0);
  EXPECT_EQ(cfg.model.couplings[3].sector().lo, 5.0);
  EXPECT_EQ(cfg.model.disturbances[0].kind, DisturbanceKind::Gaussian);
  EXPECT_EQ(cfg.model.disturbances[0].scale, 0.3);
  EXPECT_EQ(cfg.model.disturbances[2].seed, edge_seed(1, 2));
  EXPECT_EQ(cfg.cert.theta, 2.0);
  EXPECT_EQ(cfg.cert.theta3, 1.5);
  EXPECT_EQ(cfg.mode, CertMode::UniformWorstCase);
  EXPECT_EQ(cfg.sim.dt, 1e-3);
  EXPECT_EQ(cfg.sim.horizon, 100.0);
  EXPECT_EQ(read_file(SYNCCERT_DATA_DIR "/case_study.json"), bundled_case_study_json());
}

TEST(ParseConfig, Defaults) {
  const auto cfg = parse_config_text(kMinimal);
  EXPECT_EQ(cfg.model.agents[0].a1, 0.5);
  EXPECT_EQ(cfg.model.agents[0].hill, 14);
  EXPECT_EQ(cfg.model.x0[2], (AgentState{0, 0, 0}));
  EXPECT_EQ(cfg.model.disturbances[1].kind, DisturbanceKind::Zero);
  EXPECT_EQ(cfg.cert.theta, 2.0);
  EXPECT_EQ(cfg.delta_mode, DeltaMode::ClosedForm);
  EXPECT_EQ(cfg.sim.stride, 100);
}

TEST(ParseConfig, PerEdgeOverridesAndOptions) {
  const auto cfg = parse_config_text(R"({
    "graph": {"n": 3, "edges": [[1, 2], [2, 3]]},
    "agents": {"b1": [1, 1.1, 1], "x0": [1, [0.5, 0.2], [0, 0, 0.3]]},
    "coupling": {"kind": "affine-sine", "c": 3, "d": 1},
    "couplings": [{"edge": [3, 2], "kind": "piecewise-linear", "points": [[1, 2], [2, 5]], "sector": [2, 3]}],
    "disturbance": {"kind": "constant", "scale": 0.1},
    "disturbances": [{"edge": [1, 2], "kind": "gaussian", "scale": 0.2}],
    "certification": {"theta": 1, "theta3": 1.6, "mode": "per-edge", "delta": "oracle"},
    "simulation": {"dt": 0.01, "T": 2, "stride": 5}
  })");
  EXPECT_EQ(cfg.model.x0[1], (AgentState{0.5, 0.2, 0}));
  EXPECT_EQ(cfg.model.couplings[0].kind(), "affine-sine");
  EXPECT_EQ(cfg.model.couplings[1].kind(), "piecewise-linear");
  EXPECT_EQ(cfg.model.couplings[1].sector().hi, 3.0);
  EXPECT_EQ(cfg.model.disturbances[0].kind, DisturbanceKind::Gaussian);
  EXPECT_EQ(cfg.model.disturbances[1].kind, DisturbanceKind::Constant);
  EXPECT_EQ(cfg.mode, CertMode::PerEdge);
  EXPECT_EQ(cfg.delta_mode, DeltaMode::Oracle);
  EXPECT_EQ(cfg.sim.stride, 5);
}

TEST(ParseConfig, OutOfRangeNodePointsAtEdge) {
  const std::string text = read_file(SYNCCERT_FIXTURE_DIR "/bad_node.json");
  EXPECT_EQ(config_error_pointer(text), "/graph/edges/3");
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/graph/edges/3"), std::string::npos);
  }
}

TEST(ParseConfig, SchemaErrorPointers) {
  EXPECT_EQ(config_error_pointer(R"({"agents": {"b1": [1]}, "coupling": {"kind": "linear"}})"), "/graph");
  EXPECT_EQ(config_error_pointer(R"({"graph": {"n": 2, "edges": [[1, 2]]}, "agents": {"b1": [1, 1]}})"),
            "/coupling");
  EXPECT_EQ(config_error_pointer(
                R"({"graph": {"n": 2, "edges": [[1, 2]]}, "agents": {"b1": [1, 1]}, "coupling": {"kind": "cubic"}})"),
            "/coupling/kind");
  EXPECT_EQ(config_error_pointer(
                R"({"graph": {"n": 2, "edges": [[1, 1]]}, "agents": {"b1": [1, 1]}, "coupling": {"kind": "linear"}})"),
            "/graph/edges/0");
  EXPECT_EQ(config_error_pointer(R"({"graph": {"n": 2, "edges": [[1, 2]]}, "agents": {"b1": [1, -1]},
                                    "coupling": {"kind": "linear"}})"),
            "/agents/b1/1");
  EXPECT_EQ(config_error_pointer(R"({"graph": {"n": 2, "edges": [[1, 2]]}, "agents": {"b1": [1, 1]},
                                    "coupling": {"kind": "linear", "gain": 1}, "certification": {"mode": "best"}})"),
            "/certification/mode");
}

TEST(ParseConfig, DimensionMismatchNamesBothSides) {
  try {
    parse_config_text(R"({"graph": {"n": 3, "edges": [[1, 2]]}, "agents": {"b1": [1, 1]},
                          "coupling": {"kind": "linear"}})");
    FAIL();
  } catch (const DimensionMismatch& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("/agents/b1"), std::string::npos);
    EXPECT_NE(msg.find("/graph/n"), std::string::npos);
  }
}

TEST(ParseConfig, MalformedJson) {
  EXPECT_THROW(parse_config_text("{\"graph\": "), ConfigError);
  EXPECT_THROW(parse_config("/nonexistent/config.json"), ConfigError);
}

TEST(ParseConfig, SeedAndNoiseModifiers) {
  auto cfg = parse_config_text(bundled_case_study_json());
  apply_seed(cfg, 9);
  EXPECT_EQ(cfg.model.disturbances[4].seed, edge_seed(9, 4));
  set_noise_scale(cfg, 0.0);
  EXPECT_EQ(cfg.model.disturbances[0].kind, DisturbanceKind::Zero);
  set_noise_scale(cfg, 0.5);
  EXPECT_EQ(cfg.model.disturbances[0].kind, DisturbanceKind::Gaussian);
  EXPECT_EQ(cfg.model.disturbances[0].scale, 0.5);
  clear_disturbances(cfg);
  EXPECT_EQ(cfg.model.disturbances[0].kind, DisturbanceKind::Zero);
  EXPECT_THROW(set_noise_scale(cfg, -1.0), InadmissibleParams);
}

TEST(GraphJson, RoundTrip) {
  const Graph g = build_graph(5, {{1, 2}, {2, 5}, {3, 4}});
  const Graph back = parse_graph_json(graph_to_json(g));
  EXPECT_EQ(back.node_count(), 5);
  EXPECT_EQ(back.edges(), g.edges());
  EXPECT_THROW(parse_graph_json(R"({"n": 2, "edges": [[1, 3]]})"), ConfigError);
}

TEST(CertificateJson, RoundTripOnRandomDocuments) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = random_connected_graph(6, 0.5, rng);
    std::vector<EdgeCertificate> certs;
    std::vector<SectorBound> sectors;
    for (int k = 0; k < g.edge_count(); ++k) {
      certs.push_back(make_edge_certificate(-u(rng), -10 * u(rng), -u(rng)));
      const double lo = 0.1 + u(rng);
      sectors.push_back({lo, lo + u(rng)});
    }
    const auto doc = parse_certificate_json(g, certificate_to_json(g, certs, sectors));
    ASSERT_EQ(doc.certs.size(), certs.size());
    for (std::size_t k = 0; k < certs.size(); ++k) {
      EXPECT_EQ(doc.certs[k].nu, certs[k].nu);
      EXPECT_EQ(doc.certs[k].gamma, certs[k].gamma);
      EXPECT_EQ(doc.certs[k].beta, certs[k].beta);
      EXPECT_EQ(doc.sectors[k].lo, sectors[k].lo);
      EXPECT_EQ(doc.sectors[k].hi, sectors[k].hi);
    }
  }
}

TEST(CertificateJson, RejectsIncompleteDocument) {
  const Graph g = path_graph(3);
  EXPECT_THROW(parse_certificate_json(g, R"({"edges": [{"edge": [1, 2], "nu": -0.1, "gamma": -1, "beta": 0,
                                              "alpha_lo": 1, "alpha_hi": 2}]})"),
               ConfigError);
}

TEST(MarginCsv, Format) {
  const Graph g = path_graph(3);
  MarginReport r;
  r.slack = {0.5, -0.25};
  r.positive = {true, false};
  std::ostringstream os;
  write_margin_csv(os, g, r);
  EXPECT_EQ(os.str(), "edge,slack,verdict\n1-2,0.5,true\n2-3,-0.25,false\n");
}

}  // namespace
}  // namespace synccert
