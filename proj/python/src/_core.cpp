#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "synccert/commands.hpp"
#include "synccert/config.hpp"
#include "synccert/error.hpp"
#include "synccert/symmetric_eigen.hpp"

namespace py = pybind11;
using namespace synccert;

namespace {

std::vector<SectorBound> to_sectors(const std::vector<std::pair<double, double>>& s) {
  std::vector<SectorBound> out;
  for (auto [lo, hi] : s) out.push_back({lo, hi});
  return out;
}

std::vector<EdgeCertificate> to_certs(const std::vector<std::tuple<double, double, double>>& c) {
  std::vector<EdgeCertificate> out;
  for (auto [nu, gamma, beta] : c) out.push_back(make_edge_certificate(nu, gamma, beta));
  return out;
}

py::dict summary_dict(const NetworkConfig& cfg, const CertificationSummary& s) {
  py::list edges;
  for (int k = 0; k < cfg.model.graph.edge_count(); ++k) {
    const auto& c = s.cert.edges[static_cast<std::size_t>(k)];
    py::dict e;
    e["edge"] = py::make_tuple(cfg.model.graph.edge(k).lo, cfg.model.graph.edge(k).hi);
    e["nu"] = c.nu;
    e["gamma"] = c.gamma;
    e["beta"] = c.beta;
    e["slack"] = s.margin.slack[static_cast<std::size_t>(k)];
    edges.append(e);
  }
  py::dict d;
  d["edges"] = edges;
  d["nu_tilde"] = s.cert.nu_tilde;
  d["beta_bar"] = s.cert.beta_bar;
  d["min_slack"] = s.margin.min_slack;
  d["verdict"] = s.margin.verdict;
  d["q_min_eigenvalue"] = s.psi_q.q_min_eigenvalue;
  d["gain_certified"] = s.gain.certified;
  d["rho"] = s.gain.rho;
  d["eps"] = s.gain.eps;
  d["delta"] = s.derived.delta;
  d["theta1"] = s.derived.theta1;
  d["theta2"] = s.derived.theta2;
  return d;
}

NetworkConfig load(const std::optional<std::filesystem::path>& path) {
  return path ? parse_config(*path) : parse_config_text(bundled_case_study_json());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dissipativity-based synchronisation certificates for diffusively coupled networks.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidGraph>(m, "InvalidGraph", base.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
  py::register_exception<InadmissibleParams>(m, "InadmissibleParams", base.ptr());
  py::register_exception<Uncertified>(m, "Uncertified", base.ptr());
  py::register_exception<BlowUp>(m, "BlowUp", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<Graph>(m, "Graph")
      .def(py::init([](int n, const std::vector<std::pair<int, int>>& edges) { return build_graph(n, edges); }),
           py::arg("n"), py::arg("edges"))
      .def_property_readonly("node_count", &Graph::node_count)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def_property_readonly("edges",
                             [](const Graph& g) {
                               std::vector<std::pair<int, int>> out;
                               for (const auto& e : g.edges()) out.emplace_back(e.lo, e.hi);
                               return out;
                             })
      .def("connected", &Graph::connected)
      .def("__repr__", [](const Graph& g) {
        return "Graph(n=" + std::to_string(g.node_count()) + ", edges=" + std::to_string(g.edge_count()) + ")";
      });

  m.def("complete_graph", &complete_graph, py::arg("n"));
  m.def("path_graph", &path_graph, py::arg("n"));
  m.def("incidence", [](const Graph& g) { return Eigen::MatrixXd(incidence(g).cast<double>()); });
  m.def("laplacian", [](const Graph& g) { return Eigen::MatrixXd(laplacian(g).cast<double>()); });
  m.def("edge_stats", [](const Graph& g) {
    const EdgeStats s = edge_stats(g);
    py::dict d;
    d["degree"] = s.degree;
    d["common"] = s.common;
    d["exclusive"] = s.exclusive;
    return d;
  });
  m.def(
      "prop1_check",
      [](const Graph& g, const std::vector<double>& mu, const std::vector<double>& sigma) {
        const auto r = prop1_check(g, mu, sigma);
        return py::make_tuple(r.slack, to_string(r.verdict));
      },
      py::arg("graph"), py::arg("mu"), py::arg("sigma"),
      "Per-edge slack of the row-dominance test and the verdict ('pass', 'fail' or 'not-applicable').");
  m.def(
      "pd_oracle",
      [](const Graph& g, const std::vector<double>& mu, const std::vector<double>& sigma) {
        return pd_oracle(g, mu, sigma);
      },
      py::arg("graph"), py::arg("mu"), py::arg("sigma"));
  m.def("jacobi_eigenvalues", [](const Eigen::MatrixXd& a) { return jacobi_eigenvalues(a); });

  m.def("delta", &delta, py::arg("hill"));
  m.def("delta_oracle", &delta_oracle, py::arg("hill"));
  m.def(
      "certificate_gamma",
      [](double theta, double theta3, double a1, double a2, double a3, double b2, double b3, int hill) {
        GoodwinParams g;
        g.a1 = a1;
        g.a2 = a2;
        g.a3 = a3;
        g.b2 = b2;
        g.b3 = b3;
        g.hill = hill;
        return certificate_gamma(g, {theta, theta3});
      },
      py::arg("theta") = 2.0, py::arg("theta3") = 1.5, py::arg("a1") = 0.5, py::arg("a2") = 1.0,
      py::arg("a3") = 1.0, py::arg("b2") = 1.5, py::arg("b3") = 1.5, py::arg("hill") = 14);

  m.def(
      "theorem1_margin",
      [](const Graph& g, const std::vector<std::pair<double, double>>& sectors,
         const std::vector<std::tuple<double, double, double>>& certs) {
        const auto r = theorem1_margin(edge_stats(g), to_sectors(sectors), to_certs(certs));
        return py::make_tuple(r.slack, r.verdict);
      },
      py::arg("graph"), py::arg("sectors"), py::arg("certs"),
      "Per-edge margins for sectors [(lo, hi)] and certificates [(nu, gamma, beta)].");
  m.def(
      "gain_bound",
      [](const Graph& g, const std::vector<std::pair<double, double>>& sectors,
         const std::vector<std::tuple<double, double, double>>& certs, int random_samples, std::uint64_t seed) {
        const auto s = to_sectors(sectors);
        const auto gb = gain_bound(g, make_network_certificate(g, to_certs(certs)), s,
                                   sector_box_samples(s, random_samples, seed));
        py::dict d;
        d["certified"] = gb.certified;
        d["rho"] = gb.rho;
        d["eps"] = gb.eps;
        d["mu_lo"] = gb.mu_lo;
        d["mu_hi"] = gb.mu_hi;
        d["q"] = gb.q;
        return d;
      },
      py::arg("graph"), py::arg("sectors"), py::arg("certs"), py::arg("random_samples") = 64,
      py::arg("seed") = 0);

  m.def("case_study_json", &bundled_case_study_json);
  m.def(
      "certify",
      [](const std::optional<std::filesystem::path>& path) {
        const NetworkConfig cfg = load(path);
        return summary_dict(cfg, certify(cfg));
      },
      py::arg("config") = py::none(), "Certify a JSON configuration (the bundled case study by default).");
  m.def(
      "simulate",
      [](const std::optional<std::filesystem::path>& path, std::optional<double> horizon, std::optional<double> dt,
         std::optional<std::uint64_t> seed, bool noise) {
        NetworkConfig cfg = load(path);
        if (horizon) cfg.sim.horizon = *horizon;
        if (dt) cfg.sim.dt = *dt;
        if (seed) apply_seed(cfg, *seed);
        if (!noise) clear_disturbances(cfg);
        SimulationTrace trace;
        {
          py::gil_scoped_release release;
          trace = run(cfg.model, cfg.sim);
        }
        const auto rows = static_cast<Eigen::Index>(trace.rows.size());
        Eigen::VectorXd t(rows), norm_dty(rows), norm_w(rows);
        Eigen::MatrixXd y(rows, cfg.model.graph.node_count());
        for (Eigen::Index r = 0; r < rows; ++r) {
          const auto& row = trace.rows[static_cast<std::size_t>(r)];
          t(r) = row.t;
          y.row(r) = row.y.transpose();
          norm_dty(r) = row.acc.norm_dty();
          norm_w(r) = row.acc.norm_w();
        }
        py::dict d;
        d["t"] = t;
        d["y"] = y;
        d["norm_dty"] = norm_dty;
        d["norm_w"] = norm_w;
        return d;
      },
      py::arg("config") = py::none(), py::arg("horizon") = py::none(), py::arg("dt") = py::none(),
      py::arg("seed") = py::none(), py::arg("noise") = true);
}
