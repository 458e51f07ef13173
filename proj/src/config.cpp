#include "synccert/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "synccert/csv.hpp"
#include "synccert/error.hpp"

namespace synccert {

namespace {

using nlohmann::json;

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const json& require(const json& obj, const std::string& ptr, const std::string& key) {
  if (!obj.is_object()) throw ConfigError(ptr, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(child(ptr, key), "required field is missing");
  return *it;
}

double as_number(const json& j, const std::string& ptr) {
  if (!j.is_number()) throw ConfigError(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(ptr, "expected a finite number");
  return v;
}

double number_or(const json& obj, const std::string& ptr, const std::string& key, double fallback) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : as_number(*it, child(ptr, key));
}

double positive(const json& obj, const std::string& ptr, const std::string& key, double fallback) {
  const double v = number_or(obj, ptr, key, fallback);
  if (!(v > 0.0)) throw ConfigError(child(ptr, key), "must be > 0");
  return v;
}

int as_int(const json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw ConfigError(ptr, "expected an integer");
  return j.get<int>();
}

std::uint64_t as_seed(const json& j, const std::string& ptr) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw ConfigError(ptr, "expected a nonnegative integer seed");
}

std::string as_string(const json& j, const std::string& ptr) {
  if (!j.is_string()) throw ConfigError(ptr, "expected a string");
  return j.get<std::string>();
}

const json& as_array(const json& j, const std::string& ptr) {
  if (!j.is_array()) throw ConfigError(ptr, "expected an array");
  return j;
}

std::pair<int, int> as_pair(const json& j, const std::string& ptr) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(ptr, "expected a node pair [i, j]");
  return {as_int(j[0], child(ptr, 0)), as_int(j[1], child(ptr, 1))};
}

Graph parse_graph_node(const json& j, const std::string& ptr) {
  const int n = as_int(require(j, ptr, "n"), child(ptr, "n"));
  if (n < 1) throw ConfigError(child(ptr, "n"), "node count must be >= 1");
  const std::string eptr = child(ptr, "edges");
  const json& edges = as_array(require(j, ptr, "edges"), eptr);
  std::vector<std::pair<int, int>> list;
  std::set<std::pair<int, int>> seen;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto [a, b] = as_pair(edges[k], child(eptr, k));
    const std::string label = "[" + std::to_string(a) + "," + std::to_string(b) + "]";
    if (a < 1 || a > n || b < 1 || b > n)
      throw ConfigError(child(eptr, k), "edge " + label + " references a node outside 1.." + std::to_string(n));
    if (a == b) throw ConfigError(child(eptr, k), "edge " + label + " is a self-loop");
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
      throw ConfigError(child(eptr, k), "edge " + label + " is a duplicate");
    list.emplace_back(a, b);
  }
  return build_graph(n, list);
}

int edge_of(const Graph& g, const json& j, const std::string& ptr) {
  const auto [a, b] = as_pair(j, ptr);
  const auto k = g.edge_index(a, b);
  if (!k) throw ConfigError(ptr, "edge [" + std::to_string(a) + "," + std::to_string(b) + "] is not in the graph");
  return *k;
}

Coupling parse_coupling(const json& j, const std::string& ptr) {
  const std::string kind = as_string(require(j, ptr, "kind"), child(ptr, "kind"));
  CouplingFunction fn;
  if (kind == "linear") {
    fn = LinearCoupling{as_number(require(j, ptr, "gain"), child(ptr, "gain"))};
  } else if (kind == "affine-sine") {
    fn = AffineSineCoupling{as_number(require(j, ptr, "c"), child(ptr, "c")), number_or(j, ptr, "d", 0.0)};
  } else if (kind == "piecewise-linear") {
    const std::string pptr = child(ptr, "points");
    const json& pts = as_array(require(j, ptr, "points"), pptr);
    PiecewiseLinearCoupling pwl;
    for (std::size_t m = 0; m < pts.size(); ++m) {
      if (!pts[m].is_array() || pts[m].size() != 2) throw ConfigError(child(pptr, m), "expected [x, y]");
      pwl.points.emplace_back(as_number(pts[m][0], child(child(pptr, m), 0)),
                              as_number(pts[m][1], child(child(pptr, m), 1)));
    }
    try {
      validate(pwl);
    } catch (const InadmissibleParams& e) {
      throw ConfigError(pptr, e.what());
    }
    fn = std::move(pwl);
  } else {
    throw ConfigError(child(ptr, "kind"), "unknown coupling kind '" + kind + "'");
  }

  SectorBound sector;
  try {
    sector = natural_sector(fn);
  } catch (const InadmissibleParams& e) {
    throw ConfigError(ptr, e.what());
  }
  if (j.contains("sector")) {
    const std::string sptr = child(ptr, "sector");
    const json& s = as_array(j["sector"], sptr);
    if (s.size() != 2) throw ConfigError(sptr, "expected [alpha_lo, alpha_hi]");
    sector = {as_number(s[0], child(sptr, 0)), as_number(s[1], child(sptr, 1))};
  }
  if (!(sector.lo > 0.0) || !(sector.hi >= sector.lo))
    throw ConfigError(ptr, "sector must satisfy 0 < alpha_lo <= alpha_hi (got [" + format_double(sector.lo) + ", " +
                               format_double(sector.hi) + "])");
  return Coupling(std::move(fn), sector);
}

DisturbanceSpec parse_disturbance(const json& j, const std::string& ptr, std::uint64_t default_seed) {
  DisturbanceSpec d;
  const std::string kind = as_string(require(j, ptr, "kind"), child(ptr, "kind"));
  if (kind == "zero") {
    d.kind = DisturbanceKind::Zero;
  } else if (kind == "constant") {
    d.kind = DisturbanceKind::Constant;
    d.scale = as_number(require(j, ptr, "scale"), child(ptr, "scale"));
  } else if (kind == "gaussian") {
    d.kind = DisturbanceKind::Gaussian;
    d.scale = number_or(j, ptr, "scale", 1.0);
    if (d.scale < 0.0) throw ConfigError(child(ptr, "scale"), "must be >= 0");
  } else {
    throw ConfigError(child(ptr, "kind"), "unknown disturbance kind '" + kind + "'");
  }
  d.seed = j.contains("seed") ? as_seed(j["seed"], child(ptr, "seed")) : default_seed;
  return d;
}

NetworkConfig parse_root(const json& root) {
  if (!root.is_object()) throw ConfigError("", "configuration must be a JSON object");
  NetworkConfig cfg;
  NetworkModel& m = cfg.model;
  m.graph = parse_graph_node(require(root, "", "graph"), "/graph");
  const int n = m.graph.node_count();
  const int p = m.graph.edge_count();

  // agents
  const json& a = require(root, "", "agents");
  GoodwinParams base;
  base.a1 = positive(a, "/agents", "a1", base.a1);
  base.a2 = positive(a, "/agents", "a2", base.a2);
  base.a3 = positive(a, "/agents", "a3", base.a3);
  base.b2 = positive(a, "/agents", "b2", base.b2);
  base.b3 = positive(a, "/agents", "b3", base.b3);
  if (a.contains("hill")) base.hill = as_int(a["hill"], "/agents/hill");
  if (base.hill < 2) throw ConfigError("/agents/hill", "Hill coefficient must be >= 2");

  const json& b1 = as_array(require(a, "/agents", "b1"), "/agents/b1");
  if (static_cast<int>(b1.size()) != n)
    throw DimensionMismatch("/agents/b1 has " + std::to_string(b1.size()) + " entries but /graph/n is " +
                            std::to_string(n));
  for (std::size_t i = 0; i < b1.size(); ++i) {
    GoodwinParams gi = base;
    gi.b1 = as_number(b1[i], child("/agents/b1", i));
    if (!(gi.b1 > 0.0)) throw ConfigError(child("/agents/b1", i), "must be > 0");
    m.agents.push_back(gi);
  }

  m.x0.assign(static_cast<std::size_t>(n), AgentState{0.0, 0.0, 0.0});
  if (a.contains("x0")) {
    const json& x0 = as_array(a["x0"], "/agents/x0");
    if (static_cast<int>(x0.size()) != n)
      throw DimensionMismatch("/agents/x0 has " + std::to_string(x0.size()) + " entries but /graph/n is " +
                              std::to_string(n));
    for (std::size_t i = 0; i < x0.size(); ++i) {
      const std::string ptr = child("/agents/x0", i);
      if (x0[i].is_number()) {
        m.x0[i][0] = as_number(x0[i], ptr);
      } else if (x0[i].is_array() && !x0[i].empty() && x0[i].size() <= 3) {
        for (std::size_t q = 0; q < x0[i].size(); ++q) m.x0[i][q] = as_number(x0[i][q], child(ptr, q));
      } else {
        throw ConfigError(ptr, "expected a number or an array of 1 to 3 numbers");
      }
    }
  }

  // couplings: one default spec, optional per-edge overrides
  if (!root.contains("coupling") && !root.contains("couplings"))
    throw ConfigError("/coupling", "required field is missing");
  std::vector<std::optional<Coupling>> couplings(static_cast<std::size_t>(p));
  if (root.contains("coupling")) {
    const Coupling c = parse_coupling(root["coupling"], "/coupling");
    for (auto& slot : couplings) slot = c;
  }
  if (root.contains("couplings")) {
    const json& list = as_array(root["couplings"], "/couplings");
    for (std::size_t e = 0; e < list.size(); ++e) {
      const std::string ptr = child("/couplings", e);
      const int k = edge_of(m.graph, require(list[e], ptr, "edge"), child(ptr, "edge"));
      couplings[static_cast<std::size_t>(k)] = parse_coupling(list[e], ptr);
    }
  }
  for (int k = 0; k < p; ++k) {
    if (!couplings[static_cast<std::size_t>(k)])
      throw ConfigError("/couplings", "no coupling given for edge " + m.graph.edge(k).label());
    m.couplings.push_back(*couplings[static_cast<std::size_t>(k)]);
  }

  // disturbances
  m.disturbances.assign(static_cast<std::size_t>(p), DisturbanceSpec{});
  if (root.contains("disturbance")) {
    const json& d = root["disturbance"];
    cfg.seed = d.contains("seed") ? as_seed(d["seed"], "/disturbance/seed") : 0;
    const DisturbanceSpec global = parse_disturbance(d, "/disturbance", cfg.seed);
    for (int k = 0; k < p; ++k) {
      m.disturbances[static_cast<std::size_t>(k)] = global;
      m.disturbances[static_cast<std::size_t>(k)].seed = edge_seed(cfg.seed, k);
    }
  }
  if (root.contains("disturbances")) {
    const json& list = as_array(root["disturbances"], "/disturbances");
    for (std::size_t e = 0; e < list.size(); ++e) {
      const std::string ptr = child("/disturbances", e);
      const int k = edge_of(m.graph, require(list[e], ptr, "edge"), child(ptr, "edge"));
      m.disturbances[static_cast<std::size_t>(k)] = parse_disturbance(list[e], ptr, edge_seed(cfg.seed, k));
    }
  }

  // certification
  if (root.contains("certification")) {
    const json& c = root["certification"];
    const std::string ptr = "/certification";
    cfg.cert.theta = positive(c, ptr, "theta", cfg.cert.theta);
    cfg.cert.theta3 = positive(c, ptr, "theta3", cfg.cert.theta3);
    if (c.contains("mode")) {
      const std::string mode = as_string(c["mode"], child(ptr, "mode"));
      if (mode == "uniform")
        cfg.mode = CertMode::UniformWorstCase;
      else if (mode == "per-edge")
        cfg.mode = CertMode::PerEdge;
      else
        throw ConfigError(child(ptr, "mode"), "expected 'uniform' or 'per-edge'");
    }
    if (c.contains("delta")) {
      const std::string d = as_string(c["delta"], child(ptr, "delta"));
      if (d == "closed-form")
        cfg.delta_mode = DeltaMode::ClosedForm;
      else if (d == "oracle")
        cfg.delta_mode = DeltaMode::Oracle;
      else
        throw ConfigError(child(ptr, "delta"), "expected 'closed-form' or 'oracle'");
    }
  }

  // simulation
  if (root.contains("simulation")) {
    const json& s = root["simulation"];
    cfg.sim.dt = positive(s, "/simulation", "dt", cfg.sim.dt);
    cfg.sim.horizon = positive(s, "/simulation", "T", cfg.sim.horizon);
    if (s.contains("stride")) cfg.sim.stride = as_int(s["stride"], "/simulation/stride");
    if (cfg.sim.stride < 1) throw ConfigError("/simulation/stride", "must be >= 1");
  }
  return cfg;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

NetworkConfig parse_config_text(const std::string& json_text) { return parse_root(parse_text(json_text)); }

NetworkConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open configuration file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_seed(NetworkConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  for (int k = 0; k < cfg.model.graph.edge_count(); ++k)
    cfg.model.disturbances[static_cast<std::size_t>(k)].seed = edge_seed(seed, k);
}

void clear_disturbances(NetworkConfig& cfg) {
  for (auto& d : cfg.model.disturbances) d = DisturbanceSpec{DisturbanceKind::Zero, 0.0, d.seed};
}

void set_noise_scale(NetworkConfig& cfg, double scale) {
  if (!(scale >= 0.0)) throw InadmissibleParams("noise scale must be >= 0");
  for (auto& d : cfg.model.disturbances) {
    if (d.kind == DisturbanceKind::Zero && scale > 0.0) d.kind = DisturbanceKind::Gaussian;
    d.scale = scale;
    if (scale == 0.0) d.kind = DisturbanceKind::Zero;
  }
}

Graph parse_graph_json(const std::string& json_text) { return parse_graph_node(parse_text(json_text), ""); }

std::string graph_to_json(const Graph& g) {
  json j;
  j["n"] = g.node_count();
  j["edges"] = json::array();
  for (const auto& e : g.edges()) j["edges"].push_back({e.lo, e.hi});
  return j.dump();
}

CertificateDocument parse_certificate_json(const Graph& g, const std::string& json_text) {
  const json root = parse_text(json_text);
  const json& list = as_array(require(root, "", "edges"), "/edges");
  const auto p = static_cast<std::size_t>(g.edge_count());
  std::vector<std::optional<EdgeCertificate>> certs(p);
  std::vector<SectorBound> sectors(p);
  for (std::size_t e = 0; e < list.size(); ++e) {
    const std::string ptr = child("/edges", e);
    const auto k = static_cast<std::size_t>(edge_of(g, require(list[e], ptr, "edge"), child(ptr, "edge")));
    if (certs[k]) throw ConfigError(ptr, "edge " + g.edge(static_cast<int>(k)).label() + " listed twice");
    const double nu = as_number(require(list[e], ptr, "nu"), child(ptr, "nu"));
    if (nu > 0.0) throw ConfigError(child(ptr, "nu"), "nu must be <= 0");
    certs[k] = make_edge_certificate(nu, as_number(require(list[e], ptr, "gamma"), child(ptr, "gamma")),
                                     number_or(list[e], ptr, "beta", 0.0));
    sectors[k] = {as_number(require(list[e], ptr, "alpha_lo"), child(ptr, "alpha_lo")),
                  as_number(require(list[e], ptr, "alpha_hi"), child(ptr, "alpha_hi"))};
    if (!(sectors[k].lo > 0.0) || !(sectors[k].hi >= sectors[k].lo) || !std::isfinite(sectors[k].hi))
      throw ConfigError(ptr, "sector must satisfy 0 < alpha_lo <= alpha_hi < inf");
  }
  CertificateDocument doc;
  for (std::size_t k = 0; k < p; ++k) {
    if (!certs[k]) throw ConfigError("/edges", "no certificate for edge " + g.edge(static_cast<int>(k)).label());
    doc.certs.push_back(*certs[k]);
  }
  doc.sectors = std::move(sectors);
  return doc;
}

std::string certificate_to_json(const Graph& g, std::span<const EdgeCertificate> certs,
                                std::span<const SectorBound> sectors) {
  if (static_cast<int>(certs.size()) != g.edge_count() || static_cast<int>(sectors.size()) != g.edge_count())
    throw DimensionMismatch("certificate and sector lists must have one entry per edge");
  json j;
  j["edges"] = json::array();
  for (int k = 0; k < g.edge_count(); ++k) {
    const auto uk = static_cast<std::size_t>(k);
    j["edges"].push_back({{"edge", {g.edge(k).lo, g.edge(k).hi}},
                          {"nu", certs[uk].nu},
                          {"gamma", certs[uk].gamma_raw},
                          {"beta", certs[uk].beta},
                          {"alpha_lo", sectors[uk].lo},
                          {"alpha_hi", sectors[uk].hi}});
  }
  return j.dump(2);
}

void write_margin_csv(std::ostream& os, const Graph& g, const MarginReport& report) {
  write_csv_row(os, {"edge", "slack", "verdict"});
  for (int k = 0; k < g.edge_count(); ++k)
    write_csv_row(os, {g.edge(k).label(), format_double(report.slack[static_cast<std::size_t>(k)]),
                       report.positive[static_cast<std::size_t>(k)] ? "true" : "false"});
}

}  // namespace synccert
