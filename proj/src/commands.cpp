#include "synccert/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "synccert/csv.hpp"
#include "synccert/error.hpp"
#include "synccert_bundled_fixture.hpp"

namespace synccert {

namespace {

std::string fixed4(double v) {
  if (!std::isfinite(v)) return format_double(v);
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  return f;
}

void print_certification(const NetworkConfig& cfg, const CertificationSummary& s, std::ostream& out) {
  const Graph& g = cfg.model.graph;
  out << "delta = " << fixed4(s.delta_closed) << " (closed form), max slope = " << fixed4(s.delta_exact) << "\n";
  if (std::abs(s.delta_exact - s.delta_closed) > 0.01 * s.delta_exact)
    out << "warning: closed-form delta differs from the exact maximum slope by more than 1%\n";
  out << "theta = " << fixed4(cfg.cert.theta) << ", theta3 = " << fixed4(cfg.cert.theta3)
      << ", theta1 = " << fixed4(s.derived.theta1) << ", theta2 = " << fixed4(s.derived.theta2) << ", mode = "
      << (cfg.mode == CertMode::UniformWorstCase ? "uniform" : "per-edge") << "\n\n";

  out << std::left << std::setw(8) << "edge" << std::right << std::setw(10) << "nu" << std::setw(12) << "gamma"
      << std::setw(10) << "beta" << std::setw(10) << "slack" << "  verdict\n";
  for (int k = 0; k < g.edge_count(); ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const auto& c = s.cert.edges[uk];
    out << std::left << std::setw(8) << g.edge(k).label() << std::right << std::setw(10) << fixed4(c.nu)
        << std::setw(12) << fixed4(c.gamma) << std::setw(10) << fixed4(c.beta) << std::setw(10)
        << fixed4(s.margin.slack[uk]) << "  " << (s.margin.positive[uk] ? "pass" : "FAIL") << "\n";
  }
  out << "\nnode nu~: ";
  for (std::size_t i = 0; i < s.cert.nu_tilde.size(); ++i) out << (i ? ", " : "") << fixed4(s.cert.nu_tilde[i]);
  out << "\nmin slack = " << fixed4(s.margin.min_slack) << "  verdict: " << (s.margin.verdict ? "CERTIFIED" : "NOT CERTIFIED")
      << "\nlambda_min(Q) = " << fixed4(s.psi_q.q_min_eigenvalue) << "\n";
  if (s.gain.certified) {
    out << "gain bound: rho = " << fixed4(s.gain.rho) << ", eps = " << fixed4(s.gain.eps)
        << " (mu_lo = " << fixed4(s.gain.mu_lo) << ", mu_hi = " << fixed4(s.gain.mu_hi) << ", "
        << (s.gain.sampled_estimate ? "sampled estimate" : "exact") << ")\n";
  } else {
    out << "gain bound: not certified (mu_lo = " << fixed4(s.gain.mu_lo) << ")\n";
  }
}

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Simulation checks shared by simulate and reproduce-paper.
struct TraceChecks {
  std::optional<BoundCheck> bound;
  std::vector<std::pair<double, double>> lemma1;  // (T, residual) at sampled rows
  bool lemma1_pass = true;
};

}  // namespace

const std::string& bundled_case_study_json() {
  static const std::string text = kBundledCaseStudy;
  return text;
}

CertificationSummary certify(const NetworkConfig& cfg) {
  const NetworkModel& m = cfg.model;
  m.validate();
  CertificationSummary s;
  s.stats = edge_stats(m.graph);
  s.derived = derive_cert_params(m.agents.front(), cfg.cert, cfg.delta_mode);
  s.delta_closed = delta(m.agents.front().hill);
  s.delta_exact = delta_oracle(m.agents.front().hill);
  s.cert = certify_network(m.agents, m.graph, cfg.cert, cfg.mode, m.x0, cfg.delta_mode);
  const auto sectors = m.sectors();
  s.margin = theorem1_margin(s.stats, sectors, s.cert.edges);
  s.psi_q = assemble_psi_q(m.graph, s.cert, sectors);
  const auto samples = sector_box_samples(sectors, 64, cfg.seed);
  s.gain = gain_bound(m.graph, s.cert, sectors, samples);
  return s;
}

EdgeCertificate pair_certificate(const NetworkConfig& cfg, int i, int j) {
  const auto& a = cfg.model.agents;
  const auto ui = static_cast<std::size_t>(i - 1);
  const auto uj = static_cast<std::size_t>(j - 1);
  double mismatch = gain_mismatch(a[ui], a[uj]);
  if (cfg.mode == CertMode::UniformWorstCase)
    for (const auto& e : cfg.model.graph.edges())
      mismatch = std::max(mismatch, gain_mismatch(a[static_cast<std::size_t>(e.lo - 1)],
                                                  a[static_cast<std::size_t>(e.hi - 1)]));
  return certify_edge_with_mismatch(a[ui], a[uj], cfg.cert, cfg.model.x0[ui], cfg.model.x0[uj], mismatch,
                                    cfg.delta_mode);
}

int cmd_certify(const NetworkConfig& cfg, const CertifyOptions& opts, std::ostream& out, std::ostream& err) {
  CertificationSummary s;
  try {
    s = certify(cfg);
  } catch (const InadmissibleParams& e) {
    err << "inadmissible certification parameters: " << e.what() << "\n";
    return kExitInadmissible;
  }
  print_certification(cfg, s, out);
  if (opts.csv) {
    auto f = open_output(*opts.csv);
    write_margin_csv(f, cfg.model.graph, s.margin);
  }
  if (opts.json) {
    auto f = open_output(*opts.json);
    f << certificate_to_json(cfg.model.graph, s.cert.edges, cfg.model.sectors()) << "\n";
  }
  return s.margin.verdict ? kExitOk : kExitVerdictFalse;
}

namespace {

TraceChecks evaluate_trace(const NetworkConfig& cfg, const SimulationTrace& trace, const CertificationSummary* s,
                           bool bound, bool lemma1) {
  TraceChecks c;
  if (bound && s) c.bound = bound_check(trace, s->gain);
  if (lemma1 && s) {
    for (const auto& row : trace.rows) {
      const auto ip = lemma1_inner_products(row.acc, s->stats, s->cert);
      const double r = lemma1_residual(ip);
      c.lemma1.emplace_back(row.t, r);
      c.lemma1_pass = c.lemma1_pass && within_tolerance(r, ip.rhs());
    }
  }
  (void)cfg;
  return c;
}

}  // namespace

int cmd_simulate(const NetworkConfig& cfg, const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  std::optional<CertificationSummary> summary;
  if (opts.check_bound || opts.check_lemma1) {
    try {
      summary = certify(cfg);
    } catch (const InadmissibleParams& e) {
      err << "cannot check against an inadmissible certificate: " << e.what() << "\n";
      return kExitInadmissible;
    }
    if (opts.check_bound && !summary->gain.certified) {
      err << "refusing --check-bound: gain bound not certified (mu_lo = " << format_double(summary->gain.mu_lo)
          << " <= 0)\n";
      return kExitInadmissible;
    }
  }

  SimulationTrace trace;
  try {
    trace = run(cfg.model, cfg.sim);
  } catch (const BlowUp& e) {
    err << "numerical blow-up at t = " << format_double(e.time()) << "\n";
    return kExitBlowUp;
  } catch (const InadmissibleParams& e) {
    err << e.what() << "\n";
    return kExitInadmissible;
  }

  const TraceChecks checks = evaluate_trace(cfg, trace, summary ? &*summary : nullptr, opts.check_bound, opts.check_lemma1);
  const auto path = opts.out_dir / "trace.csv";
  {
    auto f = open_output(path);
    TraceCsvOptions csv;
    csv.full = opts.full;
    csv.gain = summary && summary->gain.certified ? &summary->gain : nullptr;
    if (opts.check_lemma1) {
      csv.stats = &summary->stats;
      csv.cert = &summary->cert;
    }
    write_trace_csv(f, trace, cfg.model.graph, csv);
  }

  const TraceRow& first = trace.rows.front();
  const TraceRow& last = trace.rows.back();
  out << "wrote " << path.string() << " (" << trace.rows.size() << " rows, " << trace.steps << " steps)\n";
  out << "T = " << fixed4(last.t) << "  ||D^T Y||_T = " << fixed4(last.acc.norm_dty())
      << "  ||W||_T = " << fixed4(last.acc.norm_w()) << "\n";
  out << "output disagreement: initial " << fixed4(max_disagreement(first)) << ", final "
      << std::setprecision(4) << max_disagreement(last) << std::setprecision(6) << "\n";

  bool ok = true;
  if (checks.bound) {
    out << "bound check: " << (checks.bound->verdict ? "pass" : "FAIL") << " (min margin "
        << fixed4(checks.bound->min_margin) << ", rho = " << fixed4(summary->gain.rho)
        << ", eps = " << fixed4(summary->gain.eps) << ")\n";
    ok = ok && checks.bound->verdict;
  }
  if (opts.check_lemma1) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& [t, r] : checks.lemma1) worst = std::min(worst, r);
    out << "lemma1 residual check: " << (checks.lemma1_pass ? "pass" : "FAIL") << " (min residual "
        << fixed4(worst) << ")\n";
    ok = ok && checks.lemma1_pass;
  }
  return ok ? kExitOk : kExitVerdictFalse;
}

int cmd_search(const NetworkConfig& cfg, const SearchOptions& opts, std::ostream& out, std::ostream& err) {
  SearchResult r;
  try {
    r = search_params(cfg.model.agents, cfg.model.graph, cfg.model.sectors(), opts.theta, opts.theta3, cfg.mode,
                      cfg.model.x0, opts.include, cfg.delta_mode);
  } catch (const InadmissibleParams& e) {
    err << e.what() << "\n";
    return kExitInadmissible;
  }
  if (opts.csv) {
    auto f = open_output(*opts.csv);
    write_csv_row(f, {"theta", "theta3", "min_slack", "feasible"});
    for (const auto& pt : r.grid)
      write_csv_row(f, {format_double(pt.theta), format_double(pt.theta3), format_double(pt.min_slack),
                        pt.feasible ? "true" : "false"});
  }
  out << "best theta = " << format_double(r.best.theta) << ", theta3 = " << format_double(r.best.theta3)
      << ", min slack = " << format_double(r.best_slack) << " (" << r.grid.size() << " points)\n";
  return r.best_slack > kStrictPositivity ? kExitOk : kExitVerdictFalse;
}

int cmd_graph_stats(const NetworkConfig& cfg, const std::optional<std::filesystem::path>& out_dir, std::ostream& out,
                    std::ostream& /*err*/) {
  const Graph& g = cfg.model.graph;
  const EdgeStats s = edge_stats(g);
  out << "nodes = " << g.node_count() << ", edges = " << g.edge_count()
      << ", connected = " << (g.connected() ? "yes" : "no") << "\n";
  out << "degree:";
  for (int r : s.degree) out << ' ' << r;
  out << "\n" << std::left << std::setw(8) << "edge" << std::right << std::setw(8) << "common" << std::setw(11)
      << "exclusive\n";
  for (int k = 0; k < g.edge_count(); ++k)
    out << std::left << std::setw(8) << g.edge(k).label() << std::right << std::setw(8)
        << s.common[static_cast<std::size_t>(k)] << std::setw(10) << s.exclusive[static_cast<std::size_t>(k)]
        << "\n";
  if (out_dir) {
    std::vector<std::string> nodes;
    for (int i = 1; i <= g.node_count(); ++i) nodes.push_back(std::to_string(i));
    const auto labels = g.edge_labels();
    const auto w = weight_matrices(s);
    auto f1 = open_output(*out_dir / "incidence.csv");
    write_matrix_csv(f1, incidence(g).cast<double>(), nodes, labels, "node");
    auto f2 = open_output(*out_dir / "laplacian.csv");
    write_matrix_csv(f2, laplacian(g).cast<double>(), nodes, nodes, "node");
    auto f3 = open_output(*out_dir / "phi.csv");
    write_matrix_csv(f3, w.phi, labels, labels, "edge");
    auto f4 = open_output(*out_dir / "phi_bar.csv");
    write_matrix_csv(f4, w.phi_bar, labels, labels, "edge");
    out << "wrote incidence.csv, laplacian.csv, phi.csv, phi_bar.csv to " << out_dir->string() << "\n";
  }
  return kExitOk;
}

int cmd_reproduce_paper(const ReproduceOptions& opts, std::ostream& out, std::ostream& err) {
  NetworkConfig cfg = opts.config ? parse_config(*opts.config) : parse_config_text(bundled_case_study_json());
  if (opts.per_edge) cfg.mode = CertMode::PerEdge;
  if (opts.dt) cfg.sim.dt = *opts.dt;
  if (opts.horizon) cfg.sim.horizon = *opts.horizon;
  if (opts.seed) apply_seed(cfg, *opts.seed);
  // Sample once per unit time so the residual horizons are rows of the trace.
  cfg.sim.stride = std::max(1, static_cast<int>(std::lround(1.0 / cfg.sim.dt)));

  std::vector<Check> checks;
  const auto add = [&checks](std::string name, bool pass, std::string detail) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  };

  CertificationSummary s;
  try {
    s = certify(cfg);
  } catch (const InadmissibleParams& e) {
    err << "inadmissible certification parameters: " << e.what() << "\n";
    return kExitInadmissible;
  }
  print_certification(cfg, s, out);

  const int n = cfg.model.graph.node_count();
  double nu_err = 0.0, gamma_err = 0.0, nut_err = 0.0;
  for (const auto& c : s.cert.edges) {
    nu_err = std::max(nu_err, std::abs(c.nu + 0.01));
    gamma_err = std::max(gamma_err, std::abs(c.gamma + 16.125));
  }
  for (double v : s.cert.nu_tilde) nut_err = std::max(nut_err, std::abs(v + 0.04));
  double slack_err = 0.0;
  for (double v : s.margin.slack) slack_err = std::max(slack_err, std::abs(v - 0.035));

  if (cfg.mode == CertMode::UniformWorstCase) {
    add("nu_k = -0.01", nu_err <= 1e-12, "max |err| " + format_double(nu_err));
    add("nu~_i = -0.04", nut_err <= 1e-12, "max |err| " + format_double(nut_err));
    add("slack = 0.035 +- 1e-3", slack_err <= 1e-3, "max |err| " + format_double(slack_err));
  } else {
    add("per-edge slack >= 0.035 - 1e-3", s.margin.min_slack >= 0.035 - 1e-3,
        "min slack " + format_double(s.margin.min_slack));
  }
  add("gamma_k = -16.125 +- 5e-3", gamma_err <= 5e-3, "max |err| " + format_double(gamma_err));
  add("margin verdict", s.margin.verdict, "min slack " + format_double(s.margin.min_slack));
  add("gain bound certified", s.gain.certified,
      "rho " + format_double(s.gain.rho) + ", eps " + format_double(s.gain.eps));

  const std::vector<double> horizons{1.0, 10.0, 50.0, 100.0};
  const auto simulate = [&](NetworkConfig c, const std::string& tag) -> std::optional<SimulationTrace> {
    try {
      SimulationTrace tr = run(c.model, c.sim);
      if (opts.out_dir) {
        auto f = open_output(*opts.out_dir / ("trace_" + tag + ".csv"));
        TraceCsvOptions csv;
        csv.gain = s.gain.certified ? &s.gain : nullptr;
        csv.stats = &s.stats;
        csv.cert = &s.cert;
        write_trace_csv(f, tr, c.model.graph, csv);
      }
      return tr;
    } catch (const BlowUp& e) {
      add(tag + " simulation", false, "blow-up at t = " + format_double(e.time()));
      return std::nullopt;
    }
  };

  const auto residual_checks = [&](const SimulationTrace& tr, const std::string& tag) {
    bool lemma_ok = true, pair_ok = true;
    double lemma_min = std::numeric_limits<double>::infinity(), pair_min = lemma_min;
    for (double T : horizons) {
      if (T > cfg.sim.horizon + 1e-9) continue;
      const TraceRow& row = tr.at_time(T);
      const auto ip = lemma1_inner_products(row.acc, s.stats, s.cert);
      const double r = lemma1_residual(ip);
      lemma_min = std::min(lemma_min, r);
      lemma_ok = lemma_ok && within_tolerance(r, ip.rhs());
      for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
          const auto pi = pair_inequality(row.acc, n, i, j, pair_certificate(cfg, i, j));
          pair_min = std::min(pair_min, pi.residual());
          pair_ok = pair_ok && within_tolerance(pi.residual(), pi.rhs);
        }
    }
    add(tag + " lemma1 residual", lemma_ok, "min " + format_double(lemma_min));
    add(tag + " pairwise inequality", pair_ok, "min " + format_double(pair_min));
  };

  NetworkConfig quiet = cfg;
  clear_disturbances(quiet);
  if (auto tr = simulate(quiet, "w0")) {
    const double d0 = max_disagreement(tr->rows.front());
    const double d1 = max_disagreement(tr->rows.back());
    add("W=0 synchronisation (< 5% of initial)", d1 < 0.05 * d0,
        "ratio " + format_double(d0 > 0 ? d1 / d0 : 0.0));
    if (s.gain.certified) {
      const BoundCheck b = bound_check(*tr, s.gain);
      add("W=0 ||D^T Y||_T <= eps", b.verdict, "min margin " + format_double(b.min_margin));
    }
    residual_checks(*tr, "W=0");
  }
  if (auto tr = simulate(cfg, "noisy")) {
    if (s.gain.certified) {
      const BoundCheck b = bound_check(*tr, s.gain);
      add("noisy gain bound", b.verdict, "min margin " + format_double(b.min_margin));
    }
    residual_checks(*tr, "noisy");
  }

  out << "\n" << std::left << std::setw(44) << "check" << std::setw(7) << "result" << "detail\n";
  const Check* first_fail = nullptr;
  for (const auto& c : checks) {
    out << std::left << std::setw(44) << c.name << std::setw(7) << (c.pass ? "PASS" : "FAIL") << c.detail << "\n";
    if (!c.pass && !first_fail) first_fail = &c;
  }
  if (first_fail) {
    err << "first failing check: " << first_fail->name << "\n";
    return kExitVerdictFalse;
  }
  out << "all checks passed\n";
  return kExitOk;
}

GridAxis parse_axis(const std::string& text) {
  std::stringstream ss(text);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c) )
    throw InadmissibleParams("grid axis must be lo:hi:n, got '" + text + "'");
  try {
    std::size_t used = 0;
    GridAxis axis{std::stod(a), std::stod(b), std::stoi(c, &used)};
    if (used != c.size() || axis.n < 1) throw std::invalid_argument("n");
    return axis;
  } catch (const std::logic_error&) {
    throw InadmissibleParams("grid axis must be lo:hi:n, got '" + text + "'");
  }
}

}  // namespace synccert
