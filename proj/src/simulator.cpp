#include "synccert/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "synccert/csv.hpp"
#include "synccert/error.hpp"
#include "synccert/rk4.hpp"

namespace synccert {

namespace {

std::string time_text(double t) {
  std::ostringstream os;
  os.precision(12);
  os << t;
  return os.str();
}

// Fills X, V, U for outputs read from the stacked state.
void signals_from_state(const Eigen::VectorXd& state, std::span<const double> w, const NetworkModel& m,
                        CouplingSignals& out) {
  const Graph& g = m.graph;
  const int p = g.edge_count();
  out.x.resize(p);
  out.v.resize(p);
  out.u.setZero(g.node_count());
  for (int k = 0; k < p; ++k) {
    const Edge& e = g.edge(k);
    const double xk = state(3 * (e.lo - 1)) - state(3 * (e.hi - 1)) + w[static_cast<std::size_t>(k)];
    const double vk = m.couplings[static_cast<std::size_t>(k)](xk);
    out.x(k) = xk;
    out.v(k) = vk;
    out.u(e.lo - 1) -= vk;
    out.u(e.hi - 1) += vk;
  }
}

class NetworkField {
 public:
  NetworkField(const NetworkModel& m, std::span<const double> w) : m_(m), w_(w) {}

  void operator()(double /*t*/, const Eigen::VectorXd& s, Eigen::VectorXd& ds) {
    signals_from_state(s, w_, m_, sig_);
    ds.resize(s.size());
    for (int i = 0; i < m_.graph.node_count(); ++i) {
      const AgentState xi{s(3 * i), s(3 * i + 1), s(3 * i + 2)};
      const AgentState d = goodwin_rhs(m_.agents[static_cast<std::size_t>(i)], xi, sig_.u(i));
      ds(3 * i) = d[0];
      ds(3 * i + 1) = d[1];
      ds(3 * i + 2) = d[2];
    }
  }

  void set_disturbance(std::span<const double> w) { w_ = w; }

 private:
  const NetworkModel& m_;
  std::span<const double> w_;
  CouplingSignals sig_;
};

// Integrand values at one time point, in the layout of RunningIntegrals.
void integrand(const Eigen::VectorXd& state, const CouplingSignals& sig, std::span<const double> w, const Graph& g,
               RunningIntegrals& out) {
  const int n = g.node_count();
  for (int k = 0; k < g.edge_count(); ++k) {
    const double dty = sig.x(k) - w[static_cast<std::size_t>(k)];
    out.dty_sq(k) = dty * dty;
    out.w_sq(k) = w[static_cast<std::size_t>(k)] * w[static_cast<std::size_t>(k)];
    out.v_sq(k) = sig.v(k) * sig.v(k);
    out.v_dty(k) = sig.v(k) * dty;
  }
  out.u_sq = sig.u.array().square();
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++idx) {
      const double dy = state(3 * i) - state(3 * j);
      out.pair_du_dy(idx) = (sig.u(i) - sig.u(j)) * dy;
      out.pair_dy_sq(idx) = dy * dy;
    }
}

void accumulate(RunningIntegrals& acc, const RunningIntegrals& a, const RunningIntegrals& b, double half_dt) {
  acc.dty_sq += half_dt * (a.dty_sq + b.dty_sq);
  acc.w_sq += half_dt * (a.w_sq + b.w_sq);
  acc.v_sq += half_dt * (a.v_sq + b.v_sq);
  acc.v_dty += half_dt * (a.v_dty + b.v_dty);
  acc.u_sq += half_dt * (a.u_sq + b.u_sq);
  acc.pair_du_dy += half_dt * (a.pair_du_dy + b.pair_du_dy);
  acc.pair_dy_sq += half_dt * (a.pair_dy_sq + b.pair_dy_sq);
}

TraceRow make_row(double t, const Eigen::VectorXd& state, const CouplingSignals& sig, std::span<const double> w,
                  const RunningIntegrals& acc) {
  TraceRow row;
  row.t = t;
  row.x = state;
  const Eigen::Index n = state.size() / 3;
  row.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) row.y(i) = state(3 * i);
  row.u = sig.u;
  row.edge_x = sig.x;
  row.edge_v = sig.v;
  row.edge_w = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  row.acc = acc;
  return row;
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

void NetworkModel::validate() const {
  const auto n = static_cast<std::size_t>(graph.node_count());
  const auto p = static_cast<std::size_t>(graph.edge_count());
  if (agents.size() != n)
    throw DimensionMismatch("agents has " + std::to_string(agents.size()) + " entries, graph has " +
                            std::to_string(n) + " nodes");
  if (x0.size() != n)
    throw DimensionMismatch("x0 has " + std::to_string(x0.size()) + " entries, graph has " + std::to_string(n) +
                            " nodes");
  if (couplings.size() != p)
    throw DimensionMismatch("couplings has " + std::to_string(couplings.size()) + " entries, graph has " +
                            std::to_string(p) + " edges");
  if (disturbances.size() != p)
    throw DimensionMismatch("disturbances has " + std::to_string(disturbances.size()) + " entries, graph has " +
                            std::to_string(p) + " edges");
  for (const auto& a : agents) a.validate();
}

std::vector<SectorBound> NetworkModel::sectors() const {
  std::vector<SectorBound> out;
  out.reserve(couplings.size());
  for (const auto& c : couplings) out.push_back(c.sector());
  return out;
}

Eigen::VectorXd NetworkModel::initial_state() const {
  Eigen::VectorXd s(3 * static_cast<Eigen::Index>(x0.size()));
  for (std::size_t i = 0; i < x0.size(); ++i)
    for (std::size_t q = 0; q < 3; ++q) s(static_cast<Eigen::Index>(3 * i + q)) = x0[i][q];
  return s;
}

CouplingSignals coupling_input(std::span<const double> y, std::span<const double> w, const Graph& g,
                               std::span<const Coupling> couplings) {
  const int n = g.node_count();
  const int p = g.edge_count();
  if (static_cast<int>(y.size()) != n)
    throw DimensionMismatch("Y has " + std::to_string(y.size()) + " entries, graph has " + std::to_string(n) +
                            " nodes");
  if (static_cast<int>(w.size()) != p || static_cast<int>(couplings.size()) != p)
    throw DimensionMismatch("W and coupling lists must have one entry per edge (" + std::to_string(p) + ")");
  CouplingSignals out{Eigen::VectorXd(p), Eigen::VectorXd(p), Eigen::VectorXd::Zero(n)};
  for (int k = 0; k < p; ++k) {
    const Edge& e = g.edge(k);
    out.x(k) = y[static_cast<std::size_t>(e.lo - 1)] - y[static_cast<std::size_t>(e.hi - 1)] +
               w[static_cast<std::size_t>(k)];
    out.v(k) = couplings[static_cast<std::size_t>(k)](out.x(k));
    out.u(e.lo - 1) -= out.v(k);
    out.u(e.hi - 1) += out.v(k);
  }
  return out;
}

Eigen::VectorXd step(const Eigen::VectorXd& state, double t, double dt, const NetworkModel& model,
                     std::span<const double> w) {
  if (!(dt > 0.0)) throw InadmissibleParams("step size must be positive");
  if (state.size() != 3 * model.graph.node_count())
    throw DimensionMismatch("state has " + std::to_string(state.size()) + " entries, expected " +
                            std::to_string(3 * model.graph.node_count()));
  if (static_cast<int>(w.size()) != model.graph.edge_count())
    throw DimensionMismatch("disturbance has " + std::to_string(w.size()) + " entries, expected " +
                            std::to_string(model.graph.edge_count()));
  Eigen::VectorXd next = state;
  NetworkField field(model, w);
  Rk4Stepper(next.size()).step(field, next, t, dt);
  if (!all_finite(next)) throw BlowUp(t + dt, "non-finite state at t = " + time_text(t + dt));
  return next;
}

int pair_index(int n, int i, int j) {
  // Pairs (a, b), a < b, enumerated row by row.
  const int a = std::min(i, j) - 1;
  const int b = std::max(i, j) - 1;
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

RunningIntegrals RunningIntegrals::zeros(int n, int p) {
  const int pairs = n * (n - 1) / 2;
  return RunningIntegrals{Eigen::VectorXd::Zero(p), Eigen::VectorXd::Zero(p),     Eigen::VectorXd::Zero(p),
                          Eigen::VectorXd::Zero(p), Eigen::VectorXd::Zero(n),     Eigen::VectorXd::Zero(pairs),
                          Eigen::VectorXd::Zero(pairs)};
}

const TraceRow& SimulationTrace::at_time(double t) const {
  if (rows.empty()) throw DimensionMismatch("empty trace");
  const auto it = std::min_element(rows.begin(), rows.end(), [t](const TraceRow& a, const TraceRow& b) {
    return std::abs(a.t - t) < std::abs(b.t - t);
  });
  return *it;
}

SimulationTrace run(const NetworkModel& model, const SimulationOptions& opts) {
  model.validate();
  if (!(opts.dt > 0.0) || !(opts.horizon >= 0.0))
    throw InadmissibleParams("simulation needs dt > 0 and T >= 0");
  if (opts.stride < 1) throw InadmissibleParams("sample stride must be >= 1");
  const double ratio = opts.horizon / opts.dt;
  const long steps = std::lround(ratio);
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-6)
    throw InadmissibleParams("T / dt must be an integer, got " + time_text(ratio));

  const Graph& g = model.graph;
  const int n = g.node_count();
  const int p = g.edge_count();

  std::vector<DisturbanceSource> sources;
  sources.reserve(static_cast<std::size_t>(p));
  for (const auto& d : model.disturbances) sources.emplace_back(d);
  std::vector<double> w(static_cast<std::size_t>(p));
  const auto draw = [&] {
    for (int k = 0; k < p; ++k) w[static_cast<std::size_t>(k)] = sources[static_cast<std::size_t>(k)].next();
  };

  SimulationTrace trace;
  trace.dt = opts.dt;
  trace.steps = steps;
  trace.rows.reserve(static_cast<std::size_t>(steps / opts.stride + 2));

  Eigen::VectorXd state = model.initial_state();
  RunningIntegrals acc = RunningIntegrals::zeros(n, p);
  RunningIntegrals left = acc, right = acc;
  CouplingSignals sig;
  Rk4Stepper stepper(state.size());
  NetworkField field(model, w);

  draw();
  signals_from_state(state, w, model, sig);
  trace.rows.push_back(make_row(0.0, state, sig, w, acc));

  for (long s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * opts.dt;
    if (s > 0) {
      draw();
      signals_from_state(state, w, model, sig);
    }
    integrand(state, sig, w, g, left);

    stepper.step(field, state, t, opts.dt);
    const double t_next = static_cast<double>(s + 1) * opts.dt;
    if (!all_finite(state)) throw BlowUp(t_next, "non-finite state at t = " + time_text(t_next));

    signals_from_state(state, w, model, sig);
    integrand(state, sig, w, g, right);
    accumulate(acc, left, right, 0.5 * opts.dt);

    if ((s + 1) % opts.stride == 0 || s + 1 == steps) trace.rows.push_back(make_row(t_next, state, sig, w, acc));
  }
  return trace;
}

BoundCheck bound_check(const SimulationTrace& trace, const GainBound& gb, double tol) {
  if (!gb.certified)
    throw Uncertified("gain bound is not certified (mu_lo = " + format_double(gb.mu_lo) + " <= 0)");
  BoundCheck out;
  out.verdict = true;
  out.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& row : trace.rows) {
    const double scaled_w = gb.rho * row.acc.norm_w();
    const double margin = scaled_w + gb.eps - row.acc.norm_dty();
    out.t.push_back(row.t);
    out.margin.push_back(margin);
    out.min_margin = std::min(out.min_margin, margin);
    if (margin < -tol * (1.0 + scaled_w)) out.verdict = false;
  }
  return out;
}

Lemma1InnerProducts lemma1_inner_products(const RunningIntegrals& acc, const EdgeStats& stats,
                                          const NetworkCertificate& cert) {
  const int p = stats.edge_count();
  if (acc.dty_sq.size() != p || cert.edge_count() != p)
    throw DimensionMismatch("integrals, statistics and certificate disagree on the edge count");
  Lemma1InnerProducts ip;
  for (int k = 0; k < p; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const double half_excl = 0.5 * stats.exclusive[uk];
    ip.v_weighted_dty += (2.0 + stats.common[uk]) * acc.v_dty(k);
    ip.dty_quadratic += (cert.edges[uk].gamma - half_excl) * acc.dty_sq(k);
    ip.v_quadratic -= half_excl * acc.v_sq(k);
  }
  // <V, D^T Xi D V> = <U, Xi U> because U = -D V.
  for (int i = 0; i < stats.node_count(); ++i) ip.v_quadratic += cert.nu_tilde[static_cast<std::size_t>(i)] * acc.u_sq(i);
  ip.beta_bar = cert.beta_bar;
  return ip;
}

PairInequality pair_inequality(const RunningIntegrals& acc, int n, int i, int j, const EdgeCertificate& cert) {
  if (i == j || i < 1 || j < 1 || i > n || j > n) throw DimensionMismatch("invalid agent pair");
  const int idx = pair_index(n, i, j);
  // Stored integrals use the orientation (min, max); the inequality is symmetric.
  PairInequality out;
  out.lhs = acc.pair_du_dy(idx);
  out.rhs = cert.nu * (acc.u_sq(i - 1) + acc.u_sq(j - 1)) + cert.gamma_raw * acc.pair_dy_sq(idx) + cert.beta;
  return out;
}

std::vector<Eigen::VectorXd> realised_slopes(const SimulationTrace& trace, std::span<const SectorBound> sectors) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(trace.rows.size());
  for (const auto& row : trace.rows) {
    Eigen::VectorXd eta(row.edge_x.size());
    for (Eigen::Index k = 0; k < eta.size(); ++k) {
      const SectorBound& s = sectors[static_cast<std::size_t>(k)];
      const double x = row.edge_x(k);
      eta(k) = std::abs(x) <= 1e-12 ? s.midpoint() : std::clamp(row.edge_v(k) / x, s.lo, s.hi);
    }
    out.push_back(std::move(eta));
  }
  return out;
}

double max_disagreement(const TraceRow& row) {
  return row.y.size() == 0 ? 0.0 : row.y.maxCoeff() - row.y.minCoeff();
}

void write_trace_csv(std::ostream& os, const SimulationTrace& trace, const Graph& g, const TraceCsvOptions& opts) {
  const bool lemma = opts.stats != nullptr && opts.cert != nullptr;
  std::vector<std::string> header{"t"};
  for (int i = 1; i <= g.node_count(); ++i) header.push_back("y_" + std::to_string(i));
  header.insert(header.end(), {"normDTY", "normW", "bound_margin"});
  if (lemma) header.push_back("lemma1_residual");
  if (opts.full)
    for (const auto& e : g.edges()) {
      header.push_back("X_" + e.label());
      header.push_back("V_" + e.label());
      header.push_back("W_" + e.label());
    }
  write_csv_row(os, header);

  const bool certified = opts.gain != nullptr && opts.gain->certified;
  for (const auto& row : trace.rows) {
    std::vector<std::string> cells{format_double(row.t)};
    for (Eigen::Index i = 0; i < row.y.size(); ++i) cells.push_back(format_double(row.y(i)));
    const double ndty = row.acc.norm_dty();
    const double nw = row.acc.norm_w();
    cells.push_back(format_double(ndty));
    cells.push_back(format_double(nw));
    cells.push_back(certified ? format_double(opts.gain->rho * nw + opts.gain->eps - ndty) : "nan");
    if (lemma) cells.push_back(format_double(lemma1_residual(lemma1_inner_products(row.acc, *opts.stats, *opts.cert))));
    if (opts.full)
      for (Eigen::Index k = 0; k < row.edge_x.size(); ++k) {
        cells.push_back(format_double(row.edge_x(k)));
        cells.push_back(format_double(row.edge_v(k)));
        cells.push_back(format_double(row.edge_w(k)));
      }
    write_csv_row(os, cells);
  }
}

}  // namespace synccert
