#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "synccert/config.hpp"

namespace synccert {

/// Process exit codes shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerdictFalse = 1,
  kExitInadmissible = 2,
  kExitBlowUp = 3,
};

/// The bundled five-oscillator case-study configuration (JSON text).
const std::string& bundled_case_study_json();

/// Complete certification pipeline for one configuration.
struct CertificationSummary {
  EdgeStats stats;
  NetworkCertificate cert;
  MarginReport margin;
  PsiQ psi_q;
  GainBound gain;
  DerivedCertParams derived;
  double delta_closed = 0.0;
  double delta_exact = 0.0;
};

/// Goodwin certificate -> network certificate -> per-edge margin -> lambda_min(Q)
/// -> gain bound. Throws InadmissibleParams for inadmissible certification parameters.
CertificationSummary certify(const NetworkConfig& cfg);

/// Certificate for an arbitrary agent pair under the configuration's mode
/// (the uniform mode uses the worst mismatch over the graph's edges).
EdgeCertificate pair_certificate(const NetworkConfig& cfg, int i, int j);

struct CertifyOptions {
  std::optional<std::filesystem::path> csv;   // margin report edge,slack,verdict
  std::optional<std::filesystem::path> json;  // certificate document
};

int cmd_certify(const NetworkConfig& cfg, const CertifyOptions& opts, std::ostream& out, std::ostream& err);

struct SimulateOptions {
  std::filesystem::path out_dir = ".";
  bool full = false;
  bool check_bound = false;
  bool check_lemma1 = false;
};

/// Writes <out_dir>/trace.csv.
int cmd_simulate(const NetworkConfig& cfg, const SimulateOptions& opts, std::ostream& out, std::ostream& err);

struct SearchOptions {
  GridAxis theta{0.5, 4.0, 20};
  GridAxis theta3{1.2, 1.9, 20};
  std::vector<CertParams> include;
  std::optional<std::filesystem::path> csv;  // theta,theta3,min_slack,feasible
};

int cmd_search(const NetworkConfig& cfg, const SearchOptions& opts, std::ostream& out, std::ostream& err);

/// Writes incidence.csv, laplacian.csv, phi.csv and phi_bar.csv when out_dir is set.
int cmd_graph_stats(const NetworkConfig& cfg, const std::optional<std::filesystem::path>& out_dir, std::ostream& out,
                    std::ostream& err);

struct ReproduceOptions {
  bool per_edge = false;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> config;   // defaults to the bundled case study
  std::optional<std::filesystem::path> out_dir;  // trace CSVs when set
};

int cmd_reproduce_paper(const ReproduceOptions& opts, std::ostream& out, std::ostream& err);

/// Parses "lo:hi:n".
GridAxis parse_axis(const std::string& text);

}  // namespace synccert
