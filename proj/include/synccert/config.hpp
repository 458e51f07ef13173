#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "synccert/certificates.hpp"
#include "synccert/goodwin.hpp"
#include "synccert/graph.hpp"
#include "synccert/simulator.hpp"

namespace synccert {

/// Everything one network experiment needs: model, certification choices and
/// simulation settings, with defaults filled in.
struct NetworkConfig {
  NetworkModel model;
  CertParams cert;
  CertMode mode = CertMode::UniformWorstCase;
  DeltaMode delta_mode = DeltaMode::ClosedForm;
  SimulationOptions sim;
  std::uint64_t seed = 0;  // network-wide disturbance seed
};

/// Throws ConfigError (with a JSON pointer) on schema violations and
/// DimensionMismatch naming both sides on inconsistent sizes.
NetworkConfig parse_config(const std::filesystem::path& path);
NetworkConfig parse_config_text(const std::string& json_text);

/// Re-derives every Gaussian edge seed from `seed` (see edge_seed).
void apply_seed(NetworkConfig& cfg, std::uint64_t seed);

/// Replaces every edge disturbance with zero.
void clear_disturbances(NetworkConfig& cfg);

/// Scales every edge disturbance (0 turns them off).
void set_noise_scale(NetworkConfig& cfg, double scale);

/// Graph document {"n": int, "edges": [[i, j], ...]}.
Graph parse_graph_json(const std::string& json_text);
std::string graph_to_json(const Graph& g);

struct CertificateDocument {
  std::vector<EdgeCertificate> certs;
  std::vector<SectorBound> sectors;
};

/// {"edges": [{"edge": [i, j], "nu", "gamma", "beta", "alpha_lo", "alpha_hi"}, ...]},
/// edges may appear in any order but must cover the graph exactly once.
CertificateDocument parse_certificate_json(const Graph& g, const std::string& json_text);
std::string certificate_to_json(const Graph& g, std::span<const EdgeCertificate> certs,
                                std::span<const SectorBound> sectors);

/// CSV with columns edge, slack, verdict.
void write_margin_csv(std::ostream& os, const Graph& g, const MarginReport& report);

}  // namespace synccert
