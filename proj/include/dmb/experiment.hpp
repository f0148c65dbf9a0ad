#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dmb {

// Config-driven experiment runner. Configs round-trip through a flat
// key=value text format with section prefixes (problem., rule., net.); every
// key can also be set from a command-line flag. Runs write a CSV (or plain
// text for the calculator commands) plus a .summary file that replays the run
// byte-identically.
struct ExperimentConfig {
  std::string command;  // serial | minibatch | dmb | nocomm | interlaced |
                        // opt | sweep-batch | sweep-latency | bounds | speedup

  // problem.*
  std::string problem_kind = "quadratic";  // quadratic | logistic
  int n = 2;
  double sigma_z = 1.0;
  std::vector<double> wstar;  // empty: derived from D and the set
  int sparsity = 5;
  double truth_density = 0.2;
  double label_noise = 0.05;

  // rule.*
  std::string rule_kind = "da";  // pgd | da | md | cda
  double L = 1.0;
  std::optional<double> gamma;  // default: sigma / D, batch-scaled
  double D = 1.0;
  double lambda = 0.0;
  std::string set_kind = "unconstrained";  // unconstrained | ball
  std::optional<double> radius;            // ball radius; default D / sqrt(2)

  // net.*
  std::string net_kind = "dary";  // star | path | dary | complete | file
  int arity = 2;
  int k = 1;
  double latency_ms = 0.5;
  double rate = 4.0;
  std::string net_file;
  int root = 0;

  // run
  long m = 10000;
  long b = 1;
  std::optional<long> mu;
  long per_node_b = 1;
  int trials = 1;
  std::uint64_t seed = 1;
  std::string out;  // output base path; extension is added per command
  int threads = 0;
  bool serial_trials = false;

  // sweeps
  std::vector<long> b_list;
  std::vector<long> mu_list;

  // analysis
  std::optional<double> sigma2;  // bounds/speedup: direct variance input
  double rho = 1.0 / 3.0;
  double theta = 1.0;
  std::optional<double> delta;  // default: log2(k)
  double eps_min = 1e-10;
  std::optional<double> f0;
};

// One "key=value" assignment; throws ConfigError on unknown keys or bad
// values.
void apply_config_line(ExperimentConfig& config, const std::string& line);

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Canonical serialization: fixed key order, shortest round-trip floats.
std::string serialize_config(const ExperimentConfig& config);

struct ExperimentOutcome {
  std::string primary_path;  // CSV or TXT
  std::string summary_path;
  std::string summary_text;  // informational block, also printed by the CLI
  std::string table_text;    // bounds/speedup tables, echoed to stdout
};

ExperimentOutcome run_experiment(const ExperimentConfig& config);

struct ReplayReport {
  bool ok = false;
  long first_divergent_line = 0;  // 1-based, 0 when ok
  std::string message;
};

// Re-runs the configuration recorded in a .summary file and byte-compares
// the regenerated primary output against the original.
ReplayReport replay(const std::string& summary_path);

// Shortest round-trip decimal formatting (std::to_chars).
std::string format_double(double v);

}  // namespace dmb
