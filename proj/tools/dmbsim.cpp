// Command-line front end: config-driven experiment runs with CSV output and
// deterministic replay. Exit codes: 0 ok, 2 bad configuration, 3 I/O failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "dmb/errors.hpp"
#include "dmb/experiment.hpp"

namespace {

struct FlagBinding {
  std::string flag;
  std::string key;
  std::string value;  // raw text, forwarded to apply_config_line
};

// Registers the shared option surface on a subcommand. Every config key is
// reachable by its dotted name, and the common knobs get short flags.
void add_common_options(CLI::App* sub, std::vector<FlagBinding>& bindings,
                        std::string& config_file) {
  sub->add_option("--config", config_file, "key=value config file");

  const std::vector<std::pair<std::string, std::string>> flags = {
      {"--problem.kind", "problem.kind"},
      {"--problem.n", "problem.n"},
      {"--problem.sigma_z", "problem.sigma_z"},
      {"--problem.wstar", "problem.wstar"},
      {"--problem.sparsity", "problem.sparsity"},
      {"--problem.truth_density", "problem.truth_density"},
      {"--problem.label_noise", "problem.label_noise"},
      {"--rule.kind", "rule.kind"},
      {"--rule.L", "rule.L"},
      {"--rule.gamma", "rule.gamma"},
      {"--rule.D", "rule.D"},
      {"--rule.lambda", "rule.lambda"},
      {"--rule.set", "rule.set"},
      {"--rule.radius", "rule.radius"},
      {"--net.kind", "net.kind"},
      {"--net.arity", "net.arity"},
      {"--net.k", "net.k"},
      {"--net.latency_ms", "net.latency_ms"},
      {"--net.rate", "net.rate"},
      {"--net.file", "net.file"},
      {"--net.root", "net.root"},
      // shorthands
      {"--n", "problem.n"},
      {"--sigma-z", "problem.sigma_z"},
      {"--wstar", "problem.wstar"},
      {"--rule", "rule.kind"},
      {"--L", "rule.L"},
      {"--gamma", "rule.gamma"},
      {"--D", "rule.D"},
      {"--lambda", "rule.lambda"},
      {"--set", "rule.set"},
      {"--radius", "rule.radius"},
      {"--net", "net.kind"},
      {"--k", "net.k"},
      {"--latency", "net.latency_ms"},
      {"--rate", "net.rate"},
      // run keys
      {"--m", "m"},
      {"--b", "b"},
      {"--mu", "mu"},
      {"--per-node-b", "per_node_b"},
      {"--trials", "trials"},
      {"--seed", "seed"},
      {"--out", "out"},
      {"--threads", "threads"},
      {"--serial-trials", "serial_trials"},
      {"--b-list", "b_list"},
      {"--mu-list", "mu_list"},
      // analysis keys
      {"--sigma2", "sigma2"},
      {"--rho", "rho"},
      {"--theta", "theta"},
      {"--delta", "delta"},
      {"--eps-min", "eps_min"},
      {"--f0", "f0"},
  };

  bindings.reserve(flags.size());
  for (const auto& [flag, key] : flags) {
    bindings.push_back({flag, key, ""});
    FlagBinding& b = bindings.back();
    sub->add_option(flag, b.value);
  }
}

int run_command(const std::string& command, CLI::App* sub,
                const std::vector<FlagBinding>& bindings,
                const std::string& config_file) {
  dmb::ExperimentConfig config;
  if (!config_file.empty()) {
    config = dmb::load_config_file(config_file);
  }
  config.command = command;
  for (const FlagBinding& b : bindings) {
    if (sub->count(b.flag) > 0) {
      dmb::apply_config_line(config, b.key + "=" + b.value);
    }
  }
  const dmb::ExperimentOutcome outcome = dmb::run_experiment(config);
  std::cout << outcome.table_text;
  std::cout << outcome.summary_text;
  std::cout << "wrote " << outcome.primary_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed mini-batch simulator"};
  app.require_subcommand(1);

  const std::vector<std::string> commands = {
      "serial",     "minibatch",  "dmb",           "nocomm", "interlaced",
      "opt",        "sweep-batch", "sweep-latency", "bounds", "speedup"};

  struct SubState {
    CLI::App* sub = nullptr;
    std::vector<FlagBinding> bindings;
    std::string config_file;
  };
  std::vector<SubState> subs(commands.size());
  for (std::size_t i = 0; i < commands.size(); ++i) {
    subs[i].sub = app.add_subcommand(commands[i]);
    add_common_options(subs[i].sub, subs[i].bindings, subs[i].config_file);
  }

  std::string replay_summary;
  CLI::App* replay_cmd =
      app.add_subcommand("replay", "verify a recorded run reproduces itself");
  replay_cmd->add_option("summary", replay_summary, "path to a .summary file")
      ->required();

  try {
    app.parse(argc, argv);
    if (replay_cmd->parsed()) {
      const dmb::ReplayReport report = dmb::replay(replay_summary);
      std::cout << report.message << "\n";
      return report.ok ? 0 : 1;
    }
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (subs[i].sub->parsed()) {
        return run_command(commands[i], subs[i].sub, subs[i].bindings,
                           subs[i].config_file);
      }
    }
    std::cerr << "no command given\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const dmb::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    // InputError, ConfigError, ScheduleError, TopologyError
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
