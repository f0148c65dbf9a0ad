#include "dmb/experiment.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "dmb/analysis.hpp"
#include "dmb/dmb_engine.hpp"
#include "dmb/opt_engine.hpp"
#include "dmb/trial_runner.hpp"

namespace dmb {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw IoError("format_double failed");
  return std::string(buf, ptr);
}

namespace {

constexpr std::uint64_t kProblemStream = 0x70726f626c656dull;
constexpr std::uint64_t kEvalStream = 0x6576616cull;

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ConfigError("bad number: " + s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number: " + s);
  }
}

long parse_long(const std::string& s) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw ConfigError("bad integer: " + s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer: " + s);
  }
}

int parse_int(const std::string& s) { return static_cast<int>(parse_long(s)); }

std::uint64_t parse_u64(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw ConfigError("bad integer: " + s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer: " + s);
  }
}

template <typename T, typename Fn>
std::vector<T> parse_list(const std::string& s, Fn item) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (!part.empty()) out.push_back(item(part));
  }
  return out;
}

std::string join_doubles(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += format_double(xs[i]);
  }
  return out;
}

template <typename T>
std::string join_longs(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(xs[i]);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct Builders {
  Problem problem;
  RuleConfig rule;
  double sigma = 0.0;  // sqrt of the problem's variance bound
};

FeasibleSet build_set(const ExperimentConfig& c) {
  if (c.set_kind == "unconstrained") return FeasibleSet::all();
  if (c.set_kind == "ball") {
    const double r = c.radius.value_or(c.D / std::sqrt(2.0));
    return FeasibleSet::euclidean_ball(r);
  }
  throw ConfigError("unknown rule.set: " + c.set_kind);
}

Vector default_wstar(const ExperimentConfig& c, const FeasibleSet& set) {
  const auto n = static_cast<std::size_t>(c.n);
  Vector w(n, 0.0);
  if (set.kind == FeasibleSet::Kind::ball) {
    // Strictly inside the ball so the constrained and unconstrained
    // minimizers coincide.
    const double r = 0.8 * set.radius / std::sqrt(static_cast<double>(c.n));
    for (auto& x : w) x = r;
  } else {
    // h(w*) = D^2 for the Euclidean generator.
    const double r = c.D * std::sqrt(2.0 / static_cast<double>(c.n));
    for (auto& x : w) x = r;
  }
  return w;
}

Builders build_problem_and_rule(const ExperimentConfig& c) {
  Builders out;
  out.rule.set = build_set(c);
  if (c.rule_kind == "pgd") {
    out.rule.kind = RuleKind::projected_gradient;
  } else if (c.rule_kind == "da") {
    out.rule.kind = RuleKind::dual_averaging;
  } else if (c.rule_kind == "md") {
    out.rule.kind = RuleKind::mirror_descent;
  } else if (c.rule_kind == "cda") {
    out.rule.kind = RuleKind::composite_dual_averaging;
    out.rule.l1_weight = c.lambda;
  } else {
    throw ConfigError("unknown rule.kind: " + c.rule_kind);
  }

  if (c.problem_kind == "quadratic") {
    Vector wstar = c.wstar.empty() ? default_wstar(c, out.rule.set) : c.wstar;
    if (static_cast<int>(wstar.size()) != c.n) {
      throw ConfigError("problem.wstar has wrong dimension");
    }
    out.problem = quadratic_problem(std::move(wstar), c.sigma_z, c.D);
  } else if (c.problem_kind == "logistic") {
    Rng rng(c.seed, kProblemStream);
    out.problem =
        logistic_stream(rng, c.n, c.sparsity, c.truth_density, c.label_noise);
    out.problem.diameter = c.D;
  } else {
    throw ConfigError("unknown problem.kind: " + c.problem_kind);
  }
  out.sigma = std::sqrt(out.problem.grad_variance);
  return out;
}

Schedule build_schedule(const ExperimentConfig& c, double sigma,
                        double batch) {
  const double gamma = c.gamma.value_or(sigma / c.D);
  return Schedule::with_gamma(c.L, gamma).bound_to_batch(batch);
}

Topology build_topology(const ExperimentConfig& c) {
  Topology t;
  if (c.net_kind == "star") {
    t = Topology::star(c.k);
  } else if (c.net_kind == "path") {
    t = Topology::path(c.k);
  } else if (c.net_kind == "dary") {
    t = Topology::dary_tree(c.k, c.arity);
  } else if (c.net_kind == "complete") {
    t = Topology::complete(c.k);
  } else if (c.net_kind == "file") {
    t = Topology::load_file(c.net_file);
    if (t.nodes != c.k && c.k != 1) {
      throw ConfigError("net.k does not match the topology file");
    }
  } else {
    throw ConfigError("unknown net.kind: " + c.net_kind);
  }
  t.hop_latency_ms = c.latency_ms;
  t.arrival_rate = c.rate;
  t.validate();
  return t;
}

// ---------------------------------------------------------------------------
// CSV rows

struct Row {
  std::string variant;
  int trial = 0;
  long t = 0;
  double avg_loss = 0.0;
  bool has_regret = false;
  double regret = 0.0;
};

void append_ledger_rows(std::vector<Row>& rows, const std::string& variant,
                        int trial, const RegretLedger& ledger) {
  for (const CurvePoint& p : ledger.checkpoints()) {
    rows.push_back({variant, trial, p.t, p.avg_loss, p.has_regret, p.regret});
  }
}

std::string render_csv(const std::vector<Row>& rows) {
  std::string out = "variant,trial,t,avg_loss,regret\n";
  for (const Row& r : rows) {
    out += r.variant;
    out += ',';
    out += std::to_string(r.trial);
    out += ',';
    out += std::to_string(r.t);
    out += ',';
    out += format_double(r.avg_loss);
    out += ',';
    if (r.has_regret) out += format_double(r.regret);
    out += '\n';
  }
  return out;
}

struct VariantStats {
  std::string variant;
  long final_t = 0;
  double loss_mean = 0.0;
  double loss_se = 0.0;
  bool has_regret = false;
  double regret_mean = 0.0;
  double regret_se = 0.0;
  std::optional<double> bound;
  std::string bound_name;
  std::string extra;  // appended verbatim to the summary line
};

VariantStats summarize(const std::string& variant,
                       const std::vector<Row>& rows) {
  VariantStats s;
  s.variant = variant;
  std::vector<double> losses;
  std::vector<double> regrets;
  long final_t = 0;
  for (const Row& r : rows) {
    if (r.variant == variant) final_t = std::max(final_t, r.t);
  }
  for (const Row& r : rows) {
    if (r.variant != variant || r.t != final_t) continue;
    losses.push_back(r.avg_loss);
    if (r.has_regret) regrets.push_back(r.regret);
  }
  const auto mean_se = [](const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var = xs.size() > 1 ? var / (n - 1.0) : 0.0;
    return std::pair<double, double>(mean, std::sqrt(var / n));
  };
  s.final_t = final_t;
  if (!losses.empty()) {
    auto [m, se] = mean_se(losses);
    s.loss_mean = m;
    s.loss_se = se;
  }
  if (!regrets.empty()) {
    auto [m, se] = mean_se(regrets);
    s.has_regret = true;
    s.regret_mean = m;
    s.regret_se = se;
  }
  return s;
}

// Monte Carlo estimate of F(w) for problems without a closed form.
struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
};

McEstimate mc_expected_loss(const Problem& problem, const Vector& w,
                            long samples, Rng rng) {
  McEstimate est;
  double m2 = 0.0;
  Vector z;
  for (long i = 1; i <= samples; ++i) {
    problem.sample_into(rng, z);
    const double loss = problem.loss_at(w, z);
    const double delta = loss - est.mean;
    est.mean += delta / static_cast<double>(i);
    m2 += delta * (loss - est.mean);
  }
  if (samples > 1) {
    est.se = std::sqrt(m2 / static_cast<double>(samples - 1) /
                       static_cast<double>(samples));
  }
  return est;
}

// ---------------------------------------------------------------------------
// Output plumbing

std::string resolve_out_base(const ExperimentConfig& c) {
  std::string base = c.out.empty() ? c.command : c.out;
  if (!fs::path(base).is_absolute()) {
    if (const char* dir = std::getenv("DMBSIM_OUT_DIR"); dir && *dir) {
      base = (fs::path(dir) / base).string();
    }
  }
  return base;
}

void write_file(const std::string& path, const std::string& content) {
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + p.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Config parsing / serialization

void apply_config_line(ExperimentConfig& c, const std::string& raw) {
  const std::string line = trim(raw);
  if (line.empty() || line[0] == '#') return;
  const auto eq = line.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value: " + line);
  const std::string key = trim(line.substr(0, eq));
  const std::string value = trim(line.substr(eq + 1));

  if (key == "command") c.command = value;
  else if (key == "problem.kind") c.problem_kind = value;
  else if (key == "problem.n") c.n = parse_int(value);
  else if (key == "problem.sigma_z") c.sigma_z = parse_double(value);
  else if (key == "problem.wstar")
    c.wstar = parse_list<double>(value, parse_double);
  else if (key == "problem.sparsity") c.sparsity = parse_int(value);
  else if (key == "problem.truth_density") c.truth_density = parse_double(value);
  else if (key == "problem.label_noise") c.label_noise = parse_double(value);
  else if (key == "rule.kind") c.rule_kind = value;
  else if (key == "rule.L") c.L = parse_double(value);
  else if (key == "rule.gamma") c.gamma = parse_double(value);
  else if (key == "rule.D") c.D = parse_double(value);
  else if (key == "rule.lambda") c.lambda = parse_double(value);
  else if (key == "rule.set") c.set_kind = value;
  else if (key == "rule.radius") c.radius = parse_double(value);
  else if (key == "net.kind") c.net_kind = value;
  else if (key == "net.arity") c.arity = parse_int(value);
  else if (key == "net.k") c.k = parse_int(value);
  else if (key == "net.latency_ms") c.latency_ms = parse_double(value);
  else if (key == "net.rate") c.rate = parse_double(value);
  else if (key == "net.file") c.net_file = value;
  else if (key == "net.root") c.root = parse_int(value);
  else if (key == "m") c.m = parse_long(value);
  else if (key == "b") c.b = parse_long(value);
  else if (key == "mu") c.mu = parse_long(value);
  else if (key == "per_node_b") c.per_node_b = parse_long(value);
  else if (key == "trials") c.trials = parse_int(value);
  else if (key == "seed") c.seed = parse_u64(value);
  else if (key == "out") c.out = value;
  else if (key == "threads") c.threads = parse_int(value);
  else if (key == "serial_trials") c.serial_trials = (value == "1" || value == "true");
  else if (key == "b_list") c.b_list = parse_list<long>(value, parse_long);
  else if (key == "mu_list") c.mu_list = parse_list<long>(value, parse_long);
  else if (key == "sigma2") c.sigma2 = parse_double(value);
  else if (key == "rho") c.rho = parse_double(value);
  else if (key == "theta") c.theta = parse_double(value);
  else if (key == "delta") c.delta = parse_double(value);
  else if (key == "eps_min") c.eps_min = parse_double(value);
  else if (key == "f0") c.f0 = parse_double(value);
  else throw ConfigError("unknown config key: " + key);
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig c;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) apply_config_line(c, line);
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  return parse_config_text(read_file(path));
}

std::string serialize_config(const ExperimentConfig& c) {
  std::string s;
  const auto kv = [&s](const std::string& k, const std::string& v) {
    s += k;
    s += '=';
    s += v;
    s += '\n';
  };
  kv("command", c.command);
  kv("problem.kind", c.problem_kind);
  kv("problem.n", std::to_string(c.n));
  kv("problem.sigma_z", format_double(c.sigma_z));
  if (!c.wstar.empty()) kv("problem.wstar", join_doubles(c.wstar));
  kv("problem.sparsity", std::to_string(c.sparsity));
  kv("problem.truth_density", format_double(c.truth_density));
  kv("problem.label_noise", format_double(c.label_noise));
  kv("rule.kind", c.rule_kind);
  kv("rule.L", format_double(c.L));
  if (c.gamma) kv("rule.gamma", format_double(*c.gamma));
  kv("rule.D", format_double(c.D));
  kv("rule.lambda", format_double(c.lambda));
  kv("rule.set", c.set_kind);
  if (c.radius) kv("rule.radius", format_double(*c.radius));
  kv("net.kind", c.net_kind);
  kv("net.arity", std::to_string(c.arity));
  kv("net.k", std::to_string(c.k));
  kv("net.latency_ms", format_double(c.latency_ms));
  kv("net.rate", format_double(c.rate));
  if (!c.net_file.empty()) kv("net.file", c.net_file);
  kv("net.root", std::to_string(c.root));
  kv("m", std::to_string(c.m));
  kv("b", std::to_string(c.b));
  if (c.mu) kv("mu", std::to_string(*c.mu));
  kv("per_node_b", std::to_string(c.per_node_b));
  kv("trials", std::to_string(c.trials));
  kv("seed", std::to_string(c.seed));
  kv("threads", std::to_string(c.threads));
  kv("serial_trials", c.serial_trials ? "1" : "0");
  if (!c.b_list.empty()) kv("b_list", join_longs(c.b_list));
  if (!c.mu_list.empty()) kv("mu_list", join_longs(c.mu_list));
  if (c.sigma2) kv("sigma2", format_double(*c.sigma2));
  kv("rho", format_double(c.rho));
  kv("theta", format_double(c.theta));
  if (c.delta) kv("delta", format_double(*c.delta));
  kv("eps_min", format_double(c.eps_min));
  if (c.f0) kv("f0", format_double(*c.f0));
  return s;
}

// ---------------------------------------------------------------------------
// Command execution

namespace {

struct CurveOutput {
  std::vector<Row> rows;
  std::vector<VariantStats> stats;
};

BoundParams bound_params(const ExperimentConfig& c, const Problem& problem,
                         double b, double mu) {
  BoundParams p;
  p.sigma2 = problem.grad_variance;
  p.m = static_cast<double>(c.m);
  p.diameter = c.D;
  p.smoothness = c.L;
  p.batch = b;
  p.mu = mu;
  p.nodes = static_cast<double>(c.k);
  p.rho = c.rho;
  p.theta = c.theta;
  if (problem.has_closed_form && problem.minimizer) {
    const Vector w1 =
        project(build_set(c), Vector(static_cast<std::size_t>(c.n), 0.0));
    p.initial_gap = problem.expected_loss(w1) -
                    problem.expected_loss(*problem.minimizer);
  }
  return p;
}

CurveOutput run_curves(const ExperimentConfig& c) {
  const Builders built = build_problem_and_rule(c);
  const Rng base(c.seed);
  const Parallelism mode =
      c.serial_trials ? Parallelism::serial : Parallelism::openmp;
  CurveOutput out;

  struct VariantSpec {
    std::string name;
    std::optional<double> bound;
    std::string bound_name;
    std::function<RegretLedger(int, Rng)> run;
  };
  std::vector<VariantSpec> variants;

  const auto ledger_of = [](RunResult&& r) { return std::move(r.ledger); };

  if (c.command == "serial") {
    const Schedule sched = build_schedule(c, built.sigma, 1.0);
    variants.push_back(
        {"serial", psi_serial(bound_params(c, built.problem, 1, 0)),
         "psi_serial",
         [&, sched](int, Rng rng) {
           return ledger_of(
               run_serial(built.rule, sched, built.problem, c.m, rng));
         }});
  } else if (c.command == "minibatch") {
    const Schedule sched =
        build_schedule(c, built.sigma, static_cast<double>(c.b));
    variants.push_back(
        {"b=" + std::to_string(c.b),
         psi_minibatch(bound_params(c, built.problem,
                                    static_cast<double>(c.b), 0)),
         "psi_minibatch",
         [&, sched](int, Rng rng) {
           return ledger_of(
               run_minibatch(built.rule, sched, built.problem, c.m, c.b, rng));
         }});
  } else if (c.command == "dmb" || c.command == "interlaced") {
    const Topology topo = build_topology(c);
    const SpanningTree tree = build_tree(topo, c.root);
    const long mu = c.mu ? *c.mu
                         : compute_mu(tree, topo.hop_latency_ms,
                                      topo.arrival_rate);
    const Schedule sched =
        build_schedule(c, built.sigma, static_cast<double>(c.b));
    const bool interlaced = c.command == "interlaced";
    variants.push_back(
        {interlaced ? "interlaced" : "dmb",
         psi_dmb(bound_params(c, built.problem, static_cast<double>(c.b),
                              static_cast<double>(mu))),
         "psi_dmb",
         [&, sched, topo, mu, interlaced](int, Rng rng) {
           if (interlaced) {
             InterlacedOptions io;
             io.root = c.root;
             return std::move(run_interlaced(built.rule, sched, built.problem,
                                             c.m, topo, c.b, rng, mu, io)
                                  .run.ledger);
           }
           DmbOptions dopts;
           dopts.root = c.root;
           return std::move(run_dmb(built.rule, sched, built.problem, c.m,
                                    topo, c.b, rng, mu, dopts)
                                .run.ledger);
         }});
  } else if (c.command == "nocomm") {
    const Schedule sched =
        build_schedule(c, built.sigma, static_cast<double>(c.per_node_b));
    variants.push_back(
        {"nocomm-b=" + std::to_string(c.per_node_b),
         psi_nocomm(bound_params(c, built.problem,
                                 static_cast<double>(c.per_node_b), 0)),
         "psi_nocomm",
         [&, sched](int, Rng rng) {
           return ledger_of(run_no_comm(built.rule, sched, built.problem, c.m,
                                        c.k, c.per_node_b, rng)
                                .run);
         }});
  } else if (c.command == "sweep-batch") {
    if (c.b_list.empty()) throw ConfigError("sweep-batch needs b_list");
    for (long b : c.b_list) {
      const Schedule sched =
          build_schedule(c, built.sigma, static_cast<double>(b));
      if (c.k > 1) {
        const Topology topo = build_topology(c);
        const SpanningTree tree = build_tree(topo, c.root);
        const long mu = c.mu ? *c.mu
                             : compute_mu(tree, topo.hop_latency_ms,
                                          topo.arrival_rate);
        variants.push_back(
            {"b=" + std::to_string(b),
             psi_dmb(bound_params(c, built.problem, static_cast<double>(b),
                                  static_cast<double>(mu))),
             "psi_dmb",
             [&, sched, topo, mu, b](int, Rng rng) {
               DmbOptions dopts;
               dopts.root = c.root;
               return std::move(run_dmb(built.rule, sched, built.problem, c.m,
                                        topo, b, rng, mu, dopts)
                                    .run.ledger);
             }});
      } else {
        variants.push_back(
            {"b=" + std::to_string(b),
             psi_minibatch(bound_params(c, built.problem,
                                        static_cast<double>(b), 0)),
             "psi_minibatch",
             [&, sched, b](int, Rng rng) {
               return std::move(run_minibatch(built.rule, sched, built.problem,
                                              c.m, b, rng)
                                    .ledger);
             }});
      }
    }
  } else if (c.command == "sweep-latency") {
    if (c.mu_list.empty()) throw ConfigError("sweep-latency needs mu_list");
    const Topology topo = build_topology(c);
    const Schedule sched =
        build_schedule(c, built.sigma, static_cast<double>(c.b));
    for (long mu : c.mu_list) {
      variants.push_back(
          {"mu=" + std::to_string(mu),
           psi_dmb(bound_params(c, built.problem, static_cast<double>(c.b),
                                static_cast<double>(mu))),
           "psi_dmb",
           [&, sched, topo, mu](int, Rng rng) {
             DmbOptions dopts;
             dopts.root = c.root;
             return std::move(run_dmb(built.rule, sched, built.problem, c.m,
                                      topo, c.b, rng, mu, dopts)
                                  .run.ledger);
           }});
    }
  } else {
    throw ConfigError("unknown command: " + c.command);
  }

  for (const VariantSpec& variant : variants) {
    auto ledgers = run_trials(
        c.trials, base, [&](int trial, Rng rng) { return variant.run(trial, rng); },
        mode);
    for (int trial = 0; trial < c.trials; ++trial) {
      append_ledger_rows(out.rows, variant.name, trial,
                         ledgers[static_cast<std::size_t>(trial)]);
    }
    VariantStats stats = summarize(variant.name, out.rows);
    stats.bound = variant.bound;
    stats.bound_name = variant.bound_name;
    out.stats.push_back(std::move(stats));
  }
  return out;
}

CurveOutput run_opt(const ExperimentConfig& c) {
  const Builders built = build_problem_and_rule(c);
  const Topology topo = build_topology(c);
  const Schedule sched =
      build_schedule(c, built.sigma, static_cast<double>(c.b));
  const Rng base(c.seed);
  const Parallelism mode =
      c.serial_trials ? Parallelism::serial : Parallelism::openmp;

  struct TrialRows {
    std::vector<Row> rows;
    double surrogate_se = 0.0;  // of the final Monte Carlo F estimate
  };
  auto per_trial = run_trials(
      c.trials, base,
      [&](int trial, Rng rng) {
        OptOptions oo;
        oo.trace_iterates = true;
        oo.root = c.root;
        OptRun res = run_dmb_opt(built.rule, sched, built.problem, c.m, topo,
                                 c.b, rng, oo);
        TrialRows out;
        std::vector<KahanScalar> acc(res.iterates.front().size());
        Vector mean(acc.size());
        for (long j = 1; j <= res.batches; ++j) {
          const Vector& w = res.iterates[static_cast<std::size_t>(j - 1)];
          for (std::size_t d = 0; d < acc.size(); ++d) acc[d].add(w[d]);
          if (!RegretLedger::is_checkpoint(j) && j != res.batches) continue;
          for (std::size_t d = 0; d < acc.size(); ++d) {
            mean[d] = acc[d].value() / static_cast<double>(j);
          }
          Row row;
          row.variant = "opt";
          row.trial = trial;
          row.t = j * c.b;  // samples consumed
          if (built.problem.has_closed_form) {
            row.avg_loss = built.problem.expected_loss(mean);
            row.has_regret = true;
            row.regret = optimality_gap(built.problem, mean);
          } else {
            const McEstimate est = mc_expected_loss(
                built.problem, mean, 2048,
                Rng(c.seed, kEvalStream).split(static_cast<std::uint64_t>(j)));
            row.avg_loss = est.mean;
            row.has_regret = false;
            out.surrogate_se = est.se;
          }
          out.rows.push_back(row);
        }
        return out;
      },
      mode);

  CurveOutput out;
  double surrogate_se = 0.0;
  for (const TrialRows& tr : per_trial) {
    out.rows.insert(out.rows.end(), tr.rows.begin(), tr.rows.end());
    surrogate_se = std::max(surrogate_se, tr.surrogate_se);
  }
  VariantStats stats = summarize("opt", out.rows);
  stats.bound =
      gap_bound(bound_params(c, built.problem, static_cast<double>(c.b), 0));
  stats.bound_name = "gap_bound";
  if (!built.problem.has_closed_form) {
    stats.extra = " surrogate_se=" + format_double(surrogate_se);
  }
  out.stats.push_back(std::move(stats));
  return out;
}

std::string run_bounds_text(const ExperimentConfig& c) {
  BoundParams p;
  p.sigma2 = c.sigma2.value_or(1.0);
  p.m = static_cast<double>(c.m);
  p.diameter = c.D;
  p.smoothness = c.L;
  p.batch = static_cast<double>(c.b);
  p.mu = static_cast<double>(c.mu.value_or(0));
  p.nodes = static_cast<double>(c.k);
  p.rho = c.rho;
  p.theta = c.theta;
  p.initial_gap = c.f0;

  std::string s;
  const auto kv = [&s](const std::string& k, double v) {
    s += k;
    s += '=';
    s += format_double(v);
    s += '\n';
  };
  kv("psi_serial", psi_serial(p));
  kv("psi_minibatch", psi_minibatch(p));
  kv("psi_minibatch_general", psi_minibatch_general(p));
  kv("psi_dmb", psi_dmb(p));
  kv("psi_dmb_sqrt_expanded", psi_dmb_sqrt_expanded(p));
  kv("psi_nocomm", psi_nocomm(p));
  kv("gap_bound", gap_bound(p));
  kv("gap_bound_accelerated", gap_bound_accelerated(p));
  const double delta = c.delta.value_or(
      c.k > 1 ? std::log2(static_cast<double>(c.k)) : 0.0);
  kv("speedup_samples", speedup_samples(p.nodes, delta, p.batch));

  const long suggested = select_batch_size(p.m, c.rho);
  s += "suggested_batch=" + std::to_string(suggested) + "\n";
  const long pow2 = suggested > 0
                        ? (1L << std::lround(std::log2(
                              static_cast<double>(suggested))))
                        : 1;
  if (pow2 != suggested) {
    s += "# note: power-of-two rounding would give " + std::to_string(pow2) +
         "\n";
  }
  return s;
}

std::string run_speedup_text(const ExperimentConfig& c) {
  BoundParams p;
  p.sigma2 = c.sigma2.value_or(1.0);
  p.diameter = c.D;
  p.smoothness = c.L;
  p.nodes = static_cast<double>(c.k);
  p.rho = c.rho;
  p.theta = c.theta;
  p.delta = c.delta.value_or(
      c.k > 1 ? std::log2(static_cast<double>(c.k)) : 0.0);

  std::string s = "eps,m_serial,m_dmb,b,speedup\n";
  for (double eps = 0.1; eps >= c.eps_min * 0.999; eps /= 10.0) {
    const double m_srl = serial_sample_complexity(eps, p);
    const double m_dmb = dmb_sample_complexity(eps, p);
    const double b = p.theta * std::sqrt(p.sigma2) /
                     (p.diameter * p.smoothness) * std::pow(m_dmb, p.rho);
    const double sp = speedup_gap(eps, p);
    s += format_double(eps) + "," + format_double(m_srl) + "," +
         format_double(m_dmb) + "," + format_double(b) + "," +
         format_double(sp) + "\n";
  }
  s += "# limit=" + std::to_string(c.k) + "\n";
  return s;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& c) {
  if (c.command.empty()) throw ConfigError("no command given");
  if (c.trials < 1) throw ConfigError("trials must be >= 1");
  set_thread_count(c.threads);

  const std::string base = resolve_out_base(c);
  const bool text_command = c.command == "bounds" || c.command == "speedup";
  ExperimentOutcome outcome;
  outcome.primary_path = base + (text_command ? ".txt" : ".csv");
  outcome.summary_path = base + ".summary";

  std::string primary;
  std::string info;
  if (c.command == "bounds") {
    primary = run_bounds_text(c);
    outcome.table_text = primary;
  } else if (c.command == "speedup") {
    primary = run_speedup_text(c);
    outcome.table_text = primary;
  } else {
    CurveOutput curves = c.command == "opt" ? run_opt(c) : run_curves(c);
    primary = render_csv(curves.rows);
    for (const VariantStats& v : curves.stats) {
      info += "# variant=" + v.variant + " final_t=" + std::to_string(v.final_t) +
              " avg_loss_mean=" + format_double(v.loss_mean) +
              " avg_loss_se=" + format_double(v.loss_se);
      if (v.has_regret) {
        info += " regret_mean=" + format_double(v.regret_mean) +
                " regret_se=" + format_double(v.regret_se);
      }
      if (v.bound) {
        info += " " + v.bound_name + "=" + format_double(*v.bound);
      }
      info += v.extra;
      info += "\n";
    }
  }

  write_file(outcome.primary_path, primary);

  std::string summary = "# dmbsim summary\n";
  summary += serialize_config(c);
  summary +=
      "primary=" + fs::path(outcome.primary_path).filename().string() + "\n";
  summary += info;
  write_file(outcome.summary_path, summary);
  outcome.summary_text = summary;
  return outcome;
}

ReplayReport replay(const std::string& summary_path) {
  const std::string text = read_file(summary_path);
  ExperimentConfig config;
  std::string primary_name;
  {
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      if (t.rfind("primary=", 0) == 0) {
        primary_name = t.substr(8);
        continue;
      }
      apply_config_line(config, t);
    }
  }
  if (primary_name.empty()) {
    throw ConfigError("summary lacks a primary= entry: " + summary_path);
  }

  const fs::path original =
      fs::path(summary_path).parent_path() / primary_name;
  const std::string original_text = read_file(original.string());

  // Re-run into a scratch directory and compare byte for byte.
  const fs::path scratch =
      fs::temp_directory_path() /
      ("dmbsim-replay-" + std::to_string(::getpid()) + "-" +
       std::to_string(std::hash<std::string>{}(summary_path) & 0xffff));
  std::error_code ec;
  fs::create_directories(scratch, ec);
  if (ec) throw IoError("cannot create " + scratch.string());
  config.out = (scratch / "replay").string();
  const ExperimentOutcome rerun = run_experiment(config);
  const std::string rerun_text = read_file(rerun.primary_path);
  fs::remove_all(scratch, ec);

  ReplayReport report;
  if (rerun_text == original_text) {
    report.ok = true;
    report.message = "replay: pass";
    return report;
  }
  std::stringstream a(original_text);
  std::stringstream b(rerun_text);
  std::string la;
  std::string lb;
  long lineno = 0;
  while (true) {
    const bool ga = static_cast<bool>(std::getline(a, la));
    const bool gb = static_cast<bool>(std::getline(b, lb));
    ++lineno;
    if (!ga && !gb) break;
    if (ga != gb || la != lb) {
      report.first_divergent_line = lineno;
      break;
    }
  }
  report.ok = false;
  report.message =
      "replay: fail at line " + std::to_string(report.first_divergent_line);
  return report;
}

}  // namespace dmb
