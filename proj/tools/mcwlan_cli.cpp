// mcwlan: analyze, simulate, assign and sweep multi-cell 802.11 topologies.
//
// Exit codes: 0 ok, 2 bad configuration or usage, 3 fixed point did not
// converge, 4 enumeration or search budget exceeded, 1 anything else.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mcwlan/assign.hpp"
#include "mcwlan/config.hpp"
#include "mcwlan/ctmc_sim.hpp"
#include "mcwlan/errors.hpp"
#include "mcwlan/fixtures.hpp"
#include "mcwlan/multicell.hpp"
#include "mcwlan/report.hpp"

namespace fs = std::filesystem;
using namespace mcwlan;

namespace {

struct MacOverrides {
  std::optional<double> payload_bytes, data_rate, control_rate, slot_us, sifs_us,
      difs_us, phy_header_us, tcp_data_bytes, tcp_ack_bytes;
  std::optional<int> cw_min, doubling_cap, retry_limit, n_nodes;
  std::optional<std::string> access, backoff;

  void attach(CLI::App* app) {
    app->add_option("--mac-payload-bytes", payload_bytes, "Payload size (bytes)");
    app->add_option("--mac-data-rate", data_rate, "Data rate (bit/s)");
    app->add_option("--mac-control-rate", control_rate, "ACK/RTS/CTS rate (bit/s)");
    app->add_option("--mac-slot-us", slot_us, "Slot time (us)");
    app->add_option("--mac-sifs-us", sifs_us, "SIFS (us)");
    app->add_option("--mac-difs-us", difs_us, "DIFS (us)");
    app->add_option("--mac-phy-header-us", phy_header_us, "PHY preamble+header (us)");
    app->add_option("--mac-tcp-data-bytes", tcp_data_bytes, "TCP DATA size incl. headers");
    app->add_option("--mac-tcp-ack-bytes", tcp_ack_bytes, "TCP ACK size incl. headers");
    app->add_option("--mac-cw-min", cw_min, "Minimum contention window W0");
    app->add_option("--mac-doubling-cap", doubling_cap, "Backoff doubling cap m");
    app->add_option("--mac-retry-limit", retry_limit, "Retry limit K");
    app->add_option("--mac-access", access, "basic or rtscts")
        ->check(CLI::IsMember({"basic", "rtscts"}));
    app->add_option("--mac-backoff", backoff, "half_window or half_window_minus_one")
        ->check(CLI::IsMember({"half_window", "half_window_minus_one"}));
    app->add_option("--n-nodes", n_nodes, "Override n_nodes of every cell");
  }

  void apply(Topology& t) const {
    MacParams& p = t.mac;
    if (payload_bytes) p.payload_bits = 8.0 * *payload_bytes;
    if (data_rate) p.data_rate = *data_rate;
    if (control_rate) p.control_rate = *control_rate;
    if (slot_us) p.slot_time = *slot_us * 1e-6;
    if (sifs_us) p.sifs = *sifs_us * 1e-6;
    if (difs_us) p.difs = *difs_us * 1e-6;
    if (phy_header_us) p.phy_header_time = *phy_header_us * 1e-6;
    if (tcp_data_bytes) p.tcp_data_bits = 8.0 * *tcp_data_bytes;
    if (tcp_ack_bytes) p.tcp_ack_bits = 8.0 * *tcp_ack_bytes;
    if (cw_min) p.cw_min = *cw_min;
    if (doubling_cap) p.backoff_doubling_cap = *doubling_cap;
    if (retry_limit) p.retry_limit = *retry_limit;
    if (access) p.access_mode = *access == "basic" ? AccessMode::basic : AccessMode::rtscts;
    if (backoff)
      p.backoff_convention = *backoff == "half_window"
                                 ? BackoffConvention::half_window
                                 : BackoffConvention::half_window_minus_one;
    if (n_nodes) {
      if (*n_nodes < 1) throw ConfigError("--n-nodes must be at least 1");
      for (CellSpec& c : t.cells) c.n_nodes = *n_nodes;
    }
    p.validate();
  }
};

struct Common {
  std::string input;
  std::string out;
  std::string format = "csv";
  std::optional<std::string> mode;
  std::optional<std::string> assignment;
  MacOverrides mac;

  void attach(CLI::App* app, bool with_assignment = true) {
    app->add_option("--input,-i", input, "Topology JSON file")->required();
    app->add_option("--out,-o", out, "Output directory (stdout if omitted)");
    app->add_option("--format", format, "csv or markdown")
        ->check(CLI::IsMember({"csv", "markdown"}));
    app->add_option("--mode", mode, "sat or tcp")
        ->check(CLI::IsMember({"sat", "tcp", "saturated", "tcp_download"}));
    if (with_assignment)
      app->add_option("--assignment", assignment,
                      "Named assignment or comma-separated channels; the "
                      "logical graph keeps only co-channel edges");
    mac.attach(app);
  }

  Topology topology() const {
    Topology t = load_topology(input);
    mac.apply(t);
    if (mode) t.traffic = parse_traffic(*mode);
    return t;
  }

  ContentionGraph graph(const Topology& t) const {
    ContentionGraph g = physical_graph(t);
    if (assignment) g = logical_graph(g, resolve_assignment(t, *assignment));
    return g;
  }
};

MultiCellProblem make_problem(const Topology& t, ContentionGraph g) {
  MultiCellProblem p;
  p.graph = std::move(g);
  p.cells = t.cells;
  p.mac = t.mac;
  p.traffic = t.traffic;
  return p;
}

// Writes to <out>/<name> or, without --out, to stdout under a header line.
class Sink {
 public:
  explicit Sink(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) fs::create_directories(dir_);
  }
  template <typename Fn>
  void emit(const std::string& name, Fn&& write) {
    if (dir_.empty()) {
      if (count_++) std::cout << '\n';
      write(std::cout);
      return;
    }
    const fs::path path = fs::path(dir_) / name;
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path.string());
    write(f);
    std::cerr << "wrote " << path.string() << '\n';
  }

 private:
  std::string dir_;
  int count_ = 0;
};

int cmd_analyze(const Common& c) {
  const Topology t = c.topology();
  const FixedPointSolution sol = solve_fixed_point(make_problem(t, c.graph(t)));
  Sink sink(c.out);
  if (c.format == "markdown") {
    sink.emit("report.md", [&](std::ostream& o) {
      write_markdown_report(o, t.name.empty() ? c.input : t.name, sol, t.traffic);
    });
  } else {
    sink.emit("cells.csv", [&](std::ostream& o) { write_cells_csv(o, sol); });
    sink.emit("summary.csv", [&](std::ostream& o) { write_summary_csv(o, sol, t.traffic); });
  }
  return 0;
}

struct SimArgs {
  double events = 1e6;
  std::optional<double> horizon;
  std::uint64_t seed = 1;
  std::string active = "exp";
  double warmup = 0.1;
  int batches = 20;
};

int cmd_simulate(const Common& c, const SimArgs& a) {
  const Topology t = c.topology();
  const ContentionGraph g = c.graph(t);
  const FixedPointSolution sol = solve_fixed_point(make_problem(t, g));
  std::vector<double> mu(sol.mu_inv.size());
  for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = 1.0 / sol.mu_inv[i];
  SimConfig cfg;
  cfg.seed = a.seed;
  cfg.warmup_fraction = a.warmup;
  cfg.batches = a.batches;
  cfg.active_time = a.active == "det" ? ActiveTimeDistribution::deterministic
                                      : ActiveTimeDistribution::exponential;
  if (a.horizon) {
    cfg.horizon = *a.horizon;
  } else {
    if (!(a.events > 0)) throw ConfigError("--events must be positive");
    cfg.horizon = a.events / stationary_event_rate(g, sol.lambda, mu) /
                  (1.0 - cfg.warmup_fraction);
  }
  const SimEstimate est = simulate(g, sol.lambda, mu, cfg);
  Sink sink(c.out);
  sink.emit("sim.csv", [&](std::ostream& o) { write_sim_csv(o, est, sol.x); });
  sink.emit("states.csv", [&](std::ostream& o) { write_states_csv(o, est, sol.pi); });
  std::cerr << "simulated " << format_number(cfg.horizon) << " s, "
            << est.total_events << " events\n";
  return 0;
}

struct AssignArgs {
  std::string method = "misa";
  std::optional<int> channels;
  double b = 0.01;
  std::uint64_t seed = 1;
  std::int64_t steps = 1'000'000;
  double threshold = 1e-3;
  std::string order = "lex";
  std::string utility = "inf";
  std::optional<std::string> init;
  double init_weight = 0.9;
};

int cmd_assign(const Common& c, const AssignArgs& a) {
  Topology t = c.topology();
  const ContentionGraph g = physical_graph(t);
  const int M = a.channels.value_or(t.channels.value_or(0));
  if (M < 1) throw ConfigError("number of channels unknown: pass --channels or set 'channels'");

  ThetaBarUtility inf_utility(g);
  FiniteRhoUtility finite_utility(g, t.cells, t.mac, t.traffic);
  const Utility utility = a.utility == "finite" ? Utility(std::cref(finite_utility))
                                                : Utility(std::cref(inf_utility));

  ChannelAssignment result;
  std::vector<double> trace;
  std::string extra;
  if (a.method == "misa") {
    result = misa(g, M, a.order == "random" ? OrderPolicy::random : OrderPolicy::lexicographic,
                  a.seed);
  } else if (a.method == "exhaustive") {
    result = exhaustive_search(g, M, utility).best;
  } else {
    LriOptions opt;
    opt.M = M;
    opt.b = a.b;
    opt.seed = a.seed;
    opt.max_steps = a.steps;
    opt.convergence_threshold = a.threshold;
    if (a.init) opt.init = LAState::biased(resolve_assignment(t, *a.init, M), a.init_weight, a.b);
    LriResult r = run_lri(g, utility, opt);
    result = r.assignment;
    trace = std::move(r.trace);
    extra = std::string(r.converged ? "converged" : "not converged") + " after " +
            std::to_string(r.steps) + " steps";
  }
  const NashReport nash = is_nash_equilibrium(g, result, utility);

  t.channels = M;
  t.assignments["result"] = result.channels;
  Sink sink(c.out);
  sink.emit("assignment.json", [&](std::ostream& o) { o << to_json(t).dump(2) << '\n'; });
  if (!trace.empty())
    sink.emit("trace.csv", [&](std::ostream& o) { write_trace_csv(o, trace); });
  std::ostringstream line;
  line << "method=" << a.method << " channels=" << M << " assignment=";
  for (std::size_t i = 0; i < result.channels.size(); ++i)
    line << (i ? "," : "") << result.channels[i];
  line << " utility=" << format_number(nash.utility)
       << " theta_bar=" << format_number(nash.utility * g.num_vertices())
       << " nash=" << (nash.is_nash ? "yes" : "no");
  if (!extra.empty()) line << " (" << extra << ")";
  std::cerr << line.str() << '\n';
  return 0;
}

struct SweepArgs {
  std::string param = "payload";
  std::vector<double> values;
  std::optional<double> from, to;
  int points = 20;
  bool log = false;
};

std::vector<double> sweep_grid(const SweepArgs& a) {
  if (!a.values.empty()) return a.values;
  if (!a.from || !a.to) throw ConfigError("sweep needs --values or --from/--to");
  if (a.points < 2) throw ConfigError("--points must be at least 2");
  if (a.log && (*a.from <= 0 || *a.to <= 0)) throw ConfigError("log sweep needs positive bounds");
  std::vector<double> v;
  for (int k = 0; k < a.points; ++k) {
    const double f = static_cast<double>(k) / (a.points - 1);
    v.push_back(a.log ? *a.from * std::pow(*a.to / *a.from, f) : *a.from + f * (*a.to - *a.from));
  }
  return v;
}

int cmd_sweep(const Common& c, const SweepArgs& a) {
  Topology t = c.topology();
  const ContentionGraph g = c.graph(t);
  const std::vector<double> grid = sweep_grid(a);
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw ConfigError("sweep grid must be strictly increasing");

  const IndependentSetFamily fam = enumerate_state_space(g);
  const LargeRhoLimits lim = large_rho_limits(fam);
  Sink sink(c.out);
  sink.emit("sweep.csv", [&](std::ostream& o) {
    o << "value,cell,gamma,x,x_inf\n";
    for (double v : grid) {
      std::vector<double> gamma, x;
      if (a.param == "rho") {
        if (!(v >= 0)) throw ConfigError("rho must be non-negative");
        const std::vector<double> rho(g.n_cells(), v);
        x = unblocked_fractions_direct(fam, stationary_distribution(fam, rho));
      } else {
        t.mac.payload_bits = 8.0 * v;
        const FixedPointSolution sol = solve_fixed_point(make_problem(t, g));
        gamma = sol.gamma;
        x = sol.x;
      }
      for (int i = 0; i < g.n_cells(); ++i)
        o << format_number(v) << ',' << i + 1 << ','
          << (gamma.empty() ? "" : format_number(gamma[i])) << ',' << format_number(x[i])
          << ',' << format_number(lim.x[i]) << '\n';
    }
  });
  return 0;
}

int cmd_fixtures(const std::string& out) {
  if (out.empty()) throw ConfigError("fixtures needs --out");
  fs::create_directories(out);
  for (const Topology& t : bundled_fixtures()) {
    const fs::path p = fs::path(out) / (t.name + ".json");
    save_topology(t, p);
    std::cerr << "wrote " << p.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-level analysis and channel assignment for multi-cell 802.11 WLANs"};
  app.require_subcommand(1);

  Common analyze_opts, sim_opts, assign_opts, sweep_opts;
  auto* analyze = app.add_subcommand("analyze", "Solve the fixed point and report per-cell results");
  analyze_opts.attach(analyze);

  SimArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo run of the cell-level chain");
  sim_opts.attach(sim);
  sim->add_option("--events", sim_args.events, "Target number of transitions (default 1e6)");
  sim->add_option("--horizon", sim_args.horizon, "Simulated seconds (overrides --events)");
  sim->add_option("--seed", sim_args.seed, "Random seed");
  sim->add_option("--active", sim_args.active, "Active-period law: exp or det")
      ->check(CLI::IsMember({"exp", "det"}));
  sim->add_option("--warmup", sim_args.warmup, "Fraction of the horizon discarded");
  sim->add_option("--batches", sim_args.batches, "Batches for standard errors");

  AssignArgs assign_args;
  auto* assign = app.add_subcommand("assign", "Compute a channel assignment");
  assign_opts.attach(assign, false);
  assign->add_option("--method", assign_args.method, "misa, lri or exhaustive")
      ->check(CLI::IsMember({"misa", "lri", "exhaustive"}));
  assign->add_option("--channels,-M", assign_args.channels, "Number of channels");
  assign->add_option("--lri-b", assign_args.b, "Learning parameter b");
  assign->add_option("--seed", assign_args.seed, "Random seed");
  assign->add_option("--steps", assign_args.steps, "Maximum learning steps");
  assign->add_option("--threshold", assign_args.threshold, "Stop when every row max > 1 - threshold");
  assign->add_option("--order", assign_args.order, "mISA vertex order: lex or random")
      ->check(CLI::IsMember({"lex", "random"}));
  assign->add_option("--utility", assign_args.utility, "inf (large-rho) or finite (full fixed point)")
      ->check(CLI::IsMember({"inf", "finite"}));
  assign->add_option("--init", assign_args.init, "Bias the automaton toward this assignment");
  assign->add_option("--init-weight", assign_args.init_weight, "Probability placed on --init channels");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Payload or common-rho sweep of gamma and x");
  sweep_opts.attach(sweep);
  sweep->add_option("--param", sweep_args.param, "payload (bytes) or rho")
      ->check(CLI::IsMember({"payload", "rho"}));
  sweep->add_option("--values", sweep_args.values, "Explicit grid")->delimiter(',');
  sweep->add_option("--from", sweep_args.from, "Grid start");
  sweep->add_option("--to", sweep_args.to, "Grid end");
  sweep->add_option("--points", sweep_args.points, "Grid size");
  sweep->add_flag("--log", sweep_args.log, "Geometric grid");

  std::string fixtures_out;
  auto* fixtures = app.add_subcommand("fixtures", "Write the bundled topologies as JSON");
  fixtures->add_option("--out,-o", fixtures_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*analyze) return cmd_analyze(analyze_opts);
    if (*sim) return cmd_simulate(sim_opts, sim_args);
    if (*assign) return cmd_assign(assign_opts, assign_args);
    if (*sweep) return cmd_sweep(sweep_opts, sweep_args);
    if (*fixtures) return cmd_fixtures(fixtures_out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (residual " << e.residual() << ")\n";
    return 3;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
