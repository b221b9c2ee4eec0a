// Command-line front end: configure, run, and persist experiment campaigns.
// Every artifact embeds the config hash and master seed; identical configs
// reproduce identical bytes (the timestamp lives only in config.resolved,
// explicitly marked).

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "asg/campaigns.hpp"
#include "asg/engine.hpp"
#include "asg/functionals.hpp"
#include "asg/stats.hpp"

namespace {

using namespace asg;

struct Cli {
  std::string subcommand;
  double theta = 0.0;
  double sigma = 0.0;
  std::int64_t n0 = 10'000;
  std::int64_t nmax = 2'000;
  std::int64_t nmin = 2;
  int kmax = 3;
  int k = 2;
  std::int64_t replicates = 10'000;
  std::int64_t replicates_path = 1'000;
  std::int64_t trajectories = 1'000;
  std::uint64_t seed = 20260801;
  int threads = 0;
  double horizon = -1.0;
  std::int64_t level = 1;
  double margin = 0.1;
  int prephase_mult = 1;
  std::vector<double> t_grid;
  std::vector<double> eps_list;
  std::string out_dir;
  std::string format = "csv";

  ModelParams params() const { return ModelParams{theta, sigma}; }
};

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ' ';
    s += fmt17(xs[i]);
  }
  return s;
}

// Canonical key=value serialization; its hash stamps every artifact.
std::string canonical_config(const Cli& c) {
  std::map<std::string, std::string> kv;
  kv["subcommand"] = c.subcommand;
  kv["theta"] = fmt17(c.theta);
  kv["sigma"] = fmt17(c.sigma);
  kv["n0"] = std::to_string(c.n0);
  kv["nmax"] = std::to_string(c.nmax);
  kv["nmin"] = std::to_string(c.nmin);
  kv["kmax"] = std::to_string(c.kmax);
  kv["k"] = std::to_string(c.k);
  kv["replicates"] = std::to_string(c.replicates);
  kv["replicates_path"] = std::to_string(c.replicates_path);
  kv["trajectories"] = std::to_string(c.trajectories);
  kv["seed"] = std::to_string(c.seed);
  kv["horizon"] = fmt17(c.horizon);
  kv["level"] = std::to_string(c.level);
  kv["margin"] = fmt17(c.margin);
  kv["prephase_mult"] = std::to_string(c.prephase_mult);
  kv["t_grid"] = join(c.t_grid);
  kv["eps_list"] = join(c.eps_list);
  kv["format"] = c.format;
  std::string text;
  for (const auto& [key, value] : kv) text += key + " = " + value + "\n";
  return text;
}

void write_config_resolved(const Cli& c, const std::string& hash) {
  std::ofstream os(std::filesystem::path(c.out_dir) / "config.resolved");
  os << "# resolved configuration (hash excludes the timestamp line)\n";
  os << "config_hash = " << hash << "\n";
  const std::time_t now = std::time(nullptr);
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  os << "timestamp = " << stamp << "  # informational only, not hashed\n";
  os << canonical_config(c);
}

void write_report(const Cli& c, const McReport& rep, const std::string& name) {
  const std::filesystem::path path =
      std::filesystem::path(c.out_dir) / (name + (c.format == "json" ? ".json" : ".csv"));
  std::ofstream os(path);
  if (c.format == "json")
    rep.write_json(os);
  else
    rep.write_csv(os);
  std::cout << "wrote " << path.string() << "\n";
}

int run_simulate(const Cli& c, const RunOptions& opts) {
  StopCondition stop;
  if (c.horizon > 0.0)
    stop.horizon = c.horizon;
  else
    stop.level = c.level;
  const std::filesystem::path path = std::filesystem::path(c.out_dir) / "simulate.csv";
  std::ofstream os(path);
  os << "# schema=trajectory-v1 config_hash=" << opts.config_hash << " seed=" << opts.seed
     << "\n";
  os << "trajectory,time,kind,i,j,applied_kingman,applied_mutation,applied_asg,"
        "n_kingman,n_mutation,n_asg\n";
  for (std::int64_t traj = 0; traj < c.trajectories; ++traj) {
    RandomStream rng = stream_for(opts.seed, static_cast<std::uint64_t>(traj));
    const CoupledTrajectory t = simulate_coupled(c.params(), c.n0, stop, rng);
    for (const EventRecord& e : t.events) {
      const char* kind = e.mark.kind == Mark::Kind::pair_coalescence  ? "pair"
                         : e.mark.kind == Mark::Kind::mutation_kill   ? "mutation"
                                                                      : "selection";
      os << traj << ',' << fmt17(e.time) << ',' << kind << ',' << e.mark.i << ',' << e.mark.j
         << ',' << e.applied[0] << ',' << e.applied[1] << ',' << e.applied[2] << ','
         << e.counts.kingman << ',' << e.counts.kingman_mutation << ',' << e.counts.asg << '\n';
    }
  }
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

int run_moments(const Cli& c, const RunOptions& opts) {
  const MomentTable tab = asg_step_moments(c.params(), c.nmax, c.kmax, c.nmin);
  const std::filesystem::path path = std::filesystem::path(c.out_dir) / "moments.csv";
  std::ofstream os(path);
  os << "# schema=moments-v1 config_hash=" << opts.config_hash << "\n";
  tab.write_csv(os);
  std::cout << "wrote " << path.string() << "\n";

  // oracle cross-check at the dense-solve scale
  const std::int64_t check_top = std::min<std::int64_t>(c.nmax, 60);
  McReport rep;
  rep.config_hash = opts.config_hash;
  rep.master_seed = opts.seed;
  const MomentTable steps =
      asg_step_moments(c.params(), check_top, c.kmax, 2, BoundaryPolicy::reflecting);
  const MomentTable oracle = absorption_moment_oracle(2, check_top, c.params(), c.kmax);
  double worst = 0.0;
  for (std::int64_t n = 2; n <= check_top; ++n) {
    const std::vector<double> composed = compose_step_moments(steps, 2, n, c.kmax);
    for (int k = 1; k <= c.kmax; ++k)
      worst = std::max(worst, std::fabs(composed[k] - oracle.at(n, k)) / oracle.at(n, k));
  }
  McRow r;
  r.experiment = "moments";
  r.statistic = "oracle_max_rel_dev";
  r.estimate = worst;
  r.target = 1e-8;
  r.tag = "derived";
  rep.rows.push_back(r);
  write_report(c, rep, "moments_check");
  return 0;
}

int dispatch(const Cli& c) {
  RunOptions opts;
  opts.seed = c.seed;
  opts.threads = c.threads;
  opts.config_hash = fnv1a_hex(canonical_config(c));
  std::filesystem::create_directories(c.out_dir);
  write_config_resolved(c, opts.config_hash);

  if (c.subcommand == "simulate") return run_simulate(c, opts);
  if (c.subcommand == "moments") return run_moments(c, opts);
  if (c.subcommand == "cdi") {
    const std::vector<double> ts =
        c.t_grid.empty() ? std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4} : c.t_grid;
    write_report(c, cdi_campaign(c.params(), ts, opts), "cdi");
    return 0;
  }
  if (c.subcommand == "supdev") {
    const std::vector<double> ts =
        c.t_grid.empty() ? std::vector<double>{0.2, 0.1, 0.05, 0.02} : c.t_grid;
    write_report(c, sup_deviation_campaign(c.params(), ts, c.k, c.n0, c.replicates_path, opts),
                 "supdev");
    return 0;
  }
  if (c.subcommand == "clt") {
    CltConfig cfg;
    cfg.params = c.params();
    if (!c.eps_list.empty()) cfg.eps_list = c.eps_list;
    if (!c.t_grid.empty()) cfg.t_grid = c.t_grid;
    cfg.replicates_marginal = c.replicates;
    cfg.replicates_path = c.replicates_path;
    cfg.n0 = c.n0;
    cfg.truncation_margin = c.margin;
    cfg.prephase_mult = c.prephase_mult;
    write_report(c, clt_campaign(cfg, opts), "clt");
    return 0;
  }
  if (c.subcommand == "coupling-check") {
    write_report(c, coupling_audit(c.params(), c.n0, c.trajectories, opts), "coupling_check");
    return 0;
  }
  std::cerr << "unknown subcommand\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  CLI::App app{"coupled coalescent / selection-graph simulation and verification toolkit"};
  app.require_subcommand(1);

  const char* env_out = std::getenv("ASGLAB_OUT");
  cli.out_dir = env_out ? env_out : ".";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--theta", cli.theta, "mutation rate theta >= 0");
    sub->add_option("--sigma", cli.sigma, "selection rate sigma >= 0");
    sub->add_option("--n0", cli.n0, "start level (truncation of infinity)");
    sub->add_option("--nmax", cli.nmax, "top level of analytic truncations");
    sub->add_option("--replicates", cli.replicates, "Monte Carlo replicates");
    sub->add_option("--seed", cli.seed, "master seed");
    sub->add_option("--threads", cli.threads, "worker threads (0 = all cores)");
    sub->add_option("--t-grid", cli.t_grid, "time grid");
    sub->add_option("--eps-list", cli.eps_list, "epsilon list (decreasing)");
    sub->add_option("--out", cli.out_dir, "output directory (default $ASGLAB_OUT or .)");
    sub->add_option("--format", cli.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* sim = app.add_subcommand("simulate", "sample coupled trajectories to CSV");
  add_common(sim);
  sim->add_option("--trajectories", cli.trajectories, "number of trajectories");
  sim->add_option("--level", cli.level, "stop level (all coordinates)");
  sim->add_option("--horizon", cli.horizon, "stop time (overrides --level)");

  CLI::App* mom = app.add_subcommand("moments", "hitting-time moment tables + oracle check");
  add_common(mom);
  mom->add_option("--kmax", cli.kmax, "highest moment order");
  mom->add_option("--nmin", cli.nmin, "lowest level");

  CLI::App* cdi = app.add_subcommand("cdi", "speed of coming down from infinity");
  add_common(cdi);

  CLI::App* sup = app.add_subcommand("supdev", "sup-deviation moment campaign");
  add_common(sup);
  sup->add_option("--k", cli.k, "moment order of the sup");
  sup->add_option("--replicates-path", cli.replicates_path, "replicates");

  CLI::App* clt = app.add_subcommand("clt", "functional CLT campaign");
  add_common(clt);
  clt->add_option("--replicates-path", cli.replicates_path, "path-functional replicates");
  clt->add_option("--margin", cli.margin, "truncation margin before the first grid time");
  clt->add_option("--prephase-mult", cli.prephase_mult,
                  "2 = run the truncation-sensitivity prephase");

  CLI::App* audit = app.add_subcommand("coupling-check", "pathwise coupling-order audit");
  add_common(audit);
  audit->add_option("--trajectories", cli.trajectories, "number of trajectories");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // invalid configuration
  }
  cli.subcommand = app.get_subcommands().front()->get_name();

  try {
    return dispatch(cli);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return 1;
  }
}
