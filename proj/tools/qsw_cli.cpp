// Command-line front end: one subcommand per experiment, CSV data files
// plus a JSON sidecar describing the run.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsw/error.hpp"
#include "qsw/exact_evolution.hpp"
#include "qsw/fourier.hpp"
#include "qsw/io.hpp"
#include "qsw/limit_law.hpp"
#include "qsw/poisson.hpp"
#include "qsw/spectral.hpp"
#include "qsw/trajectory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qsw;

namespace {

struct Common {
  std::string coin = "hadamard";
  std::string out_dir;
  std::string name;
  std::string format = "csv";
  int threads = 1;
};

struct SimulateOpts {
  double p = -1.0;
  int t = -1;
  std::string engine = "auto";
  std::uint64_t n_traj = 100000;
  std::uint64_t seed = 1;
};

struct LimitOpts {
  double p = -1.0;
  std::vector<int> t{100};
  int n_l = kDefaultLimitNodes;
};

struct SpectralOpts {
  std::vector<double> p{0.2, 0.5, 0.8};
  std::vector<double> k{0.3, 0.7, 1.1, 2.3};
  std::vector<double> xi{0.5, 1.0, 2.0};
  std::vector<double> eps;
  int eps_count = 6;
};

struct PoissonOpts {
  double gamma = -1.0;
  std::vector<int> s;
  std::string xi = "-10:10:201";
  std::string engine = "auto";
  std::uint64_t n_traj = 100000;
  std::uint64_t seed = 1;
  int n_k = kDefaultPoissonNodes;
  int exact_cap = kDefaultExactCap;
  bool dispersion = false;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_name) {
  c.name = default_name;
  cmd->add_option("--coin", c.coin, "'hadamard' or re(a),im(a),re(b),im(b),re(c),im(c),re(d),im(d)")
      ->capture_default_str();
  cmd->add_option("--out-dir", c.out_dir, std::string("output directory (default: $") + kOutputDirEnv + " or .)");
  cmd->add_option("--name", c.name, "file name stem")->capture_default_str();
  cmd->add_option("--format", c.format, "data file format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

Engine parse_engine(const std::string& s) {
  if (s == "exact") return Engine::Exact;
  if (s == "mc") return Engine::MonteCarlo;
  return Engine::Auto;
}

const char* engine_name(Engine e) {
  switch (e) {
    case Engine::Exact:
      return "exact";
    case Engine::MonteCarlo:
      return "mc";
    default:
      return "auto";
  }
}

json coin_json(const Coin& c) {
  auto z = [](Complex v) { return json::array({v.real(), v.imag()}); };
  return {{"a", z(c.a)}, {"b", z(c.b)}, {"c", z(c.c)}, {"d", z(c.d)}};
}

// Writes data files and the sidecar into one directory.
class Output {
 public:
  Output(const Common& c, std::string command)
      : dir_(c.out_dir.empty() ? default_output_dir() : fs::path(c.out_dir)),
        stem_(c.name),
        json_(c.format == "json"),
        command_(std::move(command)),
        start_(std::chrono::steady_clock::now()) {}

  void table(const std::string& suffix, const CsvTable& t) {
    const fs::path p = dir_ / (stem_ + suffix + (json_ ? ".json" : ".csv"));
    if (json_) {
      json rows = json::array();
      for (const auto& r : t.rows) {
        json rec = json::object();
        for (std::size_t i = 0; i < t.header.size(); ++i) rec[t.header[i]] = std::stod(r[i]);
        rows.push_back(std::move(rec));
      }
      write_json(p, rows);
    } else {
      write_csv(p, t);
    }
    files_.push_back(p.filename().string());
  }

  void finish(json config, json results) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json doc{{"command", command_},       {"config", std::move(config)},
             {"results", std::move(results)}, {"outputs", files_},
             {"versions", version_info()}, {"wall_clock_seconds", secs}};
    write_json(dir_ / (stem_ + ".meta.json"), doc);
  }

 private:
  fs::path dir_;
  std::string stem_;
  bool json_;
  std::string command_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> files_;
};

json base_config(const Common& c, const Coin& coin) {
  return {{"coin", c.coin}, {"coin_entries", coin_json(coin)}, {"threads", c.threads}, {"format", c.format}};
}

int cmd_simulate(const Common& c, const SimulateOpts& o, bool mc_flags_given) {
  const Coin coin = parse_coin(c.coin);
  const WalkParams params(coin, o.p);
  Engine engine = parse_engine(o.engine);
  if (engine == Engine::Auto) engine = o.t <= kDefaultExactCap ? Engine::Exact : Engine::MonteCarlo;
  if (engine == Engine::Exact && mc_flags_given)
    throw Error(ErrorKind::Config, "--n-traj and --seed apply only to the Monte-Carlo engine");

  Output out(c, "simulate");
  json config = base_config(c, coin);
  config["p"] = o.p;
  config["t"] = o.t;
  config["mode"] = engine_name(engine);
  json results;
  if (engine == Engine::Exact) {
    EvolveOptions eo;
    eo.threads = c.threads;
    eo.max_steps = std::max(o.t, kDefaultExactCap);
    const Distribution d = evolve(params, o.t, eo);
    out.table("", distribution_table(d));
    results["total"] = d.total();
  } else {
    McConfig mc;
    mc.t = o.t;
    mc.n_traj = o.n_traj;
    mc.seed = o.seed;
    mc.threads = c.threads;
    config["seed"] = o.seed;
    config["n_traj"] = o.n_traj;
    const McResult r = mc_distribution(params, mc);
    out.table("", distribution_table(r.dist, r.std_error));
    results["total"] = r.dist.total();
  }
  out.finish(config, results);
  return 0;
}

int cmd_limit(const Common& c, const LimitOpts& o) {
  const Coin coin = parse_coin(c.coin);
  const WalkParams params(coin, o.p);
  const ArcsineMixture mix = mixture_for(params);
  Output out(c, "limit");
  json config = base_config(c, coin);
  config["p"] = o.p;
  config["t"] = o.t;
  config["mode"] = "exact";
  config["n_l"] = o.n_l;

  std::vector<KsRow> ks;
  for (int t : o.t) {
    EvolveOptions eo;
    eo.threads = c.threads;
    eo.max_steps = std::max(t, kDefaultExactCap);
    const Distribution d = evolve(params, t, eo);
    const StepDensity f = step_density(d);
    out.table("_t" + std::to_string(t), overlay_table(f, mix));
    ks.push_back({t, o.p, ks_distance(f, mix, o.n_l)});
    std::cout << "t=" << t << " p=" << o.p << " ks=" << ks.back().ks << "\n";
  }
  out.table("_ks", ks_table(ks));
  json results{{"A", mix.A}, {"B", mix.B}, {"limit_variance", limit_variance(mix, o.n_l)}};
  json ks_json = json::array();
  for (const auto& r : ks) ks_json.push_back({{"t", r.t}, {"ks", r.ks}});
  results["ks"] = ks_json;
  out.finish(config, results);
  return 0;
}

int cmd_spectral(const Common& c, const SpectralOpts& o) {
  const Coin coin = parse_coin(c.coin);
  const std::vector<double> ladder = o.eps.empty() ? default_eps_ladder(o.eps_count) : o.eps;
  Output out(c, "spectral");
  json config = base_config(c, coin);
  config["p"] = o.p;
  config["k"] = o.k;
  config["xi"] = o.xi;
  config["eps"] = ladder;

  std::vector<PerturbationReport> reports;
  json checks = json::array();
  json skipped = json::array();
  for (double p : o.p) {
    const WalkParams params(coin, p);
    for (double k : o.k) {
      const UnperturbedSpectrum s = check_unperturbed(params, k);  // throws LemmaViolation
      checks.push_back({{"p", p},
                        {"k", k},
                        {"eigvec_residual", s.eigvec_residual},
                        {"gap", s.gap},
                        {"max_other_modulus", s.max_other_modulus},
                        {"max_modulus_defect", s.max_modulus_defect}});
      if (p == 0.0) continue;  // the second-order coefficient needs p > 0
      for (double xi : o.xi) {
        PerturbationReport r = perturbation_report(params, k, xi, ladder);
        if (r.skipped) {
          skipped.push_back({{"p", p}, {"k", k}, {"xi", xi}});
          continue;
        }
        reports.push_back(std::move(r));
      }
    }
  }
  out.table("", perturbation_table(reports));
  json orders = json::array();
  for (const auto& r : reports)
    orders.push_back({{"p", r.p},
                      {"k", r.k},
                      {"xi", r.xi},
                      {"richardson_order", std::isfinite(r.richardson_order) ? json(r.richardson_order) : json()},
                      {"fit_residual", std::isfinite(r.fit_residual) ? json(r.fit_residual) : json()},
                      {"richardson_order_fixed_l",
                       std::isfinite(r.richardson_order_fixed) ? json(r.richardson_order_fixed) : json()}});
  out.finish(config, {{"unperturbed", checks}, {"orders", orders}, {"skipped_small_gap", skipped}});
  return 0;
}

int cmd_poisson(const Common& c, const PoissonOpts& o, bool mc_flags_given) {
  const Coin coin = parse_coin(c.coin);
  const std::vector<double> xi = parse_grid(o.xi);
  CompareOptions co;
  co.engine = parse_engine(o.engine);
  co.exact_cap = o.exact_cap;
  co.n_traj = o.n_traj;
  co.seed = o.seed;
  co.threads = c.threads;
  co.n_k = o.n_k;
  if (co.engine == Engine::Exact && mc_flags_given)
    throw Error(ErrorKind::Config, "--n-traj and --seed apply only to the Monte-Carlo engine");

  Output out(c, "poisson");
  json config = base_config(c, coin);
  config["gamma"] = o.gamma;
  config["s"] = o.s;
  config["xi"] = o.xi;
  config["n_k"] = o.n_k;
  config["mode"] = engine_name(co.engine);
  config["exact_cap"] = o.exact_cap;
  config["seed"] = o.seed;
  config["n_traj"] = o.n_traj;

  json results = json::object();
  if (o.dispersion) {
    std::vector<Dispersion> rows;
    for (int j = 0; j < o.n_k; ++j) rows.push_back(dispersion(coin, 2.0 * M_PI * j / o.n_k));
    out.table("_dispersion", dispersion_table(rows));
  }
  if (o.s.empty()) {
    std::vector<Complex> values;
    for (double x : xi) values.emplace_back(prop3_char_fn(coin, o.gamma, x, o.n_k), 0.0);
    out.table("_char_fn", char_fn_table(xi, values));
  } else {
    json runs = json::array();
    for (const CompareRun& run : compare_sim(coin, o.gamma, o.s, xi, co)) {
      const std::string tag = "_s" + std::to_string(run.s);
      out.table(tag, compare_table(run));
      out.table(tag + "_dist", distribution_table(run.dist));
      const Protrusion pr = detect_protrusion(run.dist);
      std::cout << "s=" << run.s << " p=" << run.p << " engine=" << engine_name(run.engine)
                << " sup_diff=" << run.sup_diff << " protrusion=" << (pr.present ? "yes" : "no") << "\n";
      runs.push_back({{"s", run.s},
                      {"p", run.p},
                      {"engine", engine_name(run.engine)},
                      {"sup_diff", run.sup_diff},
                      {"protrusion",
                       {{"present", pr.present}, {"peak_x", pr.peak_x}, {"peak", pr.peak}, {"trough_x", pr.trough_x},
                        {"trough", pr.trough}}}});
    }
    results["runs"] = runs;
  }
  out.finish(config, results);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpolating random walk / quantum walk laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QSW_CLI_VERSION);

  Common sim_c, lim_c, spec_c, poi_c;
  SimulateOpts sim;
  LimitOpts lim;
  SpectralOpts spec;
  PoissonOpts poi;

  auto* simulate = app.add_subcommand("simulate", "finding probabilities mu_t(x) for one (coin, p, t)");
  add_common(simulate, sim_c, "distribution");
  simulate->add_option("--p", sim.p, "decoherence probability")->required()->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--t", sim.t, "number of steps")->required()->check(CLI::NonNegativeNumber);
  simulate->add_option("--engine", sim.engine, "exact, mc, or auto (exact for t <= 512)")
      ->check(CLI::IsMember({"auto", "exact", "mc"}))
      ->capture_default_str();
  auto* sim_ntraj = simulate->add_option("--n-traj", sim.n_traj, "Monte-Carlo trajectories")->check(CLI::PositiveNumber);
  auto* sim_seed = simulate->add_option("--seed", sim.seed, "Monte-Carlo master seed");

  auto* limit = app.add_subcommand("limit", "step density f_t against the limit density f_* and KS distances");
  add_common(limit, lim_c, "limit");
  limit->add_option("--p", lim.p, "decoherence probability, 0 < p < 1")->required();
  limit->add_option("--t", lim.t, "step counts (repeatable)")->capture_default_str();
  limit->add_option("--n-l", lim.n_l, "trapezoid nodes for f_* and F_*")->capture_default_str();

  auto* spectral = app.add_subcommand("spectral", "spectrum of T and the second-order eigenvalue splitting");
  add_common(spectral, spec_c, "perturbation");
  spectral->add_option("--p", spec.p, "decoherence probabilities")->capture_default_str();
  spectral->add_option("--k", spec.k, "momenta")->capture_default_str();
  spectral->add_option("--xi", spec.xi, "xi values")->capture_default_str();
  spectral->add_option("--eps", spec.eps, "explicit eps ladder (overrides --eps-count)");
  spectral->add_option("--eps-count", spec.eps_count, "length of the ladder 1e-2 * 2^-j")->capture_default_str();

  auto* poisson = app.add_subcommand("poisson", "p = gamma / s: closed-form characteristic function vs simulation");
  add_common(poisson, poi_c, "poisson");
  poisson->add_option("--gamma", poi.gamma, "event rate gamma >= 0")->required()->check(CLI::NonNegativeNumber);
  poisson->add_option("--s", poi.s, "final times to simulate (omit for the closed form only)");
  poisson->add_option("--xi", poi.xi, "xi grid start:stop:count")->capture_default_str();
  poisson->add_option("--engine", poi.engine, "exact, mc, or auto")
      ->check(CLI::IsMember({"auto", "exact", "mc"}))
      ->capture_default_str();
  auto* poi_ntraj = poisson->add_option("--n-traj", poi.n_traj, "Monte-Carlo trajectories")->check(CLI::PositiveNumber);
  auto* poi_seed = poisson->add_option("--seed", poi.seed, "Monte-Carlo master seed");
  poisson->add_option("--n-k", poi.n_k, "quadrature nodes in k")->capture_default_str();
  poisson->add_option("--exact-cap", poi.exact_cap, "auto engine uses exact evolution up to this s")
      ->capture_default_str();
  poisson->add_flag("--dispersion", poi.dispersion, "also write theta, alpha, beta on the k grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*simulate) return cmd_simulate(sim_c, sim, sim_ntraj->count() + sim_seed->count() > 0);
    if (*limit) return cmd_limit(lim_c, lim);
    if (*spectral) return cmd_spectral(spec_c, spec);
    if (*poisson) return cmd_poisson(poi_c, poi, poi_ntraj->count() + poi_seed->count() > 0);
  } catch (const Error& e) {
    std::cerr << "qsw: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "qsw: internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
