#include "topk/commands.hpp"

#include "topk/baseline.hpp"
#include "topk/config.hpp"
#include "topk/error.hpp"
#include "topk/output.hpp"
#include "topk/simulator.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>

namespace topk {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ExitCode guarded(std::ostream& err, const std::function<ExitCode()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return ExitCode::config_error;
  } catch (const ScheduleError& e) {
    err << "schedule error: " << e.what() << '\n';
    return ExitCode::constraint_violation;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << '\n';
    return ExitCode::divergence;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return ExitCode::io_failure;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return ExitCode::io_failure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::config_error;
  }
}

void apply(const RunOverrides& o, ExperimentConfig& cfg) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.replications) cfg.replications = *o.replications;
  if (o.iterations) cfg.iterations = *o.iterations;
  if (o.sigma2) {
    cfg.noise = *o.sigma2 == 0.0 ? NoiseModel::noiseless() : NoiseModel::gaussian(*o.sigma2);
  }
  if (o.k && o.p) {
    throw ConfigError("--k and --p are mutually exclusive");
  }
  if (o.k) cfg.target = Target::top(*o.k);
  if (o.p) cfg.target = Target::level(*o.p);
  if (o.output) cfg.output_dir = *o.output;
  if (o.allow_unsafe_schedule) cfg.allow_unsafe_schedule = true;
}

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  return out;
}

void close_checked(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

json one_based(const std::vector<std::size_t>& ids) {
  json a = json::array();
  for (auto i : ids) {
    a.push_back(i + 1);
  }
  return a;
}

json make_manifest(const ExperimentConfig& cfg, const PreparedSim& sim, const MonteCarloResult& mc) {
  json stable = json::array();
  json aborted = json::array();
  for (const auto& r : mc.replications) {
    stable.push_back(r.stable_from ? json(*r.stable_from) : json(nullptr));
    if (r.aborted) {
      aborted.push_back({{"replication", r.replication}, {"diagnostic", r.diagnostic}});
    }
  }
  return json{
      {"software", {{"name", "topksim"}, {"version", kVersion}}},
      {"config_format", kConfigFormat},
      {"config", to_json(cfg)},
      {"lambda2", sim.spectral.lambda2},
      {"lambdaN", sim.spectral.lambdaN},
      {"beta0_bound", beta0_bound(sim.spectral)},
      {"beta0", *sim.schedule.beta0},
      {"p", sim.p},
      {"theta_p", sim.theta},
      {"true_topk", one_based(sim.true_topk)},
      {"replications_completed", mc.aggregate.completed},
      {"replications_aborted", mc.aggregate.aborted},
      {"aborted", aborted},
      {"decision_stable_from", stable},
      {"files",
       {{"aggregate", "aggregate.csv"},
        {"replications", "replications/replication_NNNN.csv"},
        {"resolved_config", "resolved_config.json"}}},
  };
}

void write_outputs(const fs::path& dir, const ExperimentConfig& cfg, const PreparedSim& sim,
                   const MonteCarloResult& mc) {
  fs::create_directories(dir / "replications");
  {
    const auto path = dir / "aggregate.csv";
    auto out = open_for_write(path);
    write_aggregate_csv(out, mc.aggregate);
    close_checked(out, path);
  }
  for (const auto& run : mc.replications) {
    char name[64];
    std::snprintf(name, sizeof name, "replication_%04zu.csv", run.replication);
    const auto path = dir / "replications" / name;
    auto out = open_for_write(path);
    write_replication_csv(out, run);
    close_checked(out, path);
  }
  {
    const auto path = dir / "manifest.json";
    auto out = open_for_write(path);
    out << make_manifest(cfg, sim, mc).dump(2) << '\n';
    close_checked(out, path);
  }
  {
    const auto path = dir / "resolved_config.json";
    auto out = open_for_write(path);
    out << to_json(cfg).dump(2) << '\n';
    close_checked(out, path);
  }
}

} // namespace

ExitCode cmd_run(const fs::path& config, const RunOverrides& overrides, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    ExperimentConfig cfg = load_config(config);
    apply(overrides, cfg);
    const PreparedSim sim = prepare(to_sim_config(cfg));
    const MonteCarloResult mc = run_monte_carlo(sim, overrides.jobs);
    write_outputs(cfg.output_dir, cfg, sim, mc);

    out << "theta_p = " << format_short(sim.theta) << "  (p = " << format_short(sim.p) << ")\n"
        << "lambda2 = " << format_short(sim.spectral.lambda2)
        << ", lambdaN = " << format_short(sim.spectral.lambdaN)
        << ", beta0 = " << format_short(*sim.schedule.beta0) << '\n'
        << "replications: " << mc.aggregate.completed << " completed, " << mc.aggregate.aborted
        << " aborted\n";
    if (!mc.aggregate.rows.empty()) {
      const auto& last = mc.aggregate.rows.back();
      out << "t = " << last.t << ": mean_error = " << format_short(last.mean_error)
          << ", max_error = " << format_short(last.max_error)
          << ", frac_topk_correct = " << format_short(last.frac_topk_correct) << '\n';
    }
    out << "wrote " << cfg.output_dir.string() << '\n';
    if (mc.aggregate.aborted > 0) {
      for (const auto& r : mc.replications) {
        if (r.aborted) {
          err << "replication " << r.replication << " aborted: " << r.diagnostic << '\n';
        }
      }
      return ExitCode::divergence;
    }
    return ExitCode::ok;
  });
}

ExitCode cmd_quantile(const fs::path& data_file, std::optional<std::size_t> k,
                      std::optional<double> p, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (k.has_value() == p.has_value()) {
      throw ConfigError("give exactly one of --k or --p");
    }
    const Dataset data(read_data_file(data_file));
    const std::size_t n = data.size();
    const double level = k ? p_interval_for_k(n, *k).mid : QuantileParam(*p, n).p();
    const std::size_t kk = k ? *k : k_for_p(n, level);
    const PInterval interval = p_interval_for_k(n, kk);
    const double theta = sample_quantile(data, QuantileParam(level, n));

    out << "n = " << n << '\n'
        << "k = " << kk << '\n'
        << "p = " << format_short(level) << '\n'
        << "p_interval = (" << format_short(interval.lo) << ", " << format_short(interval.hi)
        << ")\n"
        << "theta_p = " << format_short(theta) << '\n'
        << "topk_agents =";
    for (auto i : agents_at_or_above(data, theta)) {
      out << ' ' << i + 1;
    }
    out << '\n';
    return ExitCode::ok;
  });
}

ExitCode cmd_baseline(const fs::path& config, const RunOverrides& overrides, std::ostream& out,
                      std::ostream& err) {
  return guarded(err, [&] {
    ExperimentConfig cfg = load_config(config);
    apply(overrides, cfg);
    if (cfg.noise.kind != NoiseKind::none && cfg.noise.sigma2 > 0.0) {
      throw ConfigError(
          "the list-gossip baseline only works over noiseless links (noise.sigma2 = " +
          format_short(cfg.noise.sigma2) +
          "); any perturbation of a forwarded value is never corrected");
    }
    const Graph g = build_graph(cfg);
    const Dataset data(cfg.data);
    const std::size_t n = data.size();
    const std::size_t k =
        cfg.target.k ? *cfg.target.k : k_for_p(n, QuantileParam(*cfg.target.p, n).p());
    const BaselineResult res = run_baseline(g, data, k);
    const BaselineCost quantile = quantile_algorithm_cost(g, res.rounds_to_converge);

    out << "rounds_to_converge = " << res.rounds_to_converge << '\n'
        << "diameter = " << diameter(g) << '\n'
        << "topk_agents =";
    for (const auto& e : res.lists.front()) {
      out << ' ' << e.origin + 1;
    }
    out << "\n\n";
    out << std::left << std::setw(22) << "scheme" << std::setw(22) << "reals/link/round"
        << std::setw(22) << "memory/agent" << "reals over " << res.rounds_to_converge
        << " rounds\n";
    out << std::setw(22) << "list gossip" << std::setw(22) << res.cost.reals_per_link_round
        << std::setw(22) << res.cost.memory_slots_per_agent << res.cost.reals_transmitted << '\n';
    out << std::setw(22) << "quantile consensus" << std::setw(22) << quantile.reals_per_link_round
        << std::setw(22) << quantile.memory_slots_per_agent << quantile.reals_transmitted << '\n';
    return ExitCode::ok;
  });
}

} // namespace topk
