// topksim: distributed top-k selection over noisy networks.
//
//   topksim run --config exp.json [--seed N] [--replications N] [--iterations N]
//               [--sigma2 X] [--k N | --p X] [--output DIR] [--jobs N]
//               [--allow-unsafe-schedule]
//   topksim quantile --data values.txt (--k N | --p X)
//   topksim baseline --config exp.json [--k N | --p X]

#include "topk/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

template <class T>
std::optional<T> opt_if(const CLI::Option* o, const T& v) {
  return o->count() > 0 ? std::optional<T>(v) : std::nullopt;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed top-k selection by two-time-scale quantile consensus"};
  app.set_version_flag("--version", std::string(topk::kVersion));
  app.require_subcommand(1);

  std::string config;
  std::string data;
  std::uint64_t seed = 0;
  std::size_t replications = 0;
  std::uint64_t iterations = 0;
  double sigma2 = 0.0;
  std::size_t k = 0;
  double p = 0.0;
  std::string output;
  unsigned jobs = 1;
  bool unsafe = false;

  auto* run = app.add_subcommand("run", "Run a Monte Carlo experiment and write CSV traces");
  run->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  auto* o_seed = run->add_option("--seed", seed, "Override run.seed");
  auto* o_reps = run->add_option("--replications", replications, "Override run.replications")
                     ->check(CLI::PositiveNumber);
  auto* o_iter = run->add_option("--iterations", iterations, "Override run.iterations")
                     ->check(CLI::PositiveNumber);
  auto* o_sigma = run->add_option("--sigma2", sigma2, "Gaussian link-noise variance (0 = noiseless)")
                      ->check(CLI::NonNegativeNumber);
  auto* o_k = run->add_option("--k", k, "Select the top-k agents");
  auto* o_p = run->add_option("--p", p, "Explicit quantile level")->excludes(o_k);
  auto* o_out = run->add_option("--output", output, "Output directory");
  run->add_option("--jobs", jobs, "Parallel replications (0 = all cores)");
  run->add_flag("--allow-unsafe-schedule", unsafe, "Skip step-size constraint checks");

  auto* quantile = app.add_subcommand("quantile", "Centralized quantile and top-k oracle");
  quantile->add_option("--data", data, "Data file, one value per agent")->required()->check(CLI::ExistingFile);
  auto* q_k = quantile->add_option("--k", k, "Top-k target");
  auto* q_p = quantile->add_option("--p", p, "Quantile level")->excludes(q_k);

  auto* baseline = app.add_subcommand("baseline", "Noiseless list-gossip baseline and cost table");
  baseline->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  auto* b_k = baseline->add_option("--k", k, "Override the target with top-k");
  auto* b_p = baseline->add_option("--p", p, "Override the target with a quantile level")->excludes(b_k);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(topk::ExitCode::usage);
  }

  topk::ExitCode rc = topk::ExitCode::ok;
  if (run->parsed()) {
    topk::RunOverrides o;
    o.seed = opt_if(o_seed, seed);
    o.replications = opt_if(o_reps, replications);
    o.iterations = opt_if(o_iter, iterations);
    o.sigma2 = opt_if(o_sigma, sigma2);
    o.k = opt_if(o_k, k);
    o.p = opt_if(o_p, p);
    if (o_out->count() > 0) {
      o.output = output;
    }
    o.jobs = jobs;
    o.allow_unsafe_schedule = unsafe;
    rc = topk::cmd_run(config, o, std::cout, std::cerr);
  } else if (quantile->parsed()) {
    rc = topk::cmd_quantile(data, opt_if(q_k, k), opt_if(q_p, p), std::cout, std::cerr);
  } else if (baseline->parsed()) {
    topk::RunOverrides o;
    o.k = opt_if(b_k, k);
    o.p = opt_if(b_p, p);
    rc = topk::cmd_baseline(config, o, std::cout, std::cerr);
  }
  return static_cast<int>(rc);
}
