// qnetsim: run seeded trials of a queueing network, or print M/M/c values.
//
//   qnetsim run --config net.json --trials 20 --seed 0 --max-time 800 --warmup 100
//   qnetsim mmc 10 4 3
//   qnetsim validate --config net.json

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qnet/mmc.hpp"
#include "qnet/network.hpp"
#include "qnet/records.hpp"
#include "qnet/trials.hpp"

namespace {

struct RunOptions {
  std::string config;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::optional<double> max_time;
  std::optional<std::uint64_t> max_customers;
  std::string mode = "finished";
  bool until_deadlock = false;
  double warmup = 0.0;
  std::size_t workers = 1;
  std::string summary;
  std::string records_dir;
};

int run(const RunOptions& opt) {
  const auto network = qnet::validate(qnet::load_config(opt.config));

  qnet::TrialPlan plan;
  plan.trials = opt.trials;
  plan.base_seed = opt.seed;
  plan.warmup = opt.warmup;
  plan.workers = opt.workers;
  if (opt.max_time) {
    plan.termination = qnet::MaxTime{*opt.max_time};
  } else if (opt.max_customers) {
    const auto mode = qnet::parse_customer_count(opt.mode);
    if (!mode) throw std::invalid_argument("unknown --mode \"" + opt.mode + "\"");
    plan.termination = qnet::MaxCustomers{*opt.max_customers, *mode};
  } else {
    plan.termination = qnet::UntilDeadlock{};
  }

  const auto report = qnet::run_trials(network, plan);
  const auto summary = qnet::report_to_json(report);
  if (opt.summary.empty()) {
    std::cout << summary;
  } else {
    const auto parent = std::filesystem::path(opt.summary).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(opt.summary, std::ios::binary | std::ios::trunc);
    out << summary;
    if (!out) throw std::runtime_error("cannot write summary to " + opt.summary);
  }
  if (!opt.records_dir.empty()) qnet::emit_records(report, opt.records_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete event simulation of open restricted queueing networks"};
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run_cmd = app.add_subcommand("run", "Run seeded trials of a network");
  run_cmd->add_option("--config", run_opt.config, "Network config (JSON)")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--trials", run_opt.trials, "Number of trials")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", run_opt.seed, "Base seed; trial k uses seed + k");
  auto* max_time = run_cmd->add_option("--max-time", run_opt.max_time, "Simulate until this time");
  auto* max_customers =
      run_cmd->add_option("--max-customers", run_opt.max_customers, "Simulate until this many customers");
  run_cmd->add_option("--mode", run_opt.mode, "Customer count for --max-customers")
      ->check(CLI::IsMember({"arrived", "accepted", "finished"}))
      ->needs(max_customers);
  auto* deadlock = run_cmd->add_flag("--until-deadlock", run_opt.until_deadlock, "Simulate until deadlock");
  max_time->excludes(max_customers)->excludes(deadlock);
  max_customers->excludes(deadlock);
  run_cmd->add_option("--warmup", run_opt.warmup, "Ignore records arriving at or before this time")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--workers", run_opt.workers, "Trials run in parallel")->check(CLI::PositiveNumber);
  run_cmd->add_option("--summary", run_opt.summary, "Write the JSON summary here instead of stdout");
  run_cmd->add_option("--records-dir", run_opt.records_dir, "Write records_seed<k>.csv files here");

  double lambda = 0.0;
  double mu = 0.0;
  std::size_t servers = 0;
  auto* mmc_cmd = app.add_subcommand("mmc", "Print M/M/c mean queueing time and waiting probability");
  mmc_cmd->add_option("lambda", lambda, "Arrival rate")->required();
  mmc_cmd->add_option("mu", mu, "Service rate per server")->required();
  mmc_cmd->add_option("c", servers, "Number of servers")->required();

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a network config");
  validate_cmd->add_option("--config", validate_path, "Network config (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      if (!run_opt.max_time && !run_opt.max_customers && !run_opt.until_deadlock) {
        std::cerr << "error: one of --max-time, --max-customers or --until-deadlock is required\n";
        return 2;
      }
      return run(run_opt);
    }
    if (mmc_cmd->parsed()) {
      const qnet::MMcParams params{lambda, mu, servers};
      const double p_wait = qnet::erlang_c(params);
      const double wq = qnet::mean_wait(params);
      std::cout << "Wq " << qnet::format_double(wq) << "\n"
                << "P(wait) " << qnet::format_double(p_wait) << "\n";
      return 0;
    }
    if (validate_cmd->parsed()) {
      const auto network = qnet::validate(qnet::load_config(validate_path));
      std::cout << "valid: " << network.number_of_nodes() << " node(s), " << network.number_of_classes()
                << " class(es)\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
