#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "adn/criteria.hpp"
#include "adn/dot.hpp"
#include "adn/harness.hpp"
#include "adn/history.hpp"
#include "adn/io.hpp"
#include "adn/simulate.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kConfigError = 2;

struct FamilyOptions {
  std::string family = "random";
  adn::ExperimentConfig config;
  int leaders = -1;
};

void add_family_options(CLI::App* app, FamilyOptions& o) {
  app->add_option("--family", o.family, "random | scale | leader-ring | marked-cycle | file")
      ->capture_default_str();
  app->add_option("--n", o.config.n, "processes (random)")->capture_default_str();
  app->add_option("--T", o.config.T, "dynamic disconnectivity (random, file)")->capture_default_str();
  app->add_option("--blocks", o.config.blocks, "blocks of T rounds (random; 0 = fit horizon)");
  app->add_option("--seed", o.config.seed, "seed (random)")->capture_default_str();
  app->add_option("--sizes", o.config.sizes, "part sizes (scale)")->delimiter(',');
  app->add_option("--alpha", o.config.alpha, "copies (scale)")->capture_default_str();
  app->add_option("--k", o.config.k, "spacing (leader-ring)")->capture_default_str();
  app->add_option("--i", o.config.i, "leaders (leader-ring)")->capture_default_str();
  app->add_option("--t", o.config.t, "cycle parameter (marked-cycle)")->capture_default_str();
  app->add_option("--leaders", o.leaders, "leaders to place (random) or declared count");
}

void finish_family(FamilyOptions& o) {
  o.config.family = adn::parse_family(o.family);
  if (o.leaders >= 0) o.config.leaders = o.leaders;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw adn::ConfigError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and verifier for algorithms on anonymous dynamic networks"};
  app.require_subcommand(1);

  // gen-schedule
  FamilyOptions gen;
  int gen_rounds = 0;
  std::string gen_out = "-";
  std::string gen_inputs_out;
  auto* gen_cmd = app.add_subcommand("gen-schedule", "Generate a schedule and inputs as JSON");
  add_family_options(gen_cmd, gen);
  gen_cmd->add_option("--rounds", gen_rounds, "rounds (default: blocks * T, or 15)");
  gen_cmd->add_option("--out", gen_out, "schedule file ('-' for stdout)");
  gen_cmd->add_option("--inputs-out", gen_inputs_out, "inputs file");

  // simulate
  FamilyOptions sim;
  std::string task = "concentration";
  std::string mode = "stabilizing";
  int N = -1;
  auto* sim_cmd = app.add_subcommand("simulate", "Run one experiment and print its report");
  add_family_options(sim_cmd, sim);
  sim_cmd->add_option("--schedule", sim.config.schedule_path, "schedule file (file family)");
  sim_cmd->add_option("--inputs", sim.config.inputs_path, "inputs file (file family)");
  sim_cmd->add_option("--task", task, "concentration | average | gc-count")->capture_default_str();
  sim_cmd->add_option("--mode", mode, "stabilizing | terminating")->capture_default_str();
  sim_cmd->add_option("--N", N, "known upper bound on n (terminating concentration)");
  sim_cmd->add_option("--horizon", sim.config.horizon, "rounds to run (0 = bound + Tn)");
  sim_cmd->add_option("--trace", sim.config.trace_path, "JSONL trace file");
  sim_cmd->add_option("--report", sim.config.report_path, "JSON report file");

  // export-dot
  std::string dot_schedule;
  std::string dot_inputs;
  int dot_round = 0;
  int dot_process = 0;
  std::string dot_out = "-";
  auto* dot_cmd = app.add_subcommand("export-dot", "Render a view or the history tree as DOT");
  dot_cmd->add_option("--schedule", dot_schedule, "schedule file")->required();
  dot_cmd->add_option("--inputs", dot_inputs, "inputs file")->required();
  dot_cmd->add_option("--round", dot_round, "round")->capture_default_str();
  dot_cmd->add_option("--process", dot_process, "process whose view to render (0: history tree)")
      ->capture_default_str();
  dot_cmd->add_option("--out", dot_out, "output file ('-' for stdout)");

  // verify
  int max_n = 6;
  int max_T = 2;
  int max_leaders = 2;
  int trials = 20;
  std::uint64_t seed = 0;
  int jobs = adn::default_jobs();
  std::string verify_report;
  auto* verify_cmd = app.add_subcommand("verify", "Run the invariant battery over random sweeps");
  verify_cmd->add_option("--max-n", max_n)->capture_default_str();
  verify_cmd->add_option("--max-T", max_T)->capture_default_str();
  verify_cmd->add_option("--max-leaders", max_leaders)->capture_default_str();
  verify_cmd->add_option("--trials", trials)->capture_default_str();
  verify_cmd->add_option("--seed", seed)->capture_default_str();
  verify_cmd->add_option("--jobs", jobs, "parallel workers (default: ADN_JOBS or all cores)");
  verify_cmd->add_option("--report", verify_report, "JSON summary file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*gen_cmd) {
      finish_family(gen);
      const int rounds = gen_rounds > 0 ? gen_rounds
                         : gen.config.family == adn::Family::Random && gen.config.blocks > 0
                             ? gen.config.blocks * gen.config.T
                             : 15;
      if (gen.config.family == adn::Family::Random && gen.config.blocks == 0) {
        gen.config.blocks = (rounds + gen.config.T - 1) / gen.config.T;
      }
      const adn::Network net = adn::build_network(gen.config, rounds);
      write_text(gen_out, adn::schedule_to_json(net.schedule).dump(1) + "\n");
      if (!gen_inputs_out.empty()) {
        write_text(gen_inputs_out, adn::inputs_to_json(net.inputs).dump(1) + "\n");
      }
      return kOk;
    }

    if (*sim_cmd) {
      finish_family(sim);
      sim.config.task = adn::parse_task(task);
      sim.config.mode = adn::parse_mode(mode);
      if (N >= 0) sim.config.N = N;
      const auto report = adn::run_experiment(sim.config);
      std::cout << report.to_json().dump(2) << "\n";
      if (report.status == "ok") return kOk;
      return report.status == "violation" ? kViolation : kConfigError;
    }

    if (*dot_cmd) {
      adn::Schedule schedule;
      adn::InputAssignment inputs;
      try {
        schedule = adn::schedule_from_json(adn::read_json_file(dot_schedule));
        inputs = adn::inputs_from_json(adn::read_json_file(dot_inputs));
      } catch (const std::exception& e) {
        throw adn::ConfigError(e.what());
      }
      if (dot_round < 0) throw adn::ConfigError("round must be non-negative");
      if (dot_process < 0 || dot_process > schedule.n) throw adn::ConfigError("no such process");
      if (static_cast<int>(inputs.size()) != schedule.n) {
        throw adn::ConfigError("inputs file does not match the schedule's n");
      }
      if (dot_process == 0) {
        write_text(dot_out, adn::tree_to_dot(adn::build_ground_truth(schedule, inputs, dot_round)));
      } else {
        adn::Simulator s(schedule, inputs);
        while (s.round() < dot_round) s.step();
        write_text(dot_out, adn::view_to_dot(s.view(dot_process),
                                             "p" + std::to_string(dot_process)));
      }
      return kOk;
    }

    if (*verify_cmd) {
      if (max_n < 1 || max_T < 1 || max_leaders < 0 || trials < 0 || jobs < 1) {
        throw adn::ConfigError("verify needs max-n, max-T, jobs >= 1");
      }
      const auto result = adn::verify_suite(max_n, max_T, max_leaders, trials, seed, jobs);
      for (const auto& [name, c] : result.tally.counts()) {
        const bool observation = name.rfind("obs.", 0) == 0;
        std::cout << (c.failed == 0 ? "ok    " : observation ? "note  " : "FAIL  ") << name
                  << "  " << c.checked
                  << " checked, " << c.failed << " failed";
        if (c.failed > 0) std::cout << "  first: " << c.first_failure;
        std::cout << "\n";
      }
      std::cout << (result.passed ? "all checks passed" : "violations found") << "\n";
      if (!verify_report.empty()) adn::write_json_file(verify_report, result.to_json());
      return result.passed ? kOk : kViolation;
    }
  } catch (const adn::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
  return kOk;
}
