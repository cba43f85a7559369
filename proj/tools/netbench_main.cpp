#include "netbench/estimate.hpp"
#include "netbench/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using namespace netbench;

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::string out_dir = "out";
  int jobs = 1;
  // Overrides; negative / empty means "keep the config value".
  std::int64_t seed = -1;
  int sequences = -1;
  int shots = -1;
  std::string shot_model;
  std::string m_list;
};

std::vector<int> parse_m_list(const std::string& text) {
  std::vector<int> out;
  if (text.find(':') != std::string::npos) {
    int from = 0, to = 0, step = 1;
    const int n = std::sscanf(text.c_str(), "%d:%d:%d", &from, &to, &step);
    if (n < 2 || step <= 0 || to < from) throw CLI::ValidationError("--m-list", "expected from:to[:step]");
    for (int m = from; m <= to; m += step) out.push_back(m);
    return out;
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    out.push_back(std::stoi(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  if (out.empty()) throw CLI::ValidationError("--m-list", "empty list");
  return out;
}

ExperimentConfig resolve_config(const CommonOptions& opt) {
  ExperimentConfig config;
  if (!opt.config_path.empty()) {
    config = ExperimentConfig::load(opt.config_path);
  } else if (!opt.preset.empty()) {
    config = make_preset(opt.preset);
  } else {
    throw CLI::ValidationError("config", "provide --config or --preset");
  }
  if (opt.seed >= 0) config.protocol.master_seed = static_cast<std::uint64_t>(opt.seed);
  if (opt.sequences > 0) config.protocol.sequences_per_m = opt.sequences;
  if (opt.shots > 0) config.protocol.shots = opt.shots;
  if (!opt.shot_model.empty()) config.protocol.shot_model = parse_shot_model(opt.shot_model);
  if (!opt.m_list.empty()) config.protocol.m_values = parse_m_list(opt.m_list);
  return config;
}

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config_path, "experiment config (JSON)");
  cmd->add_option("--preset", opt.preset,
                  "built-in config: noiseless, depol-0.81, tele-ideal, paper-2node, paper-multinode");
  cmd->add_option("--out-dir", opt.out_dir, "output directory");
  cmd->add_option("--jobs", opt.jobs, "worker threads (never changes results)");
  cmd->add_option("--seed", opt.seed, "master seed override");
  cmd->add_option("--sequences", opt.sequences, "random sequences per bounce count");
  cmd->add_option("--shots", opt.shots, "measurements per sequence");
  cmd->add_option("--shot-model", opt.shot_model, "exact, gaussian or binomial");
  cmd->add_option("--m-list", opt.m_list, "bounce counts: from:to[:step] or comma list");
}

int cmd_run(const CommonOptions& opt) {
  const ExperimentConfig config = resolve_config(opt);
  const RunResult result = run_experiment(config, opt.jobs);
  write_run_outputs(result, opt.out_dir);
  std::printf("f      = %.6f  (95%% CI [%.6f, %.6f])\n", result.fit.f, result.fit.ci_f[0],
              result.fit.ci_f[1]);
  std::printf("A      = %.6f\n", result.fit.amplitude);
  std::printf("f_link = %.6f  F_avg = %.6f  (symmetric-link conversion)\n", result.link.f_link,
              result.link.f_avg);
  std::printf("outputs in %s (decay.csv, fit.json, summary.txt)\n", opt.out_dir.c_str());
  return 0;
}

int cmd_sweep(const CommonOptions& opt, int k_min, int k_max) {
  ExperimentConfig config;
  if (!opt.config_path.empty()) {
    config = resolve_config(opt);
  } else {
    CommonOptions with_preset = opt;
    if (with_preset.preset.empty()) with_preset.preset = "paper-multinode";
    config = resolve_config(with_preset);
  }
  const SweepResult result = run_multinode_sweep(config, k_min, k_max, opt.jobs);
  write_sweep_outputs(result, opt.out_dir);
  for (const SweepEntry& e : result.entries) {
    std::printf("K=%d  f = %.6f  (95%% CI [%.6f, %.6f])\n", e.k, e.fit.f, e.fit.ci_f[0],
                e.fit.ci_f[1]);
  }
  std::printf("log f slope per node = %.6f  (R^2 = %.6f)\n", result.log_f_slope,
              result.log_f_r_squared);
  std::printf("outputs in %s (sweep.csv, summary.txt)\n", opt.out_dir.c_str());
  return 0;
}

int cmd_plan(double f_guess, double amplitude_guess, const std::string& out_dir) {
  const StatReport report = make_stat_report(f_guess, amplitude_guess);
  write_plan_outputs(report, f_guess, amplitude_guess, out_dir);
  int best_m = 1;
  double best = 0.0;
  for (std::size_t i = 0; i < report.m_grid.size(); ++i) {
    if (report.fisher_per_cost[i] > best) {
      best = report.fisher_per_cost[i];
      best_m = report.m_grid[i];
    }
  }
  std::printf("optimal bounce count m* = %.4f (best integer m = %d)\n", report.m_star, best_m);
  std::printf("per-transmission variance floor = %.6g\n", report.crb_variance_lower_bound);
  std::printf("outputs in %s (fisher_curve.csv, plan.json)\n", out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"network benchmarking: simulate bounce protocols and fit link fidelities"};
  app.require_subcommand(1);

  CommonOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "run a benchmarking experiment and fit the decay");
  add_common(run, run_opt);

  CommonOptions sweep_opt;
  int k_min = 2;
  int k_max = 6;
  CLI::App* sweep = app.add_subcommand("sweep", "run the multi-node protocol over chain lengths");
  add_common(sweep, sweep_opt);
  sweep->add_option("--k-min", k_min, "shortest chain (nodes)");
  sweep->add_option("--k-max", k_max, "longest chain (nodes)");

  double f_guess = 0.9;
  double amplitude_guess = 0.5;
  std::string plan_out = "out";
  CLI::App* plan = app.add_subcommand("plan", "per-cost Fisher information planning");
  plan->add_option("--f", f_guess, "anticipated network fidelity")->required();
  plan->add_option("--A", amplitude_guess, "anticipated fit amplitude");
  plan->add_option("--out-dir", plan_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opt);
    if (sweep->parsed()) return cmd_sweep(sweep_opt, k_min, k_max);
    if (plan->parsed()) return cmd_plan(f_guess, amplitude_guess, plan_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
