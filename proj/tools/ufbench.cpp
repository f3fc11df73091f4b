// ufbench: reproducible denoising-filter experiments.
//
// Subcommands: run, curve, scan, verify, oracle. Every config-file key is
// also a command-line flag of the same name; flags win over the file.
// Exit codes: 0 success, 1 usage/config error, 2 verification failure.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "unifilt/bench/config.hpp"
#include "unifilt/bench/csv.hpp"
#include "unifilt/bench/experiment.hpp"
#include "unifilt/bench/verify.hpp"
#include "unifilt/oracle.hpp"

namespace {

using unifilt::bench::CheckResult;
using unifilt::bench::ConfigMap;
using unifilt::bench::ExperimentConfig;
using unifilt::bench::format_real;

struct CommonArgs {
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

void add_config_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "config file, one `key = value` per line");
  for (const std::string& key : ConfigMap::known_keys()) {
    cmd->add_option_function<std::string>(
        "--" + key, [&args, key](const std::string& value) { args.overrides[key] = value; },
        "override config key '" + key + "'");
  }
}

ExperimentConfig resolve_config(const CommonArgs& args) {
  ConfigMap map;
  if (!args.config_path.empty()) map = ConfigMap::from_file(args.config_path);
  for (const auto& [key, value] : args.overrides) map.set(key, value);
  return map.resolve();
}

int cmd_run(const CommonArgs& args) {
  const ExperimentConfig cfg = resolve_config(args);
  const auto summaries = unifilt::bench::run_experiment(cfg);
  std::printf("wrote %zu trace file(s) and summary.csv under %s\n", summaries.size(),
              cfg.out_dir.c_str());
  for (const auto& s : summaries) {
    std::printf("seed %llu: loss %.6g, regret %.6g, adaptive regret %.6g on [%lld, %lld]\n",
                static_cast<unsigned long long>(s.seed), s.cumulative_true_loss, s.regret_full,
                s.adaptive_regret, static_cast<long long>(s.worst_r),
                static_cast<long long>(s.worst_s));
  }
  return 0;
}

int cmd_curve(const CommonArgs& args) {
  const ExperimentConfig cfg = resolve_config(args);
  const auto curve = unifilt::bench::regret_curve(cfg);
  std::printf("wrote curve.csv and curve_fit.csv under %s\n", cfg.out_dir.c_str());
  for (const auto& p : curve.points) {
    std::printf("T=%lld: mean regret %.6g +- %.3g\n", static_cast<long long>(p.horizon),
                p.mean_regret, p.stderr_regret);
  }
  std::printf("fit vs ln T: intercept %.6g slope %.6g r2 %.4f\n", curve.log_fit.intercept,
              curve.log_fit.slope, curve.log_fit.r2);
  std::printf("fit vs T:    intercept %.6g slope %.6g r2 %.4f\n", curve.linear_fit.intercept,
              curve.linear_fit.slope, curve.linear_fit.r2);
  return 0;
}

int cmd_scan(const CommonArgs& args) {
  const ExperimentConfig cfg = resolve_config(args);
  std::filesystem::create_directories(cfg.out_dir);
  const std::vector<double> signal = unifilt::generate_signal(cfg.signal, cfg.horizon);
  unifilt::bench::CsvWriter csv(cfg.out_dir + "/scan.csv");
  csv.row({"seed", "worst_interval_r", "worst_interval_s", "adaptive_regret"});
  for (std::uint64_t seed : cfg.seeds) {
    const auto run = unifilt::bench::run_seed(cfg, signal, seed);
    const auto& s = run.summary;
    csv.row({std::to_string(seed), std::to_string(s.worst_r), std::to_string(s.worst_s),
             format_real(s.adaptive_regret)});
    std::printf("seed %llu: worst interval [%lld, %lld], regret %.6g\n",
                static_cast<unsigned long long>(seed), static_cast<long long>(s.worst_r),
                static_cast<long long>(s.worst_s), s.adaptive_regret);
  }
  std::printf("wrote scan.csv under %s\n", cfg.out_dir.c_str());
  return 0;
}

int cmd_oracle(const CommonArgs& args, std::int64_t from, std::int64_t to) {
  const ExperimentConfig cfg = resolve_config(args);
  std::filesystem::create_directories(cfg.out_dir);
  const std::vector<double> signal = unifilt::generate_signal(cfg.signal, cfg.horizon);
  const std::int64_t r = from > 0 ? from : 1;
  const std::int64_t s = to > 0 ? to : cfg.horizon;
  unifilt::bench::CsvWriter csv(cfg.out_dir + "/oracle.csv");
  std::vector<std::string> header = {"seed", "r", "s", "loss"};
  for (int i = 0; i < cfg.consts.order; ++i) header.push_back("w" + std::to_string(i));
  csv.row(header);
  for (std::uint64_t seed : cfg.seeds) {
    unifilt::NoiseSpec noise = cfg.noise;
    noise.seed = seed;
    const std::vector<double> n = unifilt::generate_noise(noise, cfg.horizon);
    std::vector<double> y(signal.size());
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = signal[t] + n[t];
    const auto windows = unifilt::build_windows(y, cfg.consts.order);
    const unifilt::PrefixSummaries prefixes(signal, windows);
    const auto best = unifilt::best_fixed_filter(prefixes.between(r, s), cfg.consts.radius);
    std::vector<std::string> row = {std::to_string(seed), std::to_string(r), std::to_string(s),
                                    format_real(best.loss)};
    for (int i = 0; i < cfg.consts.order; ++i) row.push_back(format_real(best.filter(i)));
    csv.row(row);
    std::printf("seed %llu: oracle loss %.6g on [%lld, %lld], |w*| = %.6g\n",
                static_cast<unsigned long long>(seed), best.loss, static_cast<long long>(r),
                static_cast<long long>(s), best.filter.norm());
  }
  std::printf("wrote oracle.csv under %s\n", cfg.out_dir.c_str());
  return 0;
}

int cmd_verify(const std::string& suite) {
  const std::vector<CheckResult> checks = unifilt::bench::run_suite(suite);
  bool all_pass = true;
  std::printf("check,statistic,relation,threshold,pass,detail\n");
  for (const CheckResult& c : checks) {
    all_pass = all_pass && c.pass;
    std::printf("%s,%s,%s,%s,%s,%s\n", c.name.c_str(), format_real(c.statistic).c_str(),
                c.relation.c_str(), format_real(c.threshold).c_str(), c.pass ? "true" : "false",
                c.detail.c_str());
  }
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online denoising-filter benchmark"};
  app.require_subcommand(1);

  CommonArgs run_args, curve_args, scan_args, oracle_args;
  std::int64_t oracle_from = 0, oracle_to = 0;
  std::string verify_suite;

  CLI::App* run = app.add_subcommand("run", "run the experiment, write per-step traces + summary");
  add_config_options(run, run_args);
  CLI::App* curve = app.add_subcommand("curve", "regret against several horizons, with fits");
  add_config_options(curve, curve_args);
  CLI::App* scan = app.add_subcommand("scan", "worst-interval regret scan per seed");
  add_config_options(scan, scan_args);
  CLI::App* oracle = app.add_subcommand("oracle", "best fixed filter in hindsight on an interval");
  add_config_options(oracle, oracle_args);
  oracle->add_option("--from", oracle_from, "interval start (1-based, default 1)");
  oracle->add_option("--to", oracle_to, "interval end (inclusive, default T)");
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suites_help;
  for (const auto& name : unifilt::bench::suite_names()) suites_help += name + " ";
  verify->add_option("suite", verify_suite, "one of: " + suites_help)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (run->parsed()) return cmd_run(run_args);
    if (curve->parsed()) return cmd_curve(curve_args);
    if (scan->parsed()) return cmd_scan(scan_args);
    if (oracle->parsed()) return cmd_oracle(oracle_args, oracle_from, oracle_to);
    if (verify->parsed()) return cmd_verify(verify_suite);
  } catch (const unifilt::bench::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
