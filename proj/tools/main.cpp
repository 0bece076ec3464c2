#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include "commands.hpp"

namespace {

using namespace cbp::cli;

std::vector<std::size_t> parse_size_list(const std::string& csv) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    const std::size_t comma = csv.find(',', pos);
    const std::string tok = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
    out.push_back(static_cast<std::size_t>(std::stoull(tok)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    const std::size_t comma = csv.find(',', pos);
    const std::string tok = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
    out.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

// Seed precedence: --seed flag, then config, then RANKED_BM_SEED, then 0.
void resolve_overrides(ExperimentConfig& cfg, const std::optional<std::uint64_t>& seed_flag,
                       const std::string& out_flag, const std::string& format_flag) {
  if (seed_flag) {
    cfg.sim.seed = *seed_flag;
  } else if (!cfg.seed_in_config) {
    if (const char* env = std::getenv("RANKED_BM_SEED")) cfg.sim.seed = std::strtoull(env, nullptr, 10);
  }
  if (!out_flag.empty()) cfg.output.dir = out_flag;
  if (!format_flag.empty()) cfg.output.format = format_flag;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Competing Brownian particles: stationary laws, simulation, experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed_flag;
  std::size_t jobs = 1;
  std::string out_flag, format_flag;
  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--seed", seed_flag, "seed override (wins over config and env)");
  app.add_option("--jobs", jobs, "worker pool size for replicas")->default_val(1);
  app.add_option("--out", out_flag, "output directory override");
  app.add_option("--format", format_flag, "trajectory format: csv|json|binary")
      ->check(CLI::IsMember({"csv", "json", "binary"}));

  auto* validate = app.add_subcommand("validate", "check every standing assumption");

  auto* stationary = app.add_subcommand("stationary", "rates, tightness and skew flags");
  std::size_t n_opt = 0;
  std::string ladder_csv;
  stationary->add_option("--N", n_opt, "particle count override");
  stationary->add_option("--ladder", ladder_csv, "truncation grid, e.g. 4,8,16,32");

  auto* simulate = app.add_subcommand("simulate", "run the configured scheme");

  auto* converge = app.add_subcommand("converge", "KS-to-target over time checkpoints");
  std::string start = "dominating";
  double factor = 0.0;
  std::string checkpoints_csv;
  converge->add_option("--start", start, "dominating|stationary|custom")
      ->check(CLI::IsMember({"dominating", "stationary", "custom"}));
  converge->add_option("--factor", factor, "initial rates are lambda_k / factor");
  converge->add_option("--checkpoints", checkpoints_csv, "times, e.g. 5,25,100");

  auto* compare = app.add_subcommand("compare", "coupled run + inequality report");
  std::string config_b_path, inequality = "gaps_le";
  double threshold = 0.01;
  compare->add_option("--config-b", config_b_path, "second experiment config")->required();
  compare->add_option("--inequality", inequality,
                      "gaps_le|ranked_positions_le|local_time_incr_ge|local_time_incr_le");
  compare->add_option("--threshold", threshold, "violation fraction budget")
      ->default_val(0.01);

  auto* collisions = app.add_subcommand("collisions", "condition table + near-collision counts");
  std::string deltas_csv, dts_csv;
  collisions->add_option("--deltas", deltas_csv, "gap thresholds, e.g. 0.02,0.06");
  collisions->add_option("--dts", dts_csv, "step sizes, e.g. 1e-3,1e-4");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    ExperimentConfig cfg = load_config(config_path);
    resolve_overrides(cfg, seed_flag, out_flag, format_flag);

    if (validate->parsed()) return cmd_validate(cfg);
    if (stationary->parsed()) {
      std::optional<std::size_t> n;
      if (n_opt > 0) n = n_opt;
      return cmd_stationary(cfg, n,
                            ladder_csv.empty() ? std::vector<std::size_t>{}
                                               : parse_size_list(ladder_csv));
    }
    if (simulate->parsed()) return cmd_simulate(cfg, jobs);
    if (converge->parsed())
      return cmd_converge(cfg, start, factor,
                          checkpoints_csv.empty() ? std::vector<double>{}
                                                  : parse_double_list(checkpoints_csv),
                          jobs);
    if (compare->parsed()) {
      ExperimentConfig cfg_b = load_config(config_b_path);
      resolve_overrides(cfg_b, seed_flag, out_flag, format_flag);
      cfg_b.sim = cfg.sim;  // the coupled pair shares one discretization and seed
      return cmd_compare(cfg, cfg_b, inequality, threshold, jobs);
    }
    if (collisions->parsed())
      return cmd_collisions(cfg,
                            deltas_csv.empty() ? std::vector<double>{}
                                               : parse_double_list(deltas_csv),
                            dts_csv.empty() ? std::vector<double>{}
                                            : parse_double_list(dts_csv));
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const cbp::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
