#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <thread>

#include "cbp/analyze.hpp"
#include "cbp/infinite.hpp"
#include "manifest.hpp"
#include "output.hpp"

namespace cbp::cli {

using json = nlohmann::ordered_json;

namespace {

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

// Deterministic uniform stream for initial-condition sampling.
struct UniformStream {
  std::uint64_t state;
  double next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
  }
};

std::size_t finite_size_or_throw(const SystemSpec& spec) {
  if (spec.infinite())
    throw Error(Errc::InvalidArgument,
                "this command needs a finite particle count (use truncations)");
  return static_cast<std::size_t>(spec.size);
}

// Initial gaps for a gap-scheme run: from the configured initial positions,
// else the stationary mean profile.
std::vector<double> initial_gaps(const ExperimentConfig& cfg, std::size_t n,
                                 const StationaryLaw& law) {
  if (cfg.initial) {
    std::vector<double> y = cfg.initial->first(n);
    if (cfg.initial->kind == InitialConfig::Kind::Named)
      y = rank_configuration(y).sorted;
    return gaps_from_positions(y);
  }
  if (!law.defined())
    throw Error(Errc::NotTight,
                "no initial configuration given and no stationary law to start from");
  std::vector<double> z(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) z[k] = 1.0 / law.rates[k];
  return z;
}

void write_gap_trajectory(const ExperimentConfig& cfg, const std::string& stem,
                          const GapTrajectory& traj) {
  const std::filesystem::path dir = cfg.output.dir;
  if (cfg.output.format == "binary") {
    write_trajectory_binary(dir / (stem + ".bin"), traj);
  } else if (cfg.output.format == "json") {
    json j;
    j["dt"] = traj.dt;
    j["n_gaps"] = traj.n_gaps;
    j["times"] = traj.times;
    j["gaps_row_major"] = traj.gaps;
    j["local_time_row_major"] = traj.local_time;
    j["bottom"] = traj.bottom;
    write_json(dir / (stem + ".json"), j);
  } else {
    write_trajectory_csv(dir / (stem + ".csv"), traj);
  }
}

std::size_t row_at_time(const GapTrajectory& traj, double t) {
  std::size_t best = 0;
  double err = std::abs(traj.times[0] - t);
  for (std::size_t row = 1; row < traj.rows(); ++row) {
    const double e = std::abs(traj.times[row] - t);
    if (e < err) {
      err = e;
      best = row;
    }
  }
  return best;
}

}  // namespace

void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

int cmd_validate(const ExperimentConfig& cfg) {
  Stopwatch clock;
  ValidationReport report = validate_spec(cfg.spec);
  if (cfg.initial) {
    const ValidationReport init = check_initial_admissible(*cfg.initial);
    report.entries.insert(report.entries.end(), init.entries.begin(), init.entries.end());
  }
  json j = validation_to_json(report);
  write_json(std::filesystem::path(cfg.output.dir) / "validation.json", j);
  for (const auto& e : report.entries)
    std::printf("[%s] %s: %s\n", e.pass ? "pass" : "FAIL", e.id.c_str(), e.detail.c_str());
  write_manifest(cfg.output.dir, "validate", config_hash_hex(cfg), cfg.sim.seed,
                 clock.seconds());
  return report.pass() ? 0 : 1;
}

int cmd_stationary(const ExperimentConfig& cfg, std::optional<std::size_t> n_override,
                   const std::vector<std::size_t>& ladder_sizes) {
  Stopwatch clock;
  const std::filesystem::path dir = cfg.output.dir;
  int rc = 0;

  if (!ladder_sizes.empty()) {
    json j;
    try {
      const LambdaLadder ladder = build_lambda_ladder(cfg.spec, ladder_sizes);
      write_ladder_csv(dir / "ladder.csv", ladder);
      j = ladder_to_json(ladder);
      if (cfg.spec.symmetric && cfg.spec.diffusions.tail.effectively_constant()) {
        try {
          const ParamSeq rule = lambda_limit_symmetric(cfg.spec, &ladder);
          j["analytic_rule_prefix"] = rule.prefix;
          j["analytic_rule_tail"] = rule.tail.constant_value();
        } catch (const Error&) {
          // no closed-form Cesaro mean: ladder output stands alone
        }
      }
    } catch (const Error& e) {
      j["error"] = e.what();
      rc = 1;
    }
    write_json(dir / "ladder.json", j);
  } else {
    const std::size_t n =
        n_override ? *n_override : finite_size_or_throw(cfg.spec);
    const StationaryLaw law = stationary_rates(cfg.spec, n);
    json j = law_to_json(law);
    j["reflection"] = reflection_to_json(build_reflection_data(cfg.spec, n));
    write_json(dir / "stationary.json", j);
    if (law.defined()) {
      write_rates_csv(dir / "rates.csv", law);
      for (std::size_t k = 0; k < law.rates.size(); ++k)
        std::printf("lambda_%zu = %s\n", k + 1, format_double(law.rates[k]).c_str());
    } else {
      std::printf("no product-form stationary law: tight=%d skew_symmetric=%d\n",
                  law.tight, law.skew_symmetric);
      rc = 1;
    }
  }
  write_manifest(cfg.output.dir, "stationary", config_hash_hex(cfg), cfg.sim.seed,
                 clock.seconds());
  return rc;
}

int cmd_simulate(const ExperimentConfig& cfg, std::size_t jobs) {
  Stopwatch clock;
  const std::size_t n = finite_size_or_throw(cfg.spec);
  cfg.sim.validate();
  const std::filesystem::path dir = cfg.output.dir;
  const StationaryLaw law = stationary_rates(cfg.spec, n);

  const std::size_t replicas = cfg.sim.replicas;
  std::vector<GapTrajectory> trajs(replicas);

  if (cfg.sim.scheme == SimConfig::Scheme::GapSrbm) {
    const std::vector<double> z0 = initial_gaps(cfg, n, law);
    parallel_for(replicas, jobs, [&](std::size_t rep) {
      trajs[rep] = simulate_ranked_gaps(cfg.spec, z0, cfg.sim, rep);
    });
  } else {
    if (!cfg.initial)
      throw Error(Errc::InvalidArgument, "named scheme needs initial positions");
    const std::vector<double> x0 = cfg.initial->first(n);
    std::vector<NamedTrajectory> named(replicas);
    parallel_for(replicas, jobs, [&](std::size_t rep) {
      named[rep] = simulate_named(cfg.spec, x0, cfg.sim, rep);
    });
    for (std::size_t rep = 0; rep < replicas; ++rep) {
      write_trajectory_csv(dir / ("named_rep" + std::to_string(rep) + ".csv"),
                           named[rep]);
      trajs[rep] = named[rep].ranked_gaps();
    }
  }

  for (std::size_t rep = 0; rep < replicas; ++rep)
    write_gap_trajectory(cfg, "traj_rep" + std::to_string(rep), trajs[rep]);

  json j;
  j["replicas"] = replicas;
  if (law.defined()) {
    json per_rep = json::array();
    std::vector<std::vector<double>> pooled(n - 1);
    std::vector<double> mean_acc(n - 1, 0.0);
    std::vector<std::size_t> count_acc(n - 1, 0);
    for (std::size_t rep = 0; rep < replicas; ++rep) {
      const GapStats stats = empirical_gap_stats(trajs[rep], law, cfg.sim.burn_in);
      per_rep.push_back(gap_stats_to_json(stats, law));
      for (std::size_t k = 0; k + 1 < n; ++k) {
        mean_acc[k] += stats.mean[k] * static_cast<double>(stats.count[k]);
        count_acc[k] += stats.count[k];
        // Pool the same strided samples for an overall KS figure.
        const std::size_t row_stride = std::max<std::size_t>(
            1, stats.stride_steps[k] / std::max<std::size_t>(1, trajs[rep].output_stride));
        std::size_t first_row = 0;
        while (first_row < trajs[rep].rows() &&
               trajs[rep].times[first_row] < cfg.sim.burn_in)
          ++first_row;
        for (std::size_t row = first_row; row < trajs[rep].rows(); row += row_stride)
          pooled[k].push_back(trajs[rep].gap(row, k));
      }
    }
    j["per_replica"] = per_rep;
    json pooled_json = json::array();
    GapStats pooled_stats;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      json g;
      g["k"] = k + 1;
      g["rate"] = law.rates[k];
      g["mean"] = mean_acc[k] / static_cast<double>(count_acc[k]);
      g["count"] = count_acc[k];
      g["ks"] = ks_to_exponential(pooled[k], law.rates[k]);
      pooled_json.push_back(g);
    }
    j["pooled"] = pooled_json;
    const GapStats stats0 = empirical_gap_stats(trajs[0], law, cfg.sim.burn_in);
    write_gap_stats_csv(dir / "gap_stats.csv", stats0, law);
  } else {
    j["note"] = "no product-form stationary law: trajectories emitted without stats";
  }
  write_json(dir / "gap_stats.json", j);
  write_manifest(cfg.output.dir, "simulate", config_hash_hex(cfg), cfg.sim.seed,
                 clock.seconds());
  return 0;
}

int cmd_converge(const ExperimentConfig& cfg, const std::string& start, double factor,
                 std::vector<double> checkpoints, std::size_t jobs) {
  Stopwatch clock;
  const std::size_t n = finite_size_or_throw(cfg.spec);
  const StationaryLaw law = stationary_rates(cfg.spec, n);
  if (!law.defined()) {
    std::printf("converge requires a tight, skew-symmetric spec\n");
    return 1;
  }
  if (start == "dominating") {
    if (factor <= 0.0) factor = 2.0;
    if (factor < 1.0) throw Error(Errc::InvalidArgument, "dominating start needs factor >= 1");
  } else if (start == "stationary") {
    factor = 1.0;
  } else if (start == "custom") {
    if (factor <= 0.0)
      throw Error(Errc::InvalidArgument, "custom start needs an explicit positive --factor");
  } else {
    throw Error(Errc::InvalidArgument, "start must be dominating|stationary|custom");
  }

  if (checkpoints.empty()) checkpoints = {5.0, 25.0, 100.0};
  std::sort(checkpoints.begin(), checkpoints.end());
  SimConfig sim = cfg.sim;
  sim.horizon = std::max(sim.horizon, checkpoints.back());
  sim.burn_in = 0.0;

  const std::size_t replicas = std::max<std::size_t>(2, sim.replicas);
  // One gap vector per (replica, checkpoint).
  std::vector<std::vector<std::vector<double>>> at(checkpoints.size());
  for (auto& per_cp : at) per_cp.assign(n - 1, std::vector<double>(replicas, 0.0));

  parallel_for(replicas, jobs, [&](std::size_t rep) {
    // Gaps start exponential with rates lambda_k / factor: stochastically
    // larger than the stationary law for factor >= 1.
    UniformStream u{0x5851F42D4C957F2DULL ^ (sim.seed + 0x9E3779B97F4A7C15ULL * rep)};
    std::vector<double> z0(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k)
      z0[k] = -std::log(1.0 - u.next()) / (law.rates[k] / factor);
    const GapTrajectory traj = simulate_ranked_gaps(cfg.spec, z0, sim, rep);
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      const std::size_t row = row_at_time(traj, checkpoints[c]);
      for (std::size_t k = 0; k + 1 < n; ++k) at[c][k][rep] = traj.gap(row, k);
    }
  });

  CsvWriter csv(std::filesystem::path(cfg.output.dir) / "converge.csv",
                {"t", "k", "ks", "mean"});
  json j;
  j["start"] = start;
  j["factor"] = factor;
  j["replicas"] = replicas;
  json cps = json::array();
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    json cp;
    cp["t"] = checkpoints[c];
    json per_k = json::array();
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double ks = ks_to_exponential(at[c][k], law.rates[k]);
      double mean = 0.0;
      for (double v : at[c][k]) mean += v;
      mean /= static_cast<double>(replicas);
      csv.row({format_double(checkpoints[c]), std::to_string(k + 1), format_double(ks),
               format_double(mean)});
      json e;
      e["k"] = k + 1;
      e["ks"] = ks;
      e["mean"] = mean;
      per_k.push_back(e);
    }
    cp["gaps"] = per_k;
    cps.push_back(cp);
  }
  j["checkpoints"] = cps;
  csv.flush();
  write_json(std::filesystem::path(cfg.output.dir) / "converge.json", j);
  write_manifest(cfg.output.dir, "converge", config_hash_hex(cfg), sim.seed,
                 clock.seconds());
  return 0;
}

int cmd_compare(const ExperimentConfig& cfg_a, const ExperimentConfig& cfg_b,
                const std::string& inequality, double threshold, std::size_t jobs) {
  Stopwatch clock;
  const std::size_t n_a = finite_size_or_throw(cfg_a.spec);
  const std::size_t n_b = finite_size_or_throw(cfg_b.spec);

  Inequality which;
  if (inequality == "gaps_le")
    which = Inequality::GapsLe;
  else if (inequality == "ranked_positions_le")
    which = Inequality::RankedPositionsLe;
  else if (inequality == "local_time_incr_ge")
    which = Inequality::LocalTimeIncrGe;
  else if (inequality == "local_time_incr_le")
    which = Inequality::LocalTimeIncrLe;
  else
    throw Error(Errc::InvalidArgument, "unknown inequality id: " + inequality);

  const StationaryLaw law_a = stationary_rates(cfg_a.spec, n_a);
  const StationaryLaw law_b = stationary_rates(cfg_b.spec, n_b);
  const std::vector<double> z0_a = initial_gaps(cfg_a, n_a, law_a);
  const std::vector<double> z0_b = initial_gaps(cfg_b, n_b, law_b);

  const double slack =
      std::max(comparison_slack(cfg_a.spec, n_a, cfg_a.sim.dt),
               comparison_slack(cfg_b.spec, n_b, cfg_a.sim.dt));

  const std::size_t replicas = cfg_a.sim.replicas;
  std::vector<CouplingReport> reports(replicas);
  int rc = 0;
  try {
    parallel_for(replicas, jobs, [&](std::size_t rep) {
      const auto [ta, tb] =
          simulate_coupled(cfg_a.spec, cfg_b.spec, z0_a, z0_b, cfg_a.sim, rep);
      reports[rep] = comparison_report(ta, tb, which, slack);
    });
  } catch (const Error& e) {
    std::printf("compare failed: %s\n", e.what());
    return 1;
  }

  // Equal-length runs: averaging per-coordinate fractions over replicas is
  // the pooled fraction.
  CouplingReport total = reports[0];
  for (std::size_t rep = 1; rep < replicas; ++rep) {
    for (std::size_t k = 0; k < total.violation_fraction.size(); ++k) {
      total.violation_fraction[k] += reports[rep].violation_fraction[k];
      total.max_violation[k] =
          std::max(total.max_violation[k], reports[rep].max_violation[k]);
    }
  }
  for (auto& f : total.violation_fraction) f /= static_cast<double>(replicas);

  json j = coupling_to_json(total);
  j["replicas"] = replicas;
  j["threshold"] = threshold;
  write_json(std::filesystem::path(cfg_a.output.dir) / "compare.json", j);
  std::printf("%s: worst violation fraction %s (threshold %s)\n", inequality.c_str(),
              format_double(total.worst_fraction()).c_str(),
              format_double(threshold).c_str());
  if (total.worst_fraction() >= threshold) rc = 1;
  write_manifest(cfg_a.output.dir, "compare", config_hash_hex(cfg_a), cfg_a.sim.seed,
                 clock.seconds());
  return rc;
}

int cmd_collisions(const ExperimentConfig& cfg, std::vector<double> deltas,
                   std::vector<double> dts) {
  Stopwatch clock;
  const std::size_t n = finite_size_or_throw(cfg.spec);
  if (n < 3) throw Error(Errc::InvalidArgument, "collision statistics need N >= 3");
  const CollisionConditions cond = collision_condition_check(cfg.spec, n);

  if (dts.empty()) dts = {cfg.sim.dt};
  const StationaryLaw law = stationary_rates(cfg.spec, n);
  std::vector<CollisionReport> reports;
  for (double dt : dts) {
    SimConfig sim = cfg.sim;
    sim.dt = dt;
    std::vector<double> ds = deltas;
    if (ds.empty())
      for (double c : {0.5, 1.0, 2.0, 4.0}) ds.push_back(c * std::sqrt(dt));
    // Near-collision occupation does not need a stationary start; fall back
    // to unit gaps when no law is available.
    std::vector<double> z0;
    if (cfg.initial || law.defined())
      z0 = initial_gaps(cfg, n, law);
    else
      z0.assign(n - 1, 1.0);
    const GapTrajectory traj = simulate_ranked_gaps(cfg.spec, z0, sim, 0);
    reports.push_back(near_collision_stats(traj, ds));
  }

  const json j = collisions_to_json(cond, reports, dts);
  write_json(std::filesystem::path(cfg.output.dir) / "collisions.json", j);
  CsvWriter csv(std::filesystem::path(cfg.output.dir) / "collisions.csv",
                {"dt", "delta", "k", "count"});
  for (std::size_t r = 0; r < reports.size(); ++r)
    for (std::size_t k = 0; k < reports[r].ranks.size(); ++k)
      for (std::size_t d = 0; d < reports[r].deltas.size(); ++d)
        csv.row({format_double(dts[r]), format_double(reports[r].deltas[d]),
                 std::to_string(reports[r].ranks[k]),
                 std::to_string(reports[r].counts[k][d])});
  csv.flush();
  write_manifest(cfg.output.dir, "collisions", config_hash_hex(cfg), cfg.sim.seed,
                 clock.seconds());
  return 0;
}

}  // namespace cbp::cli
