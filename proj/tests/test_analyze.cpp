#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cbp/analyze.hpp"
#include "cbp/noise.hpp"
#include "helpers.hpp"

using namespace cbp;

namespace {

// Inverse-CDF exponential sampler on top of the deterministic noise source.
std::vector<double> exp_samples(double rate, std::size_t n, std::uint64_t seed) {
  testutil::Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = -std::log(1.0 - rng.uniform(0.0, 1.0)) / rate;
  return out;
}

}  // namespace

TEST_CASE("normal tail values against the quadrature oracle") {
  CHECK(normal_tail(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(normal_tail(1.0) - 0.15865525393145705) < 1e-12);
  for (double u : {0.0, 1.0, 1.96, 5.0}) {
    const double oracle = testutil::normal_tail_quadrature(u);
    CHECK(std::abs(normal_tail(u) - oracle) < 1e-10);
  }
}

TEST_CASE("ks statistic recognizes its own target") {
  const auto samples = exp_samples(2.0, 10000, 42);
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= samples.size();
  CHECK(std::abs(mean - 0.5) < 0.02);
  CHECK(ks_to_exponential(samples, 2.0) < 0.02);
  CHECK(ks_to_exponential(samples, 1.0) > 0.2);  // wrong rate is far away
}

TEST_CASE("ks stays below the one percent dkw band almost always") {
  const std::size_t trials = 1000, n = 500;
  const double bound = std::sqrt(std::log(2.0 / 0.01) / (2.0 * n));
  std::size_t exceed = 0;
  for (std::size_t t = 0; t < trials; ++t)
    if (ks_to_exponential(exp_samples(1.0, n, 1000 + t), 1.0) > bound) ++exceed;
  // Population exceedance is at most 1%; allow three binomial sigmas on top.
  const double allowance = 0.01 * trials + 3.0 * std::sqrt(trials * 0.01 * 0.99);
  CHECK(static_cast<double>(exceed) <= allowance);
}

TEST_CASE("dominance is reflexive and orders shifted and rescaled samples") {
  const auto a = exp_samples(2.0, 4000, 7);
  std::vector<double> shifted(a);
  for (auto& v : shifted) v += 0.1;
  std::vector<double> grid;
  for (double y = 0.0; y <= 3.0; y += 0.1) grid.push_back(y);

  const auto self = dominance_check({a}, {a}, grid);
  CHECK(self.a_below_b[0]);

  const auto shift = dominance_check({a}, {shifted}, grid);
  CHECK(shift.a_below_b[0]);
  const auto reverse = dominance_check({shifted}, {a}, grid);
  CHECK_FALSE(reverse.a_below_b[0]);

  // Exp(2) is stochastically below Exp(1).
  const auto b = exp_samples(1.0, 4000, 8);
  CHECK(dominance_check({a}, {b}, grid).a_below_b[0]);
  CHECK_FALSE(dominance_check({b}, {a}, grid).a_below_b[0]);
}

TEST_CASE("identical coupled trajectories report zero violations") {
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon = 1.0;
  cfg.seed = 55;
  const auto spec = SystemSpec::atlas(4);
  const auto [a, b] =
      simulate_coupled(spec, spec, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, cfg);
  for (auto which : {Inequality::RankedPositionsLe, Inequality::GapsLe,
                     Inequality::LocalTimeIncrGe, Inequality::LocalTimeIncrLe}) {
    const auto rep = comparison_report(a, b, which, 0.0);
    CHECK(rep.worst_fraction() == 0.0);
  }
}

TEST_CASE("collision condition matches concavity under symmetric collisions") {
  SystemSpec flat = SystemSpec::atlas(3);
  CHECK(collision_condition_check(flat, 3).all_hold());

  SystemSpec convex = SystemSpec::atlas(3);
  convex.diffusions = ParamSeq::of({1.0, 1.0, 3.0}, 3.0);
  const auto bad = collision_condition_check(convex, 3);
  REQUIRE(bad.ranks == std::vector<std::size_t>{2});
  CHECK_FALSE(bad.holds[0]);

  SystemSpec linear = SystemSpec::atlas(3);
  linear.diffusions = ParamSeq::of({1.0, 2.0, 3.0}, 3.0);
  CHECK(collision_condition_check(linear, 3).all_hold());  // equality boundary

  testutil::Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    SystemSpec s = SystemSpec::atlas(8);
    std::vector<double> v(8);
    for (auto& x : v) x = rng.index(1, 16) / 4.0;  // small rationals: exact compare
    s.diffusions = ParamSeq::of(std::move(v), 1.0);
    CHECK_NOTHROW(collision_condition_check(s, 8));  // concavity agreement inside
  }
}

TEST_CASE("near-collision counts grow with delta and vanish off the corner") {
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon = 5.0;
  cfg.seed = 9;
  const auto crowded = simulate_ranked_gaps(SystemSpec::atlas(4), {0.0, 0.0, 0.0}, cfg);
  const auto rep = near_collision_stats(crowded, {0.0, 0.01, 0.05, 0.2});
  REQUIRE(rep.ranks.size() == 2);
  for (std::size_t j = 0; j < rep.ranks.size(); ++j) {
    CHECK(rep.counts[j][0] == 0);  // exact zeros have measure zero per step
    for (std::size_t d = 0; d + 1 < rep.deltas.size(); ++d)
      CHECK(rep.counts[j][d] <= rep.counts[j][d + 1]);
    CHECK(rep.counts[j].back() > 0);
  }

  const auto wide = simulate_ranked_gaps(SystemSpec::atlas(4), {50.0, 50.0, 50.0}, cfg);
  const auto none = near_collision_stats(wide, {0.01, 0.05});
  for (const auto& row : none.counts)
    for (auto c : row) CHECK(c == 0);
}

TEST_CASE("running-minimum bound on the worst case is honored") {
  // Driftless unit-diffusion start at 5, barrier at 0: the reflection
  // principle makes the bound exact, and the discrete minimum undershoots.
  const auto chk = tail_bound_check(5.0, 0.0, 1.0, 0.0, 1.0, 20000, 256, 2024);
  CHECK(chk.bound == doctest::Approx(2.0 * normal_tail(5.0)).epsilon(1e-12));
  CHECK(chk.within);

  // A case with pushy negative drift and a reachable barrier
  // (x <= v0 + g_lo T requires x <= 0 here).
  const auto busy = tail_bound_check(1.0, -0.5, 1.5, -0.2, 2.0, 20000, 256, 2025);
  CHECK(busy.within);
  CHECK(busy.empirical > 0.1);  // the event is common here: a real test

  CHECK_THROWS_AS(min_tail_bound(0.0, 0.0, 1.0, 0.5, 1.0), Error);
}

TEST_CASE("two-sided exit bound holds for driftless unit diffusion") {
  const double v0 = 0.5, x = 3.0, horizon = 1.0;
  const double bound = exit_tail_bound(v0, 0.0, 1.0, x, horizon);
  NoiseSource noise(77, 0);
  const std::size_t paths = 20000, steps = 256;
  const double dt = horizon / steps, sq = std::sqrt(dt);
  std::size_t hits = 0;
  for (std::size_t p = 0; p < paths; ++p) {
    double v = v0;
    bool hit = false;
    for (std::size_t s = 0; s < steps && !hit; ++s) {
      v += sq * noise.gaussian(1);
      hit = std::abs(v) >= x;
    }
    if (hit) ++hits;
  }
  const double empirical = double(hits) / paths;
  CHECK(empirical <= bound + 3.0 * std::sqrt(bound * (1 - bound) / paths) + 1e-9);

  CHECK_THROWS_AS(exit_tail_bound(0.5, 0.0, 1.0, 0.4, 1.0), Error);
}

TEST_CASE("psi series verdicts on the closed tail family") {
  const auto linear = psi_series_bound(TailRule::power(0.0, 1.0, 1.0), 0.0, 1.0, 1000);
  CHECK(linear.precondition_seriesalpha);
  CHECK(linear.converges);

  const auto shifted = psi_series_bound(TailRule::power(0.0, 1.0, 1.0), -1e6, 1.0);
  CHECK(shifted.converges);  // a finite shift never matters

  const auto sqrtlog = psi_series_bound(TailRule::log_power(0.0, 1.0, 0.5), 0.0, 1.0, 1000);
  CHECK_FALSE(sqrtlog.precondition_seriesalpha);
  CHECK_FALSE(sqrtlog.converges);

  const auto flat = psi_series_bound(TailRule::constant(4.0), 0.0, 1.0);
  CHECK_FALSE(flat.converges);

  // Partial sums back the verdicts: the convergent series settles, the
  // divergent one keeps climbing between checkpoints.
  REQUIRE(linear.partial_sums.size() >= 4);
  const auto& ls = linear.partial_sums;
  CHECK(ls[ls.size() - 1] - ls[ls.size() - 2] < 1e-8);
  const auto& ds = sqrtlog.partial_sums;
  CHECK(ds[ds.size() - 1] - ds[ds.size() - 2] > 0.1);
}

TEST_CASE("gap statistics recover an injected stationary sample") {
  // Build a synthetic trajectory whose gap rows are i.i.d. Exp(law): the
  // stats layer must report the right means and a small KS distance.
  const auto spec = SystemSpec::atlas(5);
  const auto law = stationary_rates(spec, 5);
  GapTrajectory traj;
  traj.dt = 1e-3;
  traj.n_gaps = 4;
  traj.output_stride = 1;
  const std::size_t rows = 600000;
  testutil::Rng rng(4242);
  traj.times.resize(rows);
  traj.gaps.resize(rows * 4);
  traj.local_time.assign(rows * 4, 0.0);
  traj.bottom.assign(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    traj.times[r] = r * traj.dt;
    for (std::size_t k = 0; k < 4; ++k)
      traj.gaps[r * 4 + k] = -std::log(1.0 - rng.uniform(0.0, 1.0)) / law.rates[k];
  }
  const auto stats = empirical_gap_stats(traj, law, 50.0);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(stats.count[k] >= 100);
    CHECK(std::abs(stats.mean[k] - 1.0 / law.rates[k]) < 0.05 / law.rates[k]);
    CHECK(stats.ks[k] < 0.03);
    CHECK(stats.stride_steps[k] ==
          std::max<std::size_t>(1, std::llround(1.0 / (law.rates[k] * traj.dt) / 10.0)));
  }

  GapTrajectory tiny = traj;
  tiny.times.resize(50);
  tiny.gaps.resize(50 * 4);
  tiny.local_time.resize(50 * 4);
  tiny.bottom.resize(50);
  CHECK_THROWS_AS(empirical_gap_stats(tiny, law, 0.0), Error);
}
