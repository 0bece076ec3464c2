#include "cbp/analyze.hpp"

#include <algorithm>
#include <cmath>

#include "cbp/noise.hpp"

namespace cbp {

double normal_tail(double u) { return 0.5 * std::erfc(u / std::sqrt(2.0)); }

double ks_to_exponential(std::vector<double> samples, double rate) {
  if (samples.empty()) throw Error(Errc::InsufficientSamples, "empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = 1.0 - std::exp(-rate * samples[i]);
    ks = std::max(ks, std::max(f - static_cast<double>(i) / n,
                               static_cast<double>(i + 1) / n - f));
  }
  return ks;
}

GapStats empirical_gap_stats(const GapTrajectory& traj, const StationaryLaw& law,
                             double burn_in, std::size_t stride_steps) {
  if (!law.defined() || law.rates.size() != traj.n_gaps)
    throw Error(Errc::MismatchedShapes, "law does not match trajectory");

  GapStats out;
  const std::size_t d = traj.n_gaps;
  out.count.resize(d);
  out.mean.resize(d);
  out.variance.resize(d);
  out.ks.resize(d);
  out.stride_steps.resize(d);
  // ECDF recorded at the target law's quantile levels.
  for (int q = 1; q <= 19; ++q) out.grid.push_back(q / 20.0);
  out.ecdf.resize(d);

  std::size_t first_row = 0;
  while (first_row < traj.rows() && traj.times[first_row] < burn_in) ++first_row;

  for (std::size_t k = 0; k < d; ++k) {
    const double rate = law.rates[k];
    const std::size_t stride =
        stride_steps > 0
            ? stride_steps
            : std::max<std::size_t>(
                  1, static_cast<std::size_t>(std::llround(1.0 / (rate * traj.dt) / 10.0)));
    out.stride_steps[k] = stride;
    const std::size_t row_stride =
        std::max<std::size_t>(1, stride / std::max<std::size_t>(1, traj.output_stride));

    std::vector<double> samples;
    for (std::size_t row = first_row; row < traj.rows(); row += row_stride)
      samples.push_back(traj.gap(row, k));
    if (samples.size() < 100)
      throw Error(Errc::InsufficientSamples,
                  "gap " + std::to_string(k + 1) + ": " + std::to_string(samples.size()) +
                      " samples after stride");

    double s = 0.0, s2 = 0.0;
    for (double v : samples) {
      s += v;
      s2 += v * v;
    }
    const double n = static_cast<double>(samples.size());
    out.count[k] = samples.size();
    out.mean[k] = s / n;
    out.variance[k] = std::max(0.0, s2 / n - out.mean[k] * out.mean[k]);
    out.ks[k] = ks_to_exponential(samples, rate);

    std::sort(samples.begin(), samples.end());
    out.ecdf[k].resize(out.grid.size());
    for (std::size_t j = 0; j < out.grid.size(); ++j) {
      const double zq = -std::log(1.0 - out.grid[j]) / rate;  // target quantile
      out.ecdf[k][j] =
          static_cast<double>(std::upper_bound(samples.begin(), samples.end(), zq) -
                              samples.begin()) /
          n;
    }
  }
  return out;
}

DominanceReport dominance_check(const std::vector<std::vector<double>>& samples_a,
                                const std::vector<std::vector<double>>& samples_b,
                                const std::vector<double>& grid, double confidence) {
  if (samples_a.size() != samples_b.size())
    throw Error(Errc::MismatchedShapes, "coordinate counts differ");
  DominanceReport out;
  const double delta = 1.0 - confidence;
  for (std::size_t k = 0; k < samples_a.size(); ++k) {
    const auto& a = samples_a[k];
    const auto& b = samples_b[k];
    if (a.empty() || b.empty()) throw Error(Errc::InsufficientSamples, "empty sample");
    const double eps = std::sqrt(std::log(2.0 / delta) / (2.0 * a.size())) +
                       std::sqrt(std::log(2.0 / delta) / (2.0 * b.size()));
    out.epsilon = std::max(out.epsilon, eps);
    double worst = 1.0;
    for (double y : grid) {
      const auto frac = [&](const std::vector<double>& s) {
        return static_cast<double>(std::count_if(s.begin(), s.end(),
                                                 [&](double v) { return v <= y; })) /
               static_cast<double>(s.size());
      };
      worst = std::min(worst, frac(a) - frac(b));
    }
    out.worst_margin.push_back(worst);
    out.a_below_b.push_back(worst >= -eps);
  }
  return out;
}

std::string inequality_id(Inequality which) {
  switch (which) {
    case Inequality::RankedPositionsLe: return "ranked_positions_le";
    case Inequality::GapsLe: return "gaps_le";
    case Inequality::LocalTimeIncrGe: return "local_time_incr_ge";
    case Inequality::LocalTimeIncrLe: return "local_time_incr_le";
  }
  return "unknown";
}

double CouplingReport::worst_fraction() const {
  double w = 0.0;
  for (double f : violation_fraction) w = std::max(w, f);
  return w;
}

double comparison_slack(const SystemSpec& spec, std::size_t n, double dt) {
  double smax = 0.0;
  for (std::size_t k = 1; k <= n; ++k) smax = std::max(smax, spec.sigma(k));
  return 3.0 * smax * std::sqrt(dt);
}

CouplingReport comparison_report(const GapTrajectory& a, const GapTrajectory& b,
                                 Inequality which, double slack) {
  if (a.times.size() != b.times.size() || a.dt != b.dt)
    throw Error(Errc::MismatchedShapes, "trajectories use different time grids");
  const std::size_t d = std::min(a.n_gaps, b.n_gaps);
  const std::size_t rows = a.rows();

  CouplingReport rep;
  rep.inequality = inequality_id(which);
  rep.slack = slack;

  const bool windows =
      which == Inequality::LocalTimeIncrGe || which == Inequality::LocalTimeIncrLe;
  const std::size_t coords = windows ? d : (which == Inequality::GapsLe ? d : d + 1);
  rep.violation_fraction.assign(coords, 0.0);
  rep.max_violation.assign(coords, 0.0);

  if (!windows) {
    std::vector<std::size_t> bad(coords, 0);
    for (std::size_t row = 0; row < rows; ++row) {
      if (which == Inequality::GapsLe) {
        for (std::size_t k = 0; k < d; ++k) {
          const double over = a.gap(row, k) - b.gap(row, k) - slack;
          if (over > 0.0) {
            ++bad[k];
            rep.max_violation[k] = std::max(rep.max_violation[k], over);
          }
        }
      } else {  // ranked positions, coordinates Y_1..Y_{d+1}
        double ya = a.bottom[row], yb = b.bottom[row];
        for (std::size_t k = 0; k <= d; ++k) {
          if (k > 0) {
            ya += a.gap(row, k - 1);
            yb += b.gap(row, k - 1);
          }
          const double over = ya - yb - slack;
          if (over > 0.0) {
            ++bad[k];
            rep.max_violation[k] = std::max(rep.max_violation[k], over);
          }
        }
      }
    }
    for (std::size_t k = 0; k < coords; ++k)
      rep.violation_fraction[k] = static_cast<double>(bad[k]) / static_cast<double>(rows);
    return rep;
  }

  // Local-time increments over a dyadic grid of windows.
  std::vector<std::size_t> bad(coords, 0), total(coords, 0);
  for (std::size_t w = 1; w < rows; w *= 2) {
    for (std::size_t i = 0; i + w < rows; i += w) {
      for (std::size_t k = 0; k < d; ++k) {
        const double da = a.local(i + w, k) - a.local(i, k);
        const double db = b.local(i + w, k) - b.local(i, k);
        const double over = which == Inequality::LocalTimeIncrGe ? db - da - slack
                                                                 : da - db - slack;
        ++total[k];
        if (over > 0.0) {
          ++bad[k];
          rep.max_violation[k] = std::max(rep.max_violation[k], over);
        }
      }
    }
  }
  for (std::size_t k = 0; k < coords; ++k)
    rep.violation_fraction[k] =
        total[k] ? static_cast<double>(bad[k]) / static_cast<double>(total[k]) : 0.0;
  return rep;
}

bool CollisionConditions::all_hold() const {
  return std::all_of(holds.begin(), holds.end(), [](bool b) { return b; });
}

CollisionConditions collision_condition_check(const SystemSpec& spec, std::size_t n_ranks) {
  if (n_ranks < 3) throw Error(Errc::InvalidArgument, "need at least 3 ranks");
  CollisionConditions out;
  for (std::size_t k = 2; k <= n_ranks - 1; ++k) {
    const double lhs = (spec.qminus(k - 1) + spec.qplus(k + 1)) * spec.variance(k);
    const double rhs =
        spec.qminus(k) * spec.variance(k + 1) + spec.qplus(k) * spec.variance(k - 1);
    const bool holds = lhs >= rhs;
    if (spec.symmetric) {
      const bool concave =
          spec.variance(k) >= 0.5 * (spec.variance(k - 1) + spec.variance(k + 1));
      if (concave != holds)
        throw Error(Errc::InvalidArgument,
                    "collision condition disagrees with concavity at rank " +
                        std::to_string(k));
    }
    out.ranks.push_back(k);
    out.holds.push_back(holds);
  }
  return out;
}

CollisionReport near_collision_stats(const GapTrajectory& traj,
                                     const std::vector<double>& deltas) {
  CollisionReport rep;
  rep.deltas = deltas;
  rep.rows_scanned = traj.rows();
  if (traj.n_gaps < 2) return rep;
  for (std::size_t j = 0; j + 1 < traj.n_gaps; ++j) {
    rep.ranks.push_back(j + 2);  // middle rank of the triple (j+1, j+2, j+3)
    rep.counts.emplace_back(deltas.size(), 0);
  }
  for (std::size_t row = 0; row < traj.rows(); ++row) {
    for (std::size_t j = 0; j + 1 < traj.n_gaps; ++j) {
      const double z1 = traj.gap(row, j);
      const double z2 = traj.gap(row, j + 1);
      for (std::size_t di = 0; di < deltas.size(); ++di)
        if (z1 < deltas[di] && z2 < deltas[di]) ++rep.counts[j][di];
    }
  }
  return rep;
}

double min_tail_bound(double v0, double g_lo, double sigma_hi, double x, double horizon) {
  if (x > v0 + g_lo * horizon)
    throw Error(Errc::HypothesisViolated, "need x <= v0 + g_lo * T");
  const double neg_part = std::max(-g_lo * horizon, 0.0);
  return 2.0 * normal_tail((v0 - x - neg_part) / (sigma_hi * std::sqrt(horizon)));
}

double exit_tail_bound(double v0, double g_abs, double sigma_hi, double x, double horizon) {
  if (x < std::abs(v0) + g_abs * horizon)
    throw Error(Errc::HypothesisViolated, "need x >= |v0| + g_abs * T");
  return 4.0 * normal_tail((x - std::abs(v0) - g_abs * horizon) /
                           (sigma_hi * std::sqrt(horizon)));
}

TailBoundCheck tail_bound_check(double v0, double g_lo, double sigma_hi, double x,
                                double horizon, std::size_t paths, std::size_t steps,
                                std::uint64_t seed) {
  TailBoundCheck out;
  out.bound = min_tail_bound(v0, g_lo, sigma_hi, x, horizon);
  out.paths = paths;

  const double dt = horizon / static_cast<double>(steps);
  const double sqdt = std::sqrt(dt);
  NoiseSource noise(seed, 0);
  std::size_t hits = 0;
  for (std::size_t p = 0; p < paths; ++p) {
    double v = v0;
    bool hit = v <= x;
    for (std::size_t s = 0; s < steps && !hit; ++s) {
      v += g_lo * dt + sigma_hi * sqdt * noise.gaussian(1);
      hit = v <= x;
    }
    if (hit) ++hits;
  }
  out.empirical = static_cast<double>(hits) / static_cast<double>(paths);
  out.std_error =
      std::sqrt(std::max(out.empirical * (1.0 - out.empirical), 1e-12) /
                static_cast<double>(paths));
  out.within = out.empirical <= out.bound + 3.0 * out.std_error;
  return out;
}

SeriesVerdict psi_series_bound(const TailRule& y, double v, double beta,
                               std::size_t diagnostic_terms) {
  if (!(beta > 0.0)) throw Error(Errc::InvalidArgument, "beta must be positive");
  SeriesVerdict out;
  out.precondition_seriesalpha =
      y.diverges_to_plus_infinity() && y.gaussian_series_admissible();

  if (out.precondition_seriesalpha) {
    out.converges = true;
    out.reason = "Gaussian-series condition holds: converges for every v and beta";
  } else if (y.kind == TailRule::Kind::LogPower && y.b > 0.0 && y.p == 0.5) {
    // Terms behave like n^{-b^2/(2 beta^2)} up to slowly varying factors.
    out.converges = beta < y.b / std::sqrt(2.0);
    out.reason = out.converges
                     ? "sqrt-log tail: exponent b^2/(2 beta^2) > 1"
                     : "sqrt-log tail: exponent b^2/(2 beta^2) <= 1, terms ~ 1/n^c, c <= 1";
  } else {
    out.converges = false;
    out.reason = y.diverges_to_plus_infinity()
                     ? "tail grows too slowly for the Gaussian-series condition"
                     : "tail does not diverge: terms are bounded away from zero";
  }

  double acc = 0.0;
  for (std::size_t n = 1, next = 1; n <= diagnostic_terms; ++n) {
    acc += normal_tail((y.value(n) + v) / beta);
    if (n == next) {
      out.partial_sums.push_back(acc);
      next *= 4;
    }
  }
  return out;
}

}  // namespace cbp
