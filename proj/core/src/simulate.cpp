#include "cbp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cbp {

namespace {
constexpr double kLcpTol = 1e-10;

// Solves R[lo..hi] x = rhs in place on a contiguous index run (Thomas on the
// sub-block; the principal sub-matrix of an M-matrix is again an M-matrix).
void solve_run(const Tridiagonal& r, std::size_t lo, std::size_t hi,
               const std::vector<double>& rhs, std::vector<double>& x) {
  const std::size_t len = hi - lo + 1;
  static thread_local std::vector<double> c, d;
  c.assign(len, 0.0);
  d.assign(len, 0.0);
  double piv = r.diag[lo];
  c[0] = len > 1 ? r.super[lo] / piv : 0.0;
  d[0] = rhs[lo] / piv;
  for (std::size_t i = 1; i < len; ++i) {
    const std::size_t row = lo + i;
    piv = r.diag[row] - r.sub[row - 1] * c[i - 1];
    if (std::abs(piv) < 1e-300) throw Error(Errc::Singular, "active-set sub-solve pivot");
    if (i + 1 < len) c[i] = r.super[row] / piv;
    d[i] = (rhs[row] - r.sub[row - 1] * d[i - 1]) / piv;
  }
  for (std::size_t i = len - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
  for (std::size_t i = 0; i < len; ++i) x[lo + i] = d[i];
}

double residual_at(const Tridiagonal& r, const std::vector<double>& w,
                   const std::vector<double>& dl, std::size_t k) {
  double v = w[k] + r.diag[k] * dl[k];
  if (k > 0) v += r.sub[k - 1] * dl[k - 1];
  if (k + 1 < dl.size()) v += r.super[k] * dl[k + 1];
  return v;
}

}  // namespace

std::size_t SimConfig::steps() const {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw Error(Errc::InvalidArgument, "dt must be positive");
  if (!(horizon >= burn_in && burn_in >= 0.0))
    throw Error(Errc::InvalidArgument, "need T >= burn_in >= 0");
  if (replicas < 1) throw Error(Errc::InvalidArgument, "need replicas >= 1");
  if (output_stride < 1) throw Error(Errc::InvalidArgument, "output_stride >= 1");
}

double GapTrajectory::position(std::size_t row, std::size_t k) const {
  double y = bottom[row];
  for (std::size_t j = 0; j < k; ++j) y += gap(row, j);
  return y;
}

GapTrajectory NamedTrajectory::ranked_gaps() const {
  GapTrajectory out;
  out.dt = dt;
  out.output_stride = output_stride;
  out.n_gaps = n_particles - 1;
  out.times = times;
  out.gaps.resize(rows() * out.n_gaps);
  out.local_time.assign(rows() * out.n_gaps, 0.0);  // named scheme keeps no ledger
  out.bottom.resize(rows());
  std::vector<double> x(n_particles);
  for (std::size_t row = 0; row < rows(); ++row) {
    for (std::size_t i = 0; i < n_particles; ++i) x[i] = position(row, i);
    std::sort(x.begin(), x.end());
    out.bottom[row] = x[0];
    for (std::size_t k = 0; k + 1 < n_particles; ++k)
      out.gaps[row * out.n_gaps + k] = x[k + 1] - x[k];
  }
  return out;
}

LcpResult lcp_project(const std::vector<double>& w, const Tridiagonal& r) {
  const std::size_t d = w.size();
  if (r.dim() != d) throw Error(Errc::MismatchedShapes, "w and R disagree");
  LcpResult out;
  out.dl.assign(d, 0.0);

  if (std::all_of(w.begin(), w.end(), [](double v) { return v >= 0.0; })) {
    out.z = w;
    return out;  // interior step, no reflection
  }

  // Projected Gauss-Seidel on dl (R has unit diagonal).
  const std::size_t max_sweeps = 10 * d;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double next = std::max(0.0, out.dl[k] - residual_at(r, w, out.dl, k));
      moved = std::max(moved, std::abs(next - out.dl[k]));
      out.dl[k] = next;
    }
    if (moved < 1e-12) break;
  }

  // Active-set polish: exact complementarity on the support.
  std::vector<char> active(d, 0);
  for (std::size_t k = 0; k < d; ++k) active[k] = out.dl[k] > 0.0;
  std::vector<double> neg_w(d);
  for (std::size_t k = 0; k < d; ++k) neg_w[k] = -w[k];

  bool ok = false;
  for (std::size_t round = 0; round < 64 && !ok; ++round) {
    std::fill(out.dl.begin(), out.dl.end(), 0.0);
    for (std::size_t k = 0; k < d;) {
      if (!active[k]) {
        ++k;
        continue;
      }
      std::size_t hi = k;
      while (hi + 1 < d && active[hi + 1]) ++hi;
      solve_run(r, k, hi, neg_w, out.dl);
      k = hi + 1;
    }
    ok = true;
    for (std::size_t k = 0; k < d; ++k) {
      if (active[k] && out.dl[k] < 0.0) {
        active[k] = 0;  // pushed the wrong way: release
        ok = false;
      }
    }
    if (!ok) continue;
    for (std::size_t k = 0; k < d; ++k) {
      if (!active[k] && residual_at(r, w, out.dl, k) < -kLcpTol) {
        active[k] = 1;  // still penetrating: constrain
        ok = false;
      }
    }
  }

  out.z.resize(d);
  double worst = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    double z = residual_at(r, w, out.dl, k);
    if (active[k]) z = 0.0;  // exact on the solved support
    worst = std::max({worst, -z, -out.dl[k], std::abs(z * out.dl[k])});
    out.z[k] = std::max(z, 0.0);
    out.dl[k] = std::max(out.dl[k], 0.0);
  }
  if (!ok || worst > kLcpTol)
    throw Error(Errc::NoConvergence,
                "complementarity projection residual " + std::to_string(worst));
  return out;
}

NamedTrajectory simulate_named(const SystemSpec& spec, const std::vector<double>& x0,
                               const SimConfig& cfg, std::uint64_t stream) {
  cfg.validate();
  if (!spec.symmetric)
    throw Error(Errc::NotSymmetric, "named scheme is defined for symmetric collisions");
  const std::size_t n = x0.size();
  if (n < 1) throw Error(Errc::InvalidArgument, "empty configuration");

  NamedTrajectory traj;
  traj.dt = cfg.dt;
  traj.n_particles = n;
  traj.output_stride = cfg.output_stride;

  NoiseSource noise(cfg.seed, stream, cfg.zero_noise);
  std::vector<double> x = x0;
  const double sqdt = std::sqrt(cfg.dt);
  std::vector<std::size_t> rank_of(n);

  const std::size_t steps = cfg.steps();
  traj.times.reserve(steps / cfg.output_stride + 1);
  auto record = [&](std::size_t step) {
    traj.times.push_back(static_cast<double>(step) * cfg.dt);
    traj.positions.insert(traj.positions.end(), x.begin(), x.end());
    const Ranking rk = rank_configuration(x);
    traj.rank_perm.insert(traj.rank_perm.end(), rk.perm.begin(), rk.perm.end());
  };
  record(0);

  for (std::size_t step = 1; step <= steps; ++step) {
    const Ranking rk = rank_configuration(x);
    for (std::size_t k = 0; k < n; ++k) rank_of[rk.perm[k] - 1] = k + 1;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = rank_of[i];
      x[i] += spec.drift(k) * cfg.dt + spec.sigma(k) * sqdt * noise.gaussian(i + 1);
    }
    if (step % cfg.output_stride == 0) record(step);
  }
  return traj;
}

GapTrajectory simulate_ranked_gaps(const SystemSpec& spec, const std::vector<double>& z0,
                                   const SimConfig& cfg, std::uint64_t stream,
                                   double y1_start) {
  cfg.validate();
  const std::size_t d = z0.size();
  const std::size_t n = d + 1;
  if (n < 2) throw Error(Errc::InvalidArgument, "need at least one gap");
  for (double z : z0)
    if (z < 0.0) throw Error(Errc::NegativeGap, "initial gaps must be nonnegative");

  const ReflectionData rd = build_reflection_data(spec, n);
  GapTrajectory traj;
  traj.dt = cfg.dt;
  traj.n_gaps = d;
  traj.output_stride = cfg.output_stride;

  NoiseSource noise(cfg.seed, stream, cfg.zero_noise);
  std::vector<double> z = z0;
  std::vector<double> cum_l(d, 0.0);
  double y1 = y1_start;
  const double sqdt = std::sqrt(cfg.dt);

  std::vector<double> sigma(n);
  for (std::size_t k = 0; k < n; ++k) sigma[k] = spec.sigma(k + 1);
  std::vector<double> xi(n), w(d);

  const std::size_t steps = cfg.steps();
  auto record = [&](std::size_t step) {
    traj.times.push_back(static_cast<double>(step) * cfg.dt);
    traj.gaps.insert(traj.gaps.end(), z.begin(), z.end());
    traj.local_time.insert(traj.local_time.end(), cum_l.begin(), cum_l.end());
    traj.bottom.push_back(y1);
  };
  record(0);

  for (std::size_t step = 1; step <= steps; ++step) {
    for (std::size_t k = 0; k < n; ++k) xi[k] = noise.gaussian(k + 1);
    for (std::size_t k = 0; k < d; ++k)
      w[k] = z[k] + rd.mu[k] * cfg.dt + sqdt * (sigma[k + 1] * xi[k + 1] - sigma[k] * xi[k]);
    LcpResult step_result = lcp_project(w, rd.reflection);
    z.swap(step_result.z);
    for (std::size_t k = 0; k < d; ++k) cum_l[k] += step_result.dl[k];
    y1 += spec.drift(1) * cfg.dt + sigma[0] * sqdt * xi[0] -
          spec.qminus(1) * step_result.dl[0];
    if (step % cfg.output_stride == 0) record(step);
  }
  return traj;
}

std::pair<GapTrajectory, GapTrajectory> simulate_coupled(
    const SystemSpec& spec_a, const SystemSpec& spec_b, const std::vector<double>& z0_a,
    const std::vector<double>& z0_b, const SimConfig& cfg, std::uint64_t stream) {
  // Identical (seed, stream) means identical per-rank increments: the two
  // runs share driving noise on channels 1..min(N_a, N_b).
  GapTrajectory a = simulate_ranked_gaps(spec_a, z0_a, cfg, stream);
  GapTrajectory b = simulate_ranked_gaps(spec_b, z0_b, cfg, stream);
  return {std::move(a), std::move(b)};
}

std::vector<GapTrajectory> truncation_ladder_sim(const SystemSpec& spec,
                                                 const InitialConfig& y0,
                                                 const std::vector<std::size_t>& ns,
                                                 const SimConfig& cfg,
                                                 std::uint64_t stream) {
  if (!std::is_sorted(ns.begin(), ns.end()) || ns.empty() || ns.front() < 2)
    throw Error(Errc::InvalidArgument, "need an increasing grid of sizes >= 2");
  std::vector<GapTrajectory> out;
  out.reserve(ns.size());
  for (std::size_t n : ns) {
    const std::vector<double> y = y0.first(n);
    if (!std::is_sorted(y.begin(), y.end()))
      throw Error(Errc::NegativeGap, "initial positions must be ranked");
    out.push_back(simulate_ranked_gaps(spec, gaps_from_positions(y), cfg, stream, y[0]));
  }
  return out;
}

}  // namespace cbp
