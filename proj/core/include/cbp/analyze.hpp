#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cbp/reflection.hpp"
#include "cbp/sequences.hpp"
#include "cbp/simulate.hpp"

namespace cbp {

/// Upper tail of the standard normal distribution.
double normal_tail(double u);

/// Per-gap stationary statistics against a product-of-exponentials target.
struct GapStats {
  std::vector<std::size_t> count;        // post-burn-in, post-stride samples
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> ks;                // KS distance to Exp(lambda_k)
  std::vector<std::size_t> stride_steps; // decorrelation stride used, in steps
  std::vector<double> grid;              // shared quantile levels of the ECDF
  std::vector<std::vector<double>> ecdf; // per k, on grid points of the target
};

/// Samples are taken after `burn_in` time, one per decorrelation stride;
/// the default stride is max(1, round(1/(lambda_k dt) / 10)) steps per gap.
/// Throws Errc::InsufficientSamples below 100 samples for some gap.
GapStats empirical_gap_stats(const GapTrajectory& traj, const StationaryLaw& law,
                             double burn_in, std::size_t stride_steps = 0);

/// Kolmogorov-Smirnov distance of a sample against Exp(rate).
double ks_to_exponential(std::vector<double> samples, double rate);

/// Marginal (per-coordinate) stochastic-dominance check: A is below B when
/// ECDF_A(y) >= ECDF_B(y) - eps at every grid point, with eps a two-sample
/// DKW bound at the given confidence. A surrogate for the multivariate
/// upper-orthant order: necessary, not sufficient.
struct DominanceReport {
  std::vector<bool> a_below_b;
  std::vector<double> worst_margin;  // min over grid of ECDF_A - ECDF_B
  double epsilon = 0.0;
};

DominanceReport dominance_check(const std::vector<std::vector<double>>& samples_a,
                                const std::vector<std::vector<double>>& samples_b,
                                const std::vector<double>& grid, double confidence = 0.99);

/// Pathwise comparison inequalities checkable on coupled trajectories.
enum class Inequality {
  RankedPositionsLe,   // Y_k(t) of A <= Y_k(t) of B, all shared k
  GapsLe,              // Z_k(t) of A <= Z_k(t) of B
  LocalTimeIncrGe,     // L increments of A >= L increments of B on windows
  LocalTimeIncrLe,     // mirror image, for truncation ladders
};

std::string inequality_id(Inequality which);

struct CouplingReport {
  std::string inequality;
  double slack = 0.0;
  std::vector<double> violation_fraction;  // per shared coordinate
  std::vector<double> max_violation;       // worst overshoot beyond slack

  double worst_fraction() const;
};

/// Numerical slack for pathwise inequality checks on a discretized scheme.
double comparison_slack(const SystemSpec& spec, std::size_t n, double dt);

/// Checks the selected inequality on every recorded time (or every dyadic
/// window for local-time clauses) over the shared coordinate range.
/// Trajectories must share the time grid (Errc::MismatchedShapes).
CouplingReport comparison_report(const GapTrajectory& a, const GapTrajectory& b,
                                 Inequality which, double slack);

/// Collision condition (q^-_{k-1} + q^+_{k+1}) s_k^2 >= q^-_k s_{k+1}^2 +
/// q^+_k s_{k-1}^2 for k = 2..K-1; under symmetric collisions this is
/// midpoint concavity of the diffusion sequence, asserted to agree.
struct CollisionConditions {
  std::vector<std::size_t> ranks;  // interior ranks k
  std::vector<bool> holds;

  bool all_hold() const;
};

CollisionConditions collision_condition_check(const SystemSpec& spec, std::size_t n_ranks);

/// Near-collision occupation statistics: for each interior rank, the number
/// of recorded steps with both adjacent gaps below delta.
struct CollisionReport {
  std::vector<double> deltas;
  std::vector<std::size_t> ranks;                 // middle rank of the triple
  std::vector<std::vector<std::size_t>> counts;   // counts[rank][delta]
  std::size_t rows_scanned = 0;
};

CollisionReport near_collision_stats(const GapTrajectory& traj,
                                     const std::vector<double>& deltas);

/// Running-minimum tail bound: for an Ito process with drift >= g_lo and
/// |diffusion| <= sigma_hi started at v0,
///   P(min_{[0,T]} V <= x) <= 2 Psi((v0 - x - (g_lo T)_-) / (sigma_hi sqrt(T))).
/// Requires x <= v0 + g_lo T (Errc::HypothesisViolated).
double min_tail_bound(double v0, double g_lo, double sigma_hi, double x, double horizon);

/// Two-sided variant: for |drift| <= g_abs and |diffusion| <= sigma_hi,
///   P(max_{[0,T]} |V| >= x) <= 4 Psi((x - |v0| - g_abs T) / (sigma_hi sqrt(T)))
/// for x >= |v0| + g_abs T.
double exit_tail_bound(double v0, double g_abs, double sigma_hi, double x, double horizon);

struct TailBoundCheck {
  double empirical = 0.0;
  double bound = 0.0;
  double std_error = 0.0;
  std::size_t paths = 0;
  bool within = false;  // empirical <= bound + 3 * std_error
};

/// Monte Carlo on the saturating worst case (constant drift g_lo, constant
/// diffusion sigma_hi); the discrete minimum only undershoots the continuous
/// one, so the check is conservative.
TailBoundCheck tail_bound_check(double v0, double g_lo, double sigma_hi, double x,
                                double horizon, std::size_t paths, std::size_t steps,
                                std::uint64_t seed);

/// Convergence/divergence of sum_n Psi((y_n + v) / beta) for a tail rule y.
struct SeriesVerdict {
  bool precondition_seriesalpha = false;  // y diverges + Gaussian series admissible
  bool converges = false;
  std::string reason;
  std::vector<double> partial_sums;  // diagnostics at logarithmic checkpoints
};

SeriesVerdict psi_series_bound(const TailRule& y, double v, double beta,
                               std::size_t diagnostic_terms = 0);

}  // namespace cbp
