#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cbp/model.hpp"
#include "cbp/noise.hpp"
#include "cbp/reflection.hpp"

namespace cbp {

struct SimConfig {
  enum class Scheme { NamedEuler, GapSrbm };

  double dt = 1e-3;
  double horizon = 1.0;   // total simulated time T
  double burn_in = 0.0;   // prefix discarded by the statistics layer
  std::uint64_t seed = 0;
  std::size_t replicas = 1;
  Scheme scheme = Scheme::GapSrbm;
  std::size_t output_stride = 1;  // record every n-th step
  bool zero_noise = false;        // diagnostic: force all increments to 0

  std::size_t steps() const;
  void validate() const;
};

/// Time-discretized gap process: gap vectors, cumulative collision local
/// times and the bottom-particle path, recorded every output_stride steps
/// (index 0 is the initial state).
struct GapTrajectory {
  double dt = 0.0;
  std::size_t n_gaps = 0;
  std::size_t output_stride = 1;
  std::vector<double> times;
  std::vector<double> gaps;        // row-major: times.size() x n_gaps, >= 0
  std::vector<double> local_time;  // cumulative per pair, same shape
  std::vector<double> bottom;      // Y_1

  std::size_t rows() const { return times.size(); }
  double gap(std::size_t row, std::size_t k) const { return gaps[row * n_gaps + k]; }
  double local(std::size_t row, std::size_t k) const { return local_time[row * n_gaps + k]; }
  /// Ranked position Y_{k+1} = Y_1 + Z_1 + ... + Z_k (k = 0 gives Y_1).
  double position(std::size_t row, std::size_t k) const;
};

struct NamedTrajectory {
  double dt = 0.0;
  std::size_t n_particles = 0;
  std::size_t output_stride = 1;
  std::vector<double> times;
  std::vector<double> positions;       // row-major: times.size() x n
  std::vector<std::size_t> rank_perm;  // row-major: rank -> 1-based name

  std::size_t rows() const { return times.size(); }
  double position(std::size_t row, std::size_t i) const {
    return positions[row * n_particles + i];
  }
  /// Gap process of the ranked view.
  GapTrajectory ranked_gaps() const;
};

/// One reflected Euler step: given the free-motion proposal w, finds z >= 0
/// and local-time pushes dl >= 0 with z = w + R dl and z'dl = 0 (the discrete
/// Skorokhod map, a linear complementarity problem). Projected Gauss-Seidel
/// sweeps (at most 10 d) followed by an active-set polish solve; tol 1e-10.
struct LcpResult {
  std::vector<double> z;
  std::vector<double> dl;
};

LcpResult lcp_project(const std::vector<double>& w, const Tridiagonal& reflection);

/// Named-particle Euler scheme (symmetric collisions only): each step ranks
/// the configuration, then moves particle i by its current rank's drift and
/// diffusion with a per-name Gaussian increment.
NamedTrajectory simulate_named(const SystemSpec& spec, const std::vector<double>& x0,
                               const SimConfig& cfg, std::uint64_t stream = 0);

/// Gap-level reflected Euler scheme with per-step complementarity projection.
/// Rank-channel noise: gap k moves by sigma_{k+1} xi_{k+1} - sigma_k xi_k, so
/// the step covariance is exactly A dt and channels couple across systems.
GapTrajectory simulate_ranked_gaps(const SystemSpec& spec, const std::vector<double>& z0,
                                   const SimConfig& cfg, std::uint64_t stream = 0,
                                   double y1_start = 0.0);

/// Two systems driven by identical rank-channel increments.
std::pair<GapTrajectory, GapTrajectory> simulate_coupled(
    const SystemSpec& spec_a, const SystemSpec& spec_b, const std::vector<double>& z0_a,
    const std::vector<double>& z0_b, const SimConfig& cfg, std::uint64_t stream = 0);

/// Finite truncations of an infinite system sharing rank channels, one gap
/// trajectory per requested size.
std::vector<GapTrajectory> truncation_ladder_sim(const SystemSpec& spec,
                                                 const InitialConfig& y0,
                                                 const std::vector<std::size_t>& ns,
                                                 const SimConfig& cfg,
                                                 std::uint64_t stream = 0);

}  // namespace cbp
