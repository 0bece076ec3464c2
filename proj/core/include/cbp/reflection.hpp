#pragma once

#include <cstddef>
#include <vector>

#include "cbp/model.hpp"
#include "cbp/tridiagonal.hpp"

namespace cbp {

/// Gap-process SRBM data for an N-particle system: reflection matrix R,
/// drift vector mu and covariance matrix A, all of dimension N-1.
///   R: unit diagonal, R[k][k+1] = -q^-_{k+2}, R[k+1][k] = -q^+_{k+2}
///      (0-based storage; in 1-based rank terms row k has -q^+_k below and
///      -q^-_{k+1} above the diagonal)
///   mu_k = g_{k+1} - g_k
///   A: tridiagonal with A_kk = sigma_k^2 + sigma_{k+1}^2 and
///      A_{k,k+1} = -sigma_{k+1}^2; positive definite.
struct ReflectionData {
  std::size_t n_particles = 0;
  Tridiagonal reflection;   // R
  std::vector<double> mu;   // drift of the gap process
  Tridiagonal covariance;   // A

  std::size_t dim() const { return mu.size(); }  // N - 1
};

ReflectionData build_reflection_data(const SystemSpec& spec, std::size_t n);

/// Sign classification of the solved components of R v = mu with a dead band:
/// strictly negative only counts beyond 1e-14, so a zero-drift system can
/// never sneak through as tight.
enum class SignClass { Negative, Indeterminate, Positive };

struct TightnessResult {
  bool tight = false;
  bool indeterminate = false;            // some component sat inside the dead band
  std::vector<double> neg_r_inv_mu;      // -R^{-1} mu
  std::vector<SignClass> component_sign; // of R^{-1} mu
};

TightnessResult tightness_check(const ReflectionData& rd);

/// Closed form for -R^{-1} mu under symmetric collisions:
///   2 * (g_1 + ... + g_k - k * mean(g_1..g_N)), k = 1..N-1.
/// Throws Errc::NotSymmetric otherwise.
std::vector<double> closed_form_neg_r_inv_mu_symmetric(const SystemSpec& spec, std::size_t n);

/// Evaluates the per-rank identity
///   (q^-_{k-1} + q^+_{k+1}) sigma_k^2 = q^-_k sigma_{k+1}^2 + q^+_k sigma_{k-1}^2
/// for k = 2..N-1 together with the matrix identity R D + D R' = 2A,
/// D = diag(A). Both use absolute tolerance 1e-12 and must agree.
bool skew_symmetry_check(const SystemSpec& spec, std::size_t n);

struct SkewSymmetryDetail {
  bool per_rank = false;
  bool matrix = false;
  double worst_per_rank = 0.0;  // max |lhs - rhs|
  double worst_matrix = 0.0;    // max |(RD + DR' - 2A)_{ij}|
};

SkewSymmetryDetail skew_symmetry_detail(const SystemSpec& spec, std::size_t n);

/// Stationary law of the gap process, defined when the system is tight and
/// skew-symmetric: a product of exponentials with rates
///   lambda_k = 2 / (sigma_k^2 + sigma_{k+1}^2) * (-R^{-1} mu)_k.
/// `rates` is empty whenever either flag is false.
struct StationaryLaw {
  std::size_t n_particles = 0;
  bool tight = false;
  bool skew_symmetric = false;
  std::vector<double> neg_r_inv_mu;
  std::vector<double> rates;

  bool defined() const { return tight && skew_symmetric; }
};

StationaryLaw stationary_rates(const SystemSpec& spec, std::size_t n);

}  // namespace cbp
