#include "cbp/reflection.hpp"

#include <algorithm>
#include <cmath>

namespace cbp {

namespace {
constexpr double kStructuralTol = 1e-12;
constexpr double kCrossCheckRelTol = 1e-10;
constexpr double kDeadBand = 1e-14;
}  // namespace

ReflectionData build_reflection_data(const SystemSpec& spec, std::size_t n) {
  if (n < 2) throw Error(Errc::InvalidArgument, "need at least 2 particles");
  const std::size_t d = n - 1;
  ReflectionData rd;
  rd.n_particles = n;
  rd.reflection.diag.assign(d, 1.0);
  rd.reflection.sub.resize(d - 1);
  rd.reflection.super.resize(d - 1);
  for (std::size_t i = 0; i + 1 < d; ++i) {
    // 1-based gap index k = i+1: super entry -q^-_{k+1}, sub entry -q^+_{k+1}.
    rd.reflection.super[i] = -spec.qminus(i + 2);
    rd.reflection.sub[i] = -spec.qplus(i + 2);
  }
  rd.mu.resize(d);
  for (std::size_t i = 0; i < d; ++i) rd.mu[i] = spec.drift(i + 2) - spec.drift(i + 1);
  rd.covariance.diag.resize(d);
  rd.covariance.sub.resize(d - 1);
  rd.covariance.super.resize(d - 1);
  for (std::size_t i = 0; i < d; ++i)
    rd.covariance.diag[i] = spec.variance(i + 1) + spec.variance(i + 2);
  for (std::size_t i = 0; i + 1 < d; ++i) {
    rd.covariance.super[i] = -spec.variance(i + 2);
    rd.covariance.sub[i] = -spec.variance(i + 2);
  }
  return rd;
}

TightnessResult tightness_check(const ReflectionData& rd) {
  TightnessResult out;
  std::vector<double> v = solve_tridiagonal(rd.reflection, rd.mu);  // v = R^{-1} mu
  out.neg_r_inv_mu.resize(v.size());
  out.component_sign.resize(v.size());
  out.tight = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.neg_r_inv_mu[i] = -v[i];
    if (v[i] < -kDeadBand) {
      out.component_sign[i] = SignClass::Negative;
    } else if (v[i] <= kDeadBand) {
      out.component_sign[i] = SignClass::Indeterminate;
      out.indeterminate = true;
      out.tight = false;
    } else {
      out.component_sign[i] = SignClass::Positive;
      out.tight = false;
    }
  }
  return out;
}

std::vector<double> closed_form_neg_r_inv_mu_symmetric(const SystemSpec& spec, std::size_t n) {
  if (!spec.symmetric)
    throw Error(Errc::NotSymmetric, "closed form holds for symmetric collisions only");
  double total = 0.0;
  for (std::size_t k = 1; k <= n; ++k) total += spec.drift(k);
  const double mean = total / static_cast<double>(n);
  std::vector<double> out(n - 1);
  double partial = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    partial += spec.drift(k);
    out[k - 1] = 2.0 * (partial - static_cast<double>(k) * mean);
  }
  return out;
}

SkewSymmetryDetail skew_symmetry_detail(const SystemSpec& spec, std::size_t n) {
  SkewSymmetryDetail det;
  det.per_rank = true;
  det.matrix = true;
  if (n < 3) return det;  // no interior rank: vacuously true

  for (std::size_t k = 2; k <= n - 1; ++k) {
    const double lhs = (spec.qminus(k - 1) + spec.qplus(k + 1)) * spec.variance(k);
    const double rhs =
        spec.qminus(k) * spec.variance(k + 1) + spec.qplus(k) * spec.variance(k - 1);
    det.worst_per_rank = std::max(det.worst_per_rank, std::abs(lhs - rhs));
  }
  det.per_rank = det.worst_per_rank <= kStructuralTol;

  const ReflectionData rd = build_reflection_data(spec, n);
  const std::size_t d = rd.dim();
  const std::vector<double> r = rd.reflection.dense_row_major();
  const std::vector<double> a = rd.covariance.dense_row_major();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      // (R D + D R')_{ij} = R_ij * A_jj + A_ii * R_ji
      const double lhs = r[i * d + j] * a[j * d + j] + a[i * d + i] * r[j * d + i];
      det.worst_matrix = std::max(det.worst_matrix, std::abs(lhs - 2.0 * a[i * d + j]));
    }
  }
  det.matrix = det.worst_matrix <= kStructuralTol;
  return det;
}

bool skew_symmetry_check(const SystemSpec& spec, std::size_t n) {
  const SkewSymmetryDetail det = skew_symmetry_detail(spec, n);
  if (det.per_rank != det.matrix)
    throw Error(Errc::InvalidArgument,
                "per-rank and matrix skew-symmetry criteria disagree (worst " +
                    std::to_string(det.worst_per_rank) + " vs " +
                    std::to_string(det.worst_matrix) + ")");
  return det.per_rank;
}

StationaryLaw stationary_rates(const SystemSpec& spec, std::size_t n) {
  StationaryLaw law;
  law.n_particles = n;
  const ReflectionData rd = build_reflection_data(spec, n);
  const TightnessResult tr = tightness_check(rd);
  law.tight = tr.tight;
  law.neg_r_inv_mu = tr.neg_r_inv_mu;
  law.skew_symmetric = skew_symmetry_check(spec, n);
  if (!law.defined()) return law;

  const std::size_t d = rd.dim();
  law.rates.resize(d);
  for (std::size_t k = 0; k < d; ++k)
    law.rates[k] = 2.0 / rd.covariance.diag[k] * tr.neg_r_inv_mu[k];

  if (spec.symmetric) {
    // Cross-check against the closed form lambda_k = 4k/(s_k^2+s_{k+1}^2)(gbar_k - gbar_N).
    double total = 0.0;
    for (std::size_t k = 1; k <= n; ++k) total += spec.drift(k);
    const double gbar_n = total / static_cast<double>(n);
    double partial = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
      partial += spec.drift(k);
      const double gbar_k = partial / static_cast<double>(k);
      const double closed =
          4.0 * static_cast<double>(k) / rd.covariance.diag[k - 1] * (gbar_k - gbar_n);
      const double scale = std::max({1.0, std::abs(closed), std::abs(law.rates[k - 1])});
      if (std::abs(closed - law.rates[k - 1]) > kCrossCheckRelTol * scale)
        throw Error(Errc::InvalidArgument,
                    "symmetric closed form disagrees with linear solve at rank " +
                        std::to_string(k));
    }
  }
  return law;
}

}  // namespace cbp
