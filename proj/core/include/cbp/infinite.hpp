#pragma once

#include <cstddef>
#include <vector>

#include "cbp/reflection.hpp"
#include "cbp/sequences.hpp"

namespace cbp {

/// Finite-size stationary rates lambda_k^{(N)} tabulated over a truncation
/// grid. Columns are nondecreasing in N; the infinite-system candidate rates
/// are their limits.
struct LambdaLadder {
  enum class ColumnStatus {
    Converged,     // last two table entries differ by < 1e-6 relative
    Extrapolated,  // 1/N extrapolation is stable to < 1e-6 relative
    Increasing,    // still visibly moving on this grid
  };

  std::vector<std::size_t> truncation_sizes;       // increasing N grid
  std::vector<std::vector<double>> table;          // table[j][k-1] = lambda_k^{(N_j)}
  std::vector<double> limit;                       // per-k best estimate
  std::vector<ColumnStatus> status;

  std::size_t columns() const { return limit.size(); }
};

/// Subset of the grid on which the finite gap process is tight (i.e. has a
/// stationary distribution): the truncation sizes witnessing the standing
/// assumption of the infinite construction.
std::vector<std::size_t> assumption1_scan(const SystemSpec& spec,
                                          const std::vector<std::size_t>& ns);

/// Builds the rate table over `ns` via stationary_rates. Requires skew
/// symmetry and tightness at every N (Errc::NotSkewSymmetric /
/// Errc::NotTight otherwise) and asserts column monotonicity to 1e-10
/// (Errc::LadderNotMonotone).
///
/// Per column k the limit estimate is: the last entry when the column has
/// already settled (Converged); otherwise the 1/N Richardson extrapolation
/// from the last two entries, flagged Extrapolated when two consecutive
/// extrapolations agree to 1e-6 relative and Increasing when not.
LambdaLadder build_lambda_ladder(const SystemSpec& spec, const std::vector<std::size_t>& ns);

/// Analytic infinite-system rates for symmetric collisions with constant
/// diffusion coefficient and an eventually-constant drift sequence:
///   lambda_k = 2k/sigma^2 * (gbar_k - gbar_inf),
/// returned as prefix + constant tail. Throws Errc::NotSymmetric,
/// Errc::InvalidArgument (non-constant sigma^2), or Errc::NoCesaroLimit
/// (drift tail with no closed-form Cesaro mean).
///
/// When a ladder is supplied, limits of Converged/Extrapolated columns are
/// checked against the rule to 1e-4 relative.
ParamSeq lambda_limit_symmetric(const SystemSpec& spec, const LambdaLadder* ladder = nullptr);

/// Whether the candidate product-of-exponentials law puts full mass on
/// admissible gap sequences (partial sums satisfying the Gaussian-series
/// condition).
struct PiAdmissibility {
  enum class Verdict { Satisfied, NotSatisfied, Undecided };

  bool sup_lambda_finite = false;
  bool sum_inv_sq_finite = false;   // meaningful only when sup is infinite
  int la_condition = -1;            // 1 / 0 when evaluated, -1 when not applicable
  Verdict verdict = Verdict::Undecided;
};

/// Decision procedure:
///   (i)  sup_n lambda_n < infinity            -> Satisfied
///   (ii) else if sum lambda_n^{-2} < infinity -> Satisfied iff
///        sum exp(-alpha * Lambda_n^2) < infinity for all alpha > 0,
///        where Lambda_n = sum_{k<=n} 1/lambda_k
///   else Undecided.
/// Rates must be positive; +infinity entries (point mass at zero gap) are
/// allowed and contribute zero to Lambda_n.
PiAdmissibility check_pi_admissible(const ParamSeq& rates);

}  // namespace cbp
