#include "cbp/infinite.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cbp {

namespace {
constexpr double kMonotoneTol = 1e-10;
constexpr double kSettleRelTol = 1e-6;
constexpr double kRuleMatchRelTol = 1e-4;

double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

// Limit of lambda(N) assuming lambda(N) = L - c/N, from the last two entries.
double richardson(double n_prev, double v_prev, double n_last, double v_last) {
  return v_last + (v_last - v_prev) * n_prev / (n_last - n_prev);
}
}  // namespace

std::vector<std::size_t> assumption1_scan(const SystemSpec& spec,
                                          const std::vector<std::size_t>& ns) {
  std::vector<std::size_t> passing;
  for (std::size_t n : ns) {
    const ReflectionData rd = build_reflection_data(spec, n);
    if (tightness_check(rd).tight) passing.push_back(n);
  }
  return passing;
}

LambdaLadder build_lambda_ladder(const SystemSpec& spec, const std::vector<std::size_t>& ns) {
  if (ns.size() < 2 || !std::is_sorted(ns.begin(), ns.end()))
    throw Error(Errc::InvalidArgument, "need an increasing grid of at least two sizes");

  LambdaLadder ladder;
  ladder.truncation_sizes = ns;
  for (std::size_t n : ns) {
    const StationaryLaw law = stationary_rates(spec, n);
    if (!law.skew_symmetric)
      throw Error(Errc::NotSkewSymmetric, "rates undefined at N = " + std::to_string(n));
    if (!law.tight)
      throw Error(Errc::NotTight, "no stationary law at N = " + std::to_string(n));
    ladder.table.push_back(law.rates);
  }

  const std::size_t cols = ns.back() - 1;
  ladder.limit.resize(cols);
  ladder.status.resize(cols);
  for (std::size_t k = 0; k < cols; ++k) {
    // Rows covering column k, i.e. N > k+1.
    std::vector<double> entries;
    std::vector<double> sizes;
    for (std::size_t j = 0; j < ns.size(); ++j) {
      if (ns[j] >= k + 2) {
        entries.push_back(ladder.table[j][k]);
        sizes.push_back(static_cast<double>(ns[j]));
      }
    }
    for (std::size_t j = 0; j + 1 < entries.size(); ++j) {
      if (entries[j] > entries[j + 1] + kMonotoneTol)
        throw Error(Errc::LadderNotMonotone,
                    "column " + std::to_string(k + 1) + " decreases between N = " +
                        std::to_string(std::size_t(sizes[j])) + " and N = " +
                        std::to_string(std::size_t(sizes[j + 1])));
    }

    const std::size_t m = entries.size();
    if (m == 1) {
      ladder.limit[k] = entries[0];
      ladder.status[k] = LambdaLadder::ColumnStatus::Increasing;
      continue;
    }
    if (rel_diff(entries[m - 1], entries[m - 2]) < kSettleRelTol) {
      ladder.limit[k] = entries[m - 1];
      ladder.status[k] = LambdaLadder::ColumnStatus::Converged;
      continue;
    }
    const double last = richardson(sizes[m - 2], entries[m - 2], sizes[m - 1], entries[m - 1]);
    ladder.limit[k] = last;
    if (m >= 3) {
      const double prev =
          richardson(sizes[m - 3], entries[m - 3], sizes[m - 2], entries[m - 2]);
      ladder.status[k] = rel_diff(last, prev) < kSettleRelTol
                             ? LambdaLadder::ColumnStatus::Extrapolated
                             : LambdaLadder::ColumnStatus::Increasing;
    } else {
      ladder.status[k] = LambdaLadder::ColumnStatus::Increasing;
    }
  }
  return ladder;
}

ParamSeq lambda_limit_symmetric(const SystemSpec& spec, const LambdaLadder* ladder) {
  if (!spec.symmetric)
    throw Error(Errc::NotSymmetric, "analytic rate rule requires symmetric collisions");

  const double s2 = spec.diffusions.tail.effectively_constant()
                        ? spec.diffusions.tail.constant_value()
                        : 0.0;
  if (s2 <= 0.0)
    throw Error(Errc::InvalidArgument, "analytic rate rule requires constant sigma^2 tail");
  for (std::size_t k = 1; k <= spec.diffusions.prefix.size(); ++k)
    if (spec.variance(k) != s2)
      throw Error(Errc::InvalidArgument, "analytic rate rule requires constant sigma^2");

  if (!spec.drifts.tail.effectively_constant())
    throw Error(Errc::NoCesaroLimit, "drift tail has no closed-form Cesaro mean");
  const double g_inf = spec.drifts.tail.constant_value();

  const std::size_t m = spec.drifts.prefix.size();
  ParamSeq rule;
  rule.prefix.resize(m);
  double partial = 0.0;
  for (std::size_t k = 1; k <= m; ++k) {
    partial += spec.drift(k);
    rule.prefix[k - 1] = 2.0 / s2 * (partial - static_cast<double>(k) * g_inf);
  }
  rule.tail = TailRule::constant(2.0 / s2 * (partial - static_cast<double>(m) * g_inf));

  if (ladder) {
    for (std::size_t k = 0; k < ladder->columns(); ++k) {
      if (ladder->status[k] == LambdaLadder::ColumnStatus::Increasing) continue;
      const double want = rule.value(k + 1);
      if (rel_diff(want, ladder->limit[k]) > kRuleMatchRelTol)
        throw Error(Errc::InvalidArgument,
                    "ladder limit " + std::to_string(ladder->limit[k]) + " at k = " +
                        std::to_string(k + 1) + " disagrees with analytic rate " +
                        std::to_string(want));
    }
  }
  return rule;
}

PiAdmissibility check_pi_admissible(const ParamSeq& rates) {
  // Positivity: +infinity entries are legal (zero-width gaps), zero
  // and negative rates are not, anywhere in prefix or tail.
  for (std::size_t k = 1; k <= rates.prefix.size() + 2; ++k)
    if (!(rates.value(k) > 0.0))
      throw Error(Errc::InvalidArgument, "rates must be strictly positive");
  {
    const std::size_t start = rates.prefix.size() + 1;
    const TailRule& t = rates.tail;
    const bool tail_positive =
        t.effectively_constant()
            ? t.constant_value() > 0.0
            : t.value(start) > 0.0 && (t.nondecreasing_from(start) || t.inf_from(start) >= 0.0);
    if (!tail_positive)
      throw Error(Errc::InvalidArgument, "rate tail leaves the positive axis");
  }

  PiAdmissibility out;
  const double sup = rates.sup();
  out.sup_lambda_finite = std::isfinite(sup);
  if (out.sup_lambda_finite) {
    out.verdict = PiAdmissibility::Verdict::Satisfied;
    return out;
  }

  // Branch (ii): need sum lambda_n^{-2} < infinity over the tail.
  const TailRule& t = rates.tail;
  const bool tail_diverges = t.diverges_to_plus_infinity();
  const bool power_tail = tail_diverges && t.kind == TailRule::Kind::Power;
  out.sum_inv_sq_finite = power_tail && t.p > 0.5;
  if (!out.sum_inv_sq_finite) {
    out.verdict = PiAdmissibility::Verdict::Undecided;
    return out;
  }

  // Lambda_n = sum 1/lambda_k: bounded for p > 1 (terms do not vanish in the
  // Gaussian series), logarithmic or power growth for p <= 1 (series
  // converges for every alpha).
  const bool la_holds = t.p <= 1.0;
  out.la_condition = la_holds ? 1 : 0;
  out.verdict = la_holds ? PiAdmissibility::Verdict::Satisfied
                         : PiAdmissibility::Verdict::NotSatisfied;
  return out;
}

}  // namespace cbp
