#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cbp/error.hpp"
#include "cbp/sequences.hpp"

namespace cbp {

/// Parameters of a system of competing Brownian particles: per-rank drifts
/// g_k, squared diffusions sigma_k^2 and collision weights (q_k^+, q_k^-).
/// `size == kInfinite` marks an infinite system; truncations read the first
/// N entries of each sequence.
struct SystemSpec {
  static constexpr std::int64_t kInfinite = -1;

  std::int64_t size = 2;          // particle count N >= 2, or kInfinite
  ParamSeq drifts;                // g_k
  ParamSeq diffusions = ParamSeq::constant(1.0);  // sigma_k^2 > 0
  bool symmetric = true;          // symmetric collisions: q_k^± = 1/2
  ParamSeq q_plus = ParamSeq::constant(0.5);
  ParamSeq q_minus = ParamSeq::constant(0.5);

  bool infinite() const { return size == kInfinite; }

  double drift(std::size_t k) const { return drifts.value(k); }
  double variance(std::size_t k) const { return diffusions.value(k); }
  double sigma(std::size_t k) const;
  double qplus(std::size_t k) const { return symmetric ? 0.5 : q_plus.value(k); }
  double qminus(std::size_t k) const { return symmetric ? 0.5 : q_minus.value(k); }

  /// Atlas model: g = (1, 0, 0, ...), unit diffusions, symmetric collisions.
  static SystemSpec atlas(std::int64_t size);
  /// First M ranks have drift 1, the rest 0; unit diffusions, symmetric.
  static SystemSpec m_atlas(std::int64_t size, std::size_t m);
};

/// Initial particle configuration: named positions x (arbitrary order) or
/// ranked positions y (nondecreasing). Infinite configurations carry a tail
/// rule so that rankability and admissibility stay decidable.
struct InitialConfig {
  enum class Kind { Named, Ranked };

  Kind kind = Kind::Ranked;
  bool infinite = false;
  std::vector<double> prefix;
  TailRule tail = TailRule::power(0.0, 1.0, 1.0);  // used only if infinite

  double value(std::size_t i) const {
    return i <= prefix.size() ? prefix[i - 1] : tail.value(i);
  }
  std::vector<double> first(std::size_t n) const;

  static InitialConfig ranked(std::vector<double> y) {
    return {Kind::Ranked, false, std::move(y), TailRule::constant(0.0)};
  }
  static InitialConfig named(std::vector<double> x) {
    return {Kind::Named, false, std::move(x), TailRule::constant(0.0)};
  }
};

struct ConditionResult {
  std::string id;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ConditionResult> entries;

  bool pass() const;
  const ConditionResult* find(const std::string& id) const;
};

/// Checks every standing assumption on the parameter sequences; failures are
/// reported, never thrown.
ValidationReport validate_spec(const SystemSpec& spec);

/// Ranking permutation with the lexicographic tie rule: perm[k-1] is the index
/// (1-based) of the particle holding rank k; ties give the smaller index the
/// smaller rank.
struct Ranking {
  std::vector<std::size_t> perm;   // rank -> 1-based particle index
  std::vector<double> sorted;      // nondecreasing values
};

Ranking rank_configuration(const std::vector<double>& x);

/// Infinite variant: ranks the prefix against enough of the tail to certify
/// that the permutation is the identity beyond the returned window.
/// Throws Errc::NotRankable when the tail does not diverge to +infinity.
Ranking rank_configuration(const InitialConfig& cfg);

/// Decides the Gaussian-series admissibility of an initial configuration
/// (finite tails never qualify) and, for ranked configurations, reports the
/// equivalent condition on partial gap sums.
ValidationReport check_initial_admissible(const InitialConfig& cfg);

std::vector<double> gaps_from_positions(const std::vector<double>& y);
std::vector<double> positions_from_gaps(double y1, const std::vector<double>& z);

}  // namespace cbp
