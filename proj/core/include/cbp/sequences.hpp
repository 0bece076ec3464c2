#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace cbp {

/// Analytic tail rule for an infinite real sequence. Values for indices past
/// an explicit prefix follow one of a small closed family of shapes, chosen so
/// that divergence, bounds, Cesaro limits and Gaussian-tail summability are
/// all decidable exactly:
///   Constant:  t(i) = a
///   Power:     t(i) = a + b * i^p
///   LogPower:  t(i) = a + b * (ln(i+1))^p
struct TailRule {
  enum class Kind { Constant, Power, LogPower };

  Kind kind = Kind::Constant;
  double a = 0.0;
  double b = 0.0;
  double p = 1.0;

  static TailRule constant(double value) { return {Kind::Constant, value, 0.0, 1.0}; }
  static TailRule power(double a, double b, double p) { return {Kind::Power, a, b, p}; }
  static TailRule log_power(double a, double b, double p) { return {Kind::LogPower, a, b, p}; }

  double value(std::size_t i) const;  // i >= 1

  // Tail treated as constant when the varying part is absent.
  bool effectively_constant() const { return kind == Kind::Constant || b == 0.0 || p == 0.0; }
  double constant_value() const;  // only valid if effectively_constant()

  bool diverges_to_plus_infinity() const;
  // Infimum / supremum over i >= start (start >= 1); may be +-infinity.
  double inf_from(std::size_t start) const;
  double sup_from(std::size_t start) const;
  // Does sum_i exp(-alpha * t(i)^2) converge for EVERY alpha > 0?
  bool gaussian_series_admissible() const;
  // lim_{N->inf} (1/N) sum_{i<=N} t(i), when it exists and is finite.
  std::optional<double> cesaro_limit() const;
  // Tail is nondecreasing from index `start` on.
  bool nondecreasing_from(std::size_t start) const;
};

/// A real sequence indexed by k = 1, 2, ...: an explicit prefix followed by a
/// TailRule. Finite systems simply never read past their size.
struct ParamSeq {
  std::vector<double> prefix;
  TailRule tail = TailRule::constant(0.0);

  static ParamSeq constant(double value) { return {{}, TailRule::constant(value)}; }
  static ParamSeq of(std::vector<double> prefix, double tail_value) {
    return {std::move(prefix), TailRule::constant(tail_value)};
  }

  double value(std::size_t k) const {
    return k <= prefix.size() ? prefix[k - 1] : tail.value(k);
  }
  std::vector<double> first(std::size_t n) const;

  double inf() const;
  double sup() const;
  std::optional<double> cesaro_limit() const;
};

inline constexpr double kInfiniteRate = std::numeric_limits<double>::infinity();

}  // namespace cbp
