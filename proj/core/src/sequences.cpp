#include "cbp/sequences.hpp"

#include <algorithm>
#include <cmath>

namespace cbp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double TailRule::value(std::size_t i) const {
  switch (kind) {
    case Kind::Constant:
      return a;
    case Kind::Power:
      return a + b * std::pow(static_cast<double>(i), p);
    case Kind::LogPower:
      return a + b * std::pow(std::log(static_cast<double>(i) + 1.0), p);
  }
  return a;
}

double TailRule::constant_value() const {
  if (kind == Kind::Constant) return a;
  if (b == 0.0) return a;
  return a + b;  // p == 0: i^0 = ln(...)^0 = 1
}

bool TailRule::diverges_to_plus_infinity() const {
  if (effectively_constant()) return false;
  return b > 0.0 && p > 0.0;  // both families increase without bound iff b, p > 0
}

bool TailRule::nondecreasing_from(std::size_t) const {
  if (effectively_constant()) return true;
  // i^p and ln(i+1)^p are monotone in i for fixed p; direction set by sign(b) xor sign(p).
  return (b > 0.0) == (p > 0.0);
}

double TailRule::inf_from(std::size_t start) const {
  if (effectively_constant()) return constant_value();
  if (nondecreasing_from(start)) return value(start);
  // Decreasing: limit value. p < 0 tails settle at a; p > 0 with b < 0 run to -inf.
  return p > 0.0 ? -kInf : a;
}

double TailRule::sup_from(std::size_t start) const {
  if (effectively_constant()) return constant_value();
  if (!nondecreasing_from(start)) return value(start);
  return p > 0.0 ? kInf : a;
}

bool TailRule::gaussian_series_admissible() const {
  // Decides sum_i exp(-alpha * t(i)^2) < infinity for all alpha > 0.
  if (effectively_constant()) return false;  // terms do not vanish
  if (!diverges_to_plus_infinity()) return false;
  switch (kind) {
    case Kind::Power:
      // t(i) ~ b i^p: exp(-alpha b^2 i^{2p}) is summable for every alpha, p > 0.
      return true;
    case Kind::LogPower:
      // t(i)^2 ~ b^2 (ln i)^{2p}: terms are i^{-alpha b^2 (ln i)^{2p-1}}.
      // Summable for all alpha iff the exponent outgrows ln i, i.e. 2p > 1.
      return p > 0.5;
    case Kind::Constant:
      return false;
  }
  return false;
}

std::optional<double> TailRule::cesaro_limit() const {
  if (effectively_constant()) return constant_value();
  if (p < 0.0) return a;  // t(i) -> a fast enough for the Cesaro mean
  return std::nullopt;  // b != 0, p > 0: averages drift to +-infinity
}

std::vector<double> ParamSeq::first(std::size_t n) const {
  std::vector<double> out(n);
  for (std::size_t k = 1; k <= n; ++k) out[k - 1] = value(k);
  return out;
}

double ParamSeq::inf() const {
  double lo = tail.inf_from(prefix.size() + 1);
  for (double v : prefix) lo = std::min(lo, v);
  return lo;
}

double ParamSeq::sup() const {
  double hi = tail.sup_from(prefix.size() + 1);
  for (double v : prefix) hi = std::max(hi, v);
  return hi;
}

std::optional<double> ParamSeq::cesaro_limit() const {
  return tail.cesaro_limit();  // a finite prefix never moves a Cesaro mean
}

}  // namespace cbp
