#pragma once

#include <stdexcept>
#include <string>

namespace cbp {

enum class Errc {
  NotRankable,
  NegativeGap,
  NotSymmetric,
  NoCesaroLimit,
  NotTight,
  NotSkewSymmetric,
  LadderNotMonotone,
  NoConvergence,
  Singular,
  InsufficientSamples,
  MismatchedShapes,
  HypothesisViolated,
  InvalidArgument,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotRankable: return "NOT_RANKABLE";
    case Errc::NegativeGap: return "NEGATIVE_GAP";
    case Errc::NotSymmetric: return "NOT_SYMMETRIC";
    case Errc::NoCesaroLimit: return "NO_CESARO_LIMIT";
    case Errc::NotTight: return "NOT_TIGHT";
    case Errc::NotSkewSymmetric: return "NOT_SKEW_SYMMETRIC";
    case Errc::LadderNotMonotone: return "LADDER_NOT_MONOTONE";
    case Errc::NoConvergence: return "NO_CONVERGENCE";
    case Errc::Singular: return "SINGULAR";
    case Errc::InsufficientSamples: return "INSUFFICIENT_SAMPLES";
    case Errc::MismatchedShapes: return "MISMATCHED_SHAPES";
    case Errc::HypothesisViolated: return "HYPOTHESIS_VIOLATED";
    case Errc::InvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace cbp
