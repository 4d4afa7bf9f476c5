#pragma once

#include <stdexcept>
#include <string>

namespace bcode {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define BCODE_DEFINE_ERROR(NAME)                            \
  class NAME : public Error {                               \
   public:                                                  \
    explicit NAME(const std::string& what) : Error(what) {} \
  }

BCODE_DEFINE_ERROR(CycleDetected);
BCODE_DEFINE_ERROR(TableSizeMismatch);
BCODE_DEFINE_ERROR(NegativeProbability);
BCODE_DEFINE_ERROR(CptNotNormalized);
BCODE_DEFINE_ERROR(CardinalityMismatch);
BCODE_DEFINE_ERROR(VariableNotInScope);
BCODE_DEFINE_ERROR(EvidenceContradiction);
BCODE_DEFINE_ERROR(TooLargeForBruteForce);
BCODE_DEFINE_ERROR(ZeroEvidenceProbability);
BCODE_DEFINE_ERROR(OrderingMismatch);
BCODE_DEFINE_ERROR(OutOfMemoryBudget);
BCODE_DEFINE_ERROR(OrderingViolatesHypothesisPrefix);
BCODE_DEFINE_ERROR(NumericalCollapse);
BCODE_DEFINE_ERROR(NotSystematic);
BCODE_DEFINE_ERROR(EmptyParityColumn);
BCODE_DEFINE_ERROR(InvalidParams);
BCODE_DEFINE_ERROR(LengthMismatch);
BCODE_DEFINE_ERROR(ParseError);

#undef BCODE_DEFINE_ERROR

}  // namespace bcode
