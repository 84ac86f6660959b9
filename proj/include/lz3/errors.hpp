#pragma once

#include <stdexcept>
#include <string>

namespace lz3 {

// Base for everything thrown by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Configuration / input-file problems (CLI exit code 2).
struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error("config error: " + msg) {}
};

// Numerical failures (CLI exit code 3). `kind` is the stable error name.
struct NumericalError : Error {
  NumericalError(const std::string& kind_, const std::string& msg)
      : Error(kind_ + ": " + msg), kind(kind_) {}
  std::string kind;
};

#define LZ3_DEFINE_NUMERICAL_ERROR(NAME)                                 \
  struct NAME : NumericalError {                                         \
    explicit NAME(const std::string& msg) : NumericalError(#NAME, msg) {} \
  }

LZ3_DEFINE_NUMERICAL_ERROR(NonHermitianInput);
LZ3_DEFINE_NUMERICAL_ERROR(NonUnitaryInput);
LZ3_DEFINE_NUMERICAL_ERROR(PoleError);
LZ3_DEFINE_NUMERICAL_ERROR(NoConvergence);
LZ3_DEFINE_NUMERICAL_ERROR(AccuracyLoss);
LZ3_DEFINE_NUMERICAL_ERROR(StepUnderflow);
LZ3_DEFINE_NUMERICAL_ERROR(NonFiniteState);
LZ3_DEFINE_NUMERICAL_ERROR(IllConditioned);
LZ3_DEFINE_NUMERICAL_ERROR(DegenerateKernel);
LZ3_DEFINE_NUMERICAL_ERROR(GridMismatch);
LZ3_DEFINE_NUMERICAL_ERROR(QRNoConvergence);
LZ3_DEFINE_NUMERICAL_ERROR(UnknownFigure);
LZ3_DEFINE_NUMERICAL_ERROR(DomainError);

#undef LZ3_DEFINE_NUMERICAL_ERROR

}  // namespace lz3
