#pragma once

#include <stdexcept>
#include <string>

namespace cyldrift {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Configuration text violates the schema (unknown key, wrong type, ...).
class SchemaError : public Error {
public:
  explicit SchemaError(const std::string& msg) : Error("schema error: " + msg) {}
};

/// Configuration value outside its admissible range.
class ValueError : public Error {
public:
  explicit ValueError(const std::string& msg) : Error("value error: " + msg) {}
};

/// Sampled diffusion coefficient is not uniformly positive.
class NonElliptic : public Error {
public:
  explicit NonElliptic(double min_value)
      : Error("non-elliptic diffusion: sampled minimum " + std::to_string(min_value)) {}
};

/// Weighted-transpose adjoint requested for a Dirichlet-base operator.
class AdjointOfDirichlet : public Error {
public:
  AdjointOfDirichlet() : Error("discrete adjoint requires conormal-zero bases") {}
};

/// Singular (pure-Neumann) system solved without an anchor constraint.
class SingularWithoutAnchor : public Error {
public:
  SingularWithoutAnchor() : Error("singular system: no anchor constraint supplied") {}
};

/// Linear or eigen iteration did not reach its tolerance.
class IterationLimitExceeded : public Error {
public:
  explicit IterationLimitExceeded(const std::string& what_failed)
      : Error("iteration limit exceeded: " + what_failed) {}
};

/// Ground-state iteration converged to a vector with non-positive entries.
class NonPositiveGroundState : public Error {
public:
  NonPositiveGroundState()
      : Error("ground state has non-positive entries (broken M-matrix structure?)") {}
};

/// Compatibility-regime data fails the orthogonality condition.
class IncompatibleData : public Error {
public:
  IncompatibleData(double functional, double data_norm)
      : Error("data incompatible with adjoint ground state: functional = " +
              std::to_string(functional) + ", data norm = " + std::to_string(data_norm)),
        functional_value(functional), norm(data_norm) {}
  double functional_value;
  double norm;
};

/// Stabilization fit asked for on a side with too few unit windows.
class InsufficientWindows : public Error {
public:
  explicit InsufficientWindows(int have)
      : Error("stabilization fit needs >= 6 unit windows, have " + std::to_string(have)) {}
};

} // namespace cyldrift
