#pragma once
#include <stdexcept>
#include <string>

namespace fracwave {

struct NonConvergence : std::runtime_error {
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::domain_error {
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

struct GridError : std::runtime_error {
  explicit GridError(const std::string& what) : std::runtime_error(what) {}
};

struct SingularMatrix : std::runtime_error {
  explicit SingularMatrix(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureFailure : std::runtime_error {
  explicit QuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

struct IterationBudgetExceeded : std::runtime_error {
  explicit IterationBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct SingularQuadratureFailure : std::runtime_error {
  explicit SingularQuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

struct CoverageError : std::runtime_error {
  explicit CoverageError(const std::string& what) : std::runtime_error(what) {}
};

struct LinearSolveFailure : std::runtime_error {
  explicit LinearSolveFailure(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyOverlap : std::runtime_error {
  explicit EmptyOverlap(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fracwave
