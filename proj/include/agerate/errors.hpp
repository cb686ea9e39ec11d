#pragma once

#include <stdexcept>
#include <string>

namespace agerate {

/// Base class for all errors raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string &msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string &kind() const noexcept { return kind_; }

  private:
    std::string kind_;
};

class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string &msg) : Error("validation", msg) {}
    ValidationError(std::string kind, const std::string &msg) : Error(std::move(kind), msg) {}
};

class UnknownComponentError : public ValidationError {
  public:
    explicit UnknownComponentError(const std::string &component)
        : ValidationError("unknown_component", "unknown component: " + component) {}
};

class ZeroVarianceError : public ValidationError {
  public:
    explicit ZeroVarianceError(const std::string &msg) : ValidationError("zero_variance", msg) {}
};

class EmptyCohortError : public ValidationError {
  public:
    explicit EmptyCohortError(const std::string &msg) : ValidationError("empty_cohort", msg) {}
};

class ShapeError : public ValidationError {
  public:
    explicit ShapeError(const std::string &msg) : ValidationError("shape_mismatch", msg) {}
};

class RankDeficiencyError : public Error {
  public:
    explicit RankDeficiencyError(const std::string &msg) : Error("rank_deficient", msg) {}
};

class SeparationError : public Error {
  public:
    explicit SeparationError(const std::string &msg) : Error("perfect_separation", msg) {}
};

class DegenerateDataError : public Error {
  public:
    explicit DegenerateDataError(const std::string &msg) : Error("degenerate_data", msg) {}
};

class NonFiniteLossError : public Error {
  public:
    NonFiniteLossError(const std::string &msg, long batch_index)
        : Error("non_finite_loss", msg), batch_index_(batch_index) {}
    long batch_index() const noexcept { return batch_index_; }

  private:
    long batch_index_;
};

class IoError : public Error {
  public:
    explicit IoError(const std::string &msg) : Error("io", msg) {}
};

} // namespace agerate
