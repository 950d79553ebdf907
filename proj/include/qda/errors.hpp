#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qda {

// Caller broke a documented precondition (dimension mismatch, bad size).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A pivot fell below the singularity tolerance during an LU factorization.
class SingularMatrix : public std::runtime_error {
 public:
  SingularMatrix(std::size_t pivot_index, double pivot_magnitude)
      : std::runtime_error("singular matrix: pivot " + std::to_string(pivot_index) +
                           " has magnitude " + std::to_string(pivot_magnitude)),
        pivot_index_(pivot_index),
        pivot_magnitude_(pivot_magnitude) {}

  std::size_t pivot_index() const noexcept { return pivot_index_; }
  double pivot_magnitude() const noexcept { return pivot_magnitude_; }

 private:
  std::size_t pivot_index_;
  double pivot_magnitude_;
};

class RankDeficient : public std::runtime_error {
 public:
  RankDeficient(std::size_t column, double diagonal)
      : std::runtime_error("rank deficient: R(" + std::to_string(column) + "," +
                           std::to_string(column) + ") = " + std::to_string(diagonal)),
        column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

// An elimination or doubling step could not proceed. `stage` names the
// failing phase; `condition` carries the pivot-ratio estimate when known.
class Breakdown : public std::runtime_error {
 public:
  Breakdown(std::string stage, double condition = 0.0)
      : std::runtime_error("breakdown in " + stage), stage_(std::move(stage)),
        condition_(condition) {}

  const std::string& stage() const noexcept { return stage_; }
  double condition() const noexcept { return condition_; }

 private:
  std::string stage_;
  double condition_;
};

class ZeroPivot : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Overflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qda
