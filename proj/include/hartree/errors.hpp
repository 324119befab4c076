#pragma once

#include <stdexcept>
#include <string>

namespace hartree {

/// Invalid user-facing configuration (grid extents, kernel family, config keys).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field or trace was used with a grid it was not built on.
class GridMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Precondition violated by the caller (nonuniform windows, nonzero boundary
/// values where zero is required, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Internal numerical failure such as a singular assembly.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The inner fixed-point loop hit its iteration cap.
class PicardDivergence : public SolverError {
 public:
  PicardDivergence(double t, int iterations, double last_ratio)
      : SolverError("Picard iteration did not converge at t=" + std::to_string(t) + " after " +
                    std::to_string(iterations) + " iterations (last ratio " +
                    std::to_string(last_ratio) + ")"),
        t_(t), iterations_(iterations), last_ratio_(last_ratio) {}

  double time() const noexcept { return t_; }
  int iterations() const noexcept { return iterations_; }
  double last_ratio() const noexcept { return last_ratio_; }

 private:
  double t_;
  int iterations_;
  double last_ratio_;
};

}  // namespace hartree

namespace hartree {

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hartree
