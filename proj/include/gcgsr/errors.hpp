#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gcgsr {

// Input rejected by a precondition check. `row`/`col` name the offending
// entry when the failure is tied to one (npos otherwise).
class ValidationError : public std::invalid_argument {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit ValidationError(const std::string& what, std::size_t row = npos,
                           std::size_t col = npos)
      : std::invalid_argument(what), row_(row), col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Power iteration ran out of iterations.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_rayleigh)
      : std::runtime_error(what), last_rayleigh_(last_rayleigh) {}
  double last_rayleigh() const noexcept { return last_rayleigh_; }

 private:
  double last_rayleigh_;
};

// A solver iterate became non-finite or blew past the divergence limit.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  long iteration() const noexcept { return iteration_; }

 private:
  long iteration_;
};

// A Monte-Carlo run failed; wraps the original message with the run index.
class RunError : public std::runtime_error {
 public:
  RunError(const std::string& what, int run)
      : std::runtime_error(what), run_(run) {}
  int run() const noexcept { return run_; }

 private:
  int run_;
};

inline void require_same_size(std::size_t expected, std::size_t got,
                              const char* what) {
  if (expected != got) {
    throw DimensionError(std::string(what) + ": expected length " +
                         std::to_string(expected) + ", got " +
                         std::to_string(got));
  }
}

}  // namespace gcgsr
