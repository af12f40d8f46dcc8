#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mcwlan {

// Bad input: malformed topology, out-of-range parameter, missing geometry.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A fixed-point iteration ran out of iterations.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual,
                   std::vector<double> history_tail)
      : std::runtime_error(what),
        residual_(residual),
        history_tail_(std::move(history_tail)) {}

  double residual() const { return residual_; }
  // Last few max|delta beta| values, oldest first.
  const std::vector<double>& history_tail() const { return history_tail_; }

 private:
  double residual_;
  std::vector<double> history_tail_;
};

// Enumeration or search would exceed its configured size limit.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mcwlan
