#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "wmms/rational.hpp"

namespace wmms {

// Malformed input: bad dimensions, negative values, unparsable files, or a
// violated operation precondition. Maps to CLI exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An exact search ran out of its state budget. Carries the best feasible
// value found so far; the caller decides whether that bound is still useful.
// Maps to CLI exit code 3.
struct BudgetExhaustedError : std::runtime_error {
  Rat best_value;
  std::uint64_t states_explored;

  BudgetExhaustedError(const std::string& msg, Rat best, std::uint64_t states)
      : std::runtime_error(msg), best_value(std::move(best)), states_explored(states) {}
};

}  // namespace wmms
