#pragma once

#include <stdexcept>

namespace optstop {

// A numerical routine failed to reach its tolerance within its iteration,
// panel, or enumeration budget.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace optstop
