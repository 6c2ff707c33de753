#pragma once

#include <stdexcept>
#include <string>

namespace bkk {

/// An enumeration would exceed its configured size limit.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that is well-formed but not supported by the requested computation.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bkk
