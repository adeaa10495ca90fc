#pragma once

#include <stdexcept>
#include <string>

namespace qrl {

// A caller broke an operation's precondition (shape, domain, or sign).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The sequence space is too large to enumerate under the configured limit.
class NotEnumerable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A requested computation exceeds a configured size limit.
class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qrl
