#pragma once

#include <stdexcept>
#include <string>

namespace lowspace {

// Invalid configuration: k = 0, n = 0, p_bound too small, infeasible instance spec.
class parameter_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the declared domain of a function (x >= m, vertex > n).
class domain_error : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Operation applied to an object of the wrong kind (bit evaluation of an index seed).
class usage_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed or unreadable serialized data.
class format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read or written.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lowspace
