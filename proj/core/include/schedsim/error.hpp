#pragma once

#include <stdexcept>
#include <string>

namespace schedsim {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A scheme cannot run under the requested (n, r, k).
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// Fewer than k distinct tasks are assigned anywhere in the schedule.
class InfeasibleTarget : public Infeasible {
 public:
  using Infeasible::Infeasible;
};

}  // namespace schedsim
