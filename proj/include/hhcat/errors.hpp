#pragma once

#include <stdexcept>
#include <string>

namespace hhcat {

// Base of everything the library throws. `kind()` is a stable short name used
// by the CLI report; `exit_code()` is the CLI process status for the error.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "Error"; }
  virtual int exit_code() const noexcept { return 1; }
};

#define HHCAT_ERROR(Name, Base, Code)                                        \
  class Name : public Base {                                                 \
   public:                                                                   \
    explicit Name(const std::string& what) : Base(#Name ": " + what) {}      \
    const char* kind() const noexcept override { return #Name; }             \
    int exit_code() const noexcept override { return Code; }                 \
  };

// Input problems: the data handed to us is not what it claims to be.
HHCAT_ERROR(ParseError, Error, 1)
HHCAT_ERROR(NotAssociative, Error, 1)
HHCAT_ERROR(BadUnit, Error, 1)
HHCAT_ERROR(BadSystem, Error, 1)
HHCAT_ERROR(NotConfluent, Error, 1)
HHCAT_ERROR(InfiniteDimensional, Error, 1)
HHCAT_ERROR(AlgebraMismatch, Error, 1)
HHCAT_ERROR(NotInSystem, Error, 1)
HHCAT_ERROR(InvalidQSet, Error, 1)
HHCAT_ERROR(AssociativityViolated, Error, 1)
HHCAT_ERROR(NotACocycle, Error, 1)
HHCAT_ERROR(NotProjective, Error, 1)
HHCAT_ERROR(TorHypothesisFails, Error, 1)

// Resource cap hit.
HHCAT_ERROR(BudgetExceeded, Error, 2)

// Internal consistency: a theorem-guaranteed identity failed, i.e. a bug.
HHCAT_ERROR(CompositionNotZero, Error, 3)
HHCAT_ERROR(LiftNotInSubcomplex, Error, 3)
HHCAT_ERROR(ExactnessFailure, Error, 3)
HHCAT_ERROR(ConsistencyFailure, Error, 3)

#undef HHCAT_ERROR

}  // namespace hhcat
