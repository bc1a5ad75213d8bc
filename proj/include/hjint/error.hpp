// SPDX-License-Identifier: MIT
//
// Error taxonomy for the integrator library.  Everything derives from
// hjint::Error so callers can catch one type; the CLI maps ConfigError to
// exit code 2 and every other Error to exit code 3.

#pragma once

#include <stdexcept>
#include <string>

namespace hjint {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Division by a truncated series whose constant term is (numerically) zero.
// Charts also raise this directly when asked to evaluate at a coordinate
// singularity, e.g. sin(theta) ~ 0 in the Euler-angle chart.
class SingularDivision : public Error {
 public:
  using Error::Error;
};

// A chart evaluation hit a singularity while stepping; wraps the underlying
// SingularDivision with trajectory context.
class ChartSingularity : public Error {
 public:
  using Error::Error;
};

class NewtonNoConvergence : public Error {
 public:
  NewtonNoConvergence(const std::string& what, int iterations, double residual)
      : Error(what), iterations(iterations), residual(residual) {}
  int iterations;
  double residual;
};

class SingularJacobian : public Error {
 public:
  SingularJacobian(const std::string& what, double condition)
      : Error(what), condition(condition) {}
  double condition;
};

// Invalid or inconsistent user-facing configuration (CLI/JSON).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A trajectory failed mid-run; records which step failed.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, long step_index)
      : Error(what), step_index(step_index) {}
  long step_index;
};

}  // namespace hjint
