#pragma once

#include <stdexcept>
#include <string>

namespace topk {

// Every failure raised by the library derives from Error so callers can map
// categories onto exit codes without string matching.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad argument to a pure function (p outside the admissible set, k out of range, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A step-size constraint was violated; the message names the inequality.
class ScheduleError : public Error {
public:
  using Error::Error;
};

/// A local estimate became non-finite.
class DivergenceError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

} // namespace topk
