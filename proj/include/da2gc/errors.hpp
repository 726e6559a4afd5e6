#pragma once

#include <stdexcept>
#include <string>

namespace da2gc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidArrayError : public Error {
 public:
  using Error::Error;
};

class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

class RankDeficiencyError : public Error {
 public:
  RankDeficiencyError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, std::string tightest_constraint)
      : Error(what), tightest_(std::move(tightest_constraint)) {}
  const std::string& tightest_constraint() const { return tightest_; }

 private:
  std::string tightest_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace da2gc
