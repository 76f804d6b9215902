#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdlp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using IndexList = std::vector<Index>;

/// Non-fatal conditions collected while a computation runs (dropped columns,
/// clamped autocorrelations, ...). Callers decide whether to surface them.
using Warnings = std::vector<std::string>;

enum class ErrorKind {
  invalid_argument,
  config,
  numeric,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorKind::invalid_argument, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

/// A value outside the domain of a transform (log of a non-positive number).
class DomainError : public NumericError {
 public:
  DomainError(const std::string& series, Index index, const std::string& what)
      : NumericError(what), series_(series), index_(index) {}
  const std::string& series() const noexcept { return series_; }
  Index index() const noexcept { return index_; }

 private:
  std::string series_;
  Index index_;
};

/// Coordinate descent ran out of sweeps. Carries the last iterate so callers
/// can inspect how far from optimal it was.
class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, Vector last_iterate, double kkt_gap)
      : NumericError(what), last_(std::move(last_iterate)), kkt_gap_(kkt_gap) {}
  const Vector& last_iterate() const noexcept { return last_; }
  double kkt_gap() const noexcept { return kkt_gap_; }

 private:
  Vector last_;
  double kkt_gap_;
};

}  // namespace hdlp
