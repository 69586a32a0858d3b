#pragma once

#include <stdexcept>
#include <string>

namespace daecanon {

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Raised for malformed user input (problem files, expressions, flags).
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error("InputError", what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : Error("ParseError", what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class DomainError : public Error {
 public:
  DomainError(const std::string& what, double t)
      : Error("DomainError", what + " at t=" + std::to_string(t)), t_(t) {}
  double t() const { return t_; }

 private:
  double t_;
};

class SingularAtSample : public Error {
 public:
  SingularAtSample(const std::string& what, double t)
      : Error("SingularAtSample", what + " at t=" + std::to_string(t)), t_(t) {}
  double t() const { return t_; }

 private:
  double t_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error("ShapeError", what) {}
};

class StructureError : public Error {
 public:
  StructureError(std::string kind, const std::string& what) : Error(std::move(kind), what) {}
};

class ExpressionTooLarge : public Error {
 public:
  explicit ExpressionTooLarge(const std::string& what) : Error("ExpressionTooLarge", what) {}
};

}  // namespace daecanon
