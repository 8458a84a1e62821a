#pragma once

#include <stdexcept>
#include <string>

namespace mobman {

/// Base of every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed map or scenario text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class PoseInObstacle : public Error {
 public:
  using Error::Error;
};

class DegenerateFusion : public Error {
 public:
  using Error::Error;
};

class WallContact : public Error {
 public:
  using Error::Error;
};

class NoPath : public Error {
 public:
  using Error::Error;
};

class InvalidEndpoint : public Error {
 public:
  using Error::Error;
};

class IllegalEvent : public Error {
 public:
  using Error::Error;
};

class NoFeasibleAction : public Error {
 public:
  using Error::Error;
};

class DegenerateCluster : public Error {
 public:
  using Error::Error;
};

class ScenarioError : public Error {
 public:
  using Error::Error;
};

}  // namespace mobman
