#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dgr {

// Base for every error raised by the library. Callers that only care about
// "something in dgr failed" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidLabel : public Error {
 public:
  using Error::Error;
};

class EmptyGraph : public Error {
 public:
  using Error::Error;
};

class NotConnected : public Error {
 public:
  using Error::Error;
};

// Metric has no value for this input (e.g. assortativity of a regular graph).
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

class NoGraphFound : public Error {
 public:
  using Error::Error;
};

class MalformedLiteral : public Error {
 public:
  MalformedLiteral(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class DegenerateSequence : public Error {
 public:
  using Error::Error;
};

class InconclusiveTest : public Error {
 public:
  using Error::Error;
};

class TrivialPath : public Error {
 public:
  using Error::Error;
};

class GraphMLError : public Error {
 public:
  GraphMLError(const std::string& what, std::size_t line)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Transport-level failure talking to a text generator.
class GeneratorError : public Error {
 public:
  using Error::Error;
};

// The agent loop stopped early; snapshots written so far stay on disk.
class RunAborted : public GeneratorError {
 public:
  RunAborted(const std::string& what, std::size_t completed)
      : GeneratorError(what), completed_(completed) {}
  std::size_t completed_iterations() const { return completed_; }

 private:
  std::size_t completed_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dgr
