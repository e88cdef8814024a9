#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace evcore {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input record. line() is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates a cross-record invariant.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class SamplerError : public Error {
 public:
  using Error::Error;
};

// A model cannot be fitted to the supplied data.
class FitError : public Error {
 public:
  using Error::Error;
};

class TrainingDiverged : public Error {
 public:
  using Error::Error;
};

// A checkpoint does not fit the feature matrices it is applied to.
class ModelMismatch : public Error {
 public:
  using Error::Error;
};

// Gold and system clusterings cover different mention sets.
class MentionMismatch : public Error {
 public:
  MentionMismatch(std::vector<std::string> only_gold, std::vector<std::string> only_sys);
  const std::vector<std::string>& only_in_gold() const { return only_gold_; }
  const std::vector<std::string>& only_in_sys() const { return only_sys_; }

 private:
  std::vector<std::string> only_gold_;
  std::vector<std::string> only_sys_;
};

}  // namespace evcore
