// Copyright 2026  The sasvkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SASV_ERRORS_HPP_
#define SASV_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sasv {

/// Base of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a data contract (bad labels, missing classes, joins).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Malformed text line. Line numbers are 1-based.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string &what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Unsupported or damaged binary container (WAV).
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

/// File system failures and bad command-line usage.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A solver failed to reach its tolerance.
class NumericalError : public Error {
 public:
  NumericalError(const std::string &what, double gradient_norm)
      : Error(what), gradient_norm_(gradient_norm) {}
  double gradient_norm() const { return gradient_norm_; }

 private:
  double gradient_norm_;
};

/// t-EER search found no operating point where all three tandem error
/// rates meet.
class NoConcurrentPointError : public Error {
 public:
  using Error::Error;
};

}  // namespace sasv

#endif  // SASV_ERRORS_HPP_
