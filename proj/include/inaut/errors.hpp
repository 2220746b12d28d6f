// Copyright 2026 The INAUT Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INAUT_ERRORS_HPP_
#define INAUT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace inaut {

// Base class of every error raised by the library. `code()` is the stable
// machine-readable name used in JSON diagnostics and exit messages.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string &message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string &code() const { return code_; }

 private:
  std::string code_;
};

#define INAUT_DEFINE_ERROR(Name)                                     \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string &message) : Error(#Name, message) {} \
  };

// geo
INAUT_DEFINE_ERROR(DegeneratePolygon)
INAUT_DEFINE_ERROR(UnknownModifier)
INAUT_DEFINE_ERROR(NoGeoreferencedNodes)
// kb
INAUT_DEFINE_ERROR(SignatureMismatch)
INAUT_DEFINE_ERROR(UnknownInstance)
INAUT_DEFINE_ERROR(UnknownSchema)
INAUT_DEFINE_ERROR(UnknownEntity)
INAUT_DEFINE_ERROR(SchemaVersionMismatch)
INAUT_DEFINE_ERROR(KbConflict)
// doc
INAUT_DEFINE_ERROR(InvariantViolation)
INAUT_DEFINE_ERROR(NoGeoArea)
// nlg
INAUT_DEFINE_ERROR(EmptyComponent)
INAUT_DEFINE_ERROR(MissingLexicalization)
// grammar
INAUT_DEFINE_ERROR(RoleMismatch)
INAUT_DEFINE_ERROR(UnresolvedEntity)
INAUT_DEFINE_ERROR(ConfigError)
INAUT_DEFINE_ERROR(InvalidQuery)
INAUT_DEFINE_ERROR(NotFound)

#undef INAUT_DEFINE_ERROR

// Malformed input file. Line and column are 1-based; 0 when the error is
// structural (e.g. a missing field) rather than lexical.
class ParseError : public Error {
 public:
  ParseError(const std::string &message, int line, int column)
      : Error("ParseError", message + " (line " + std::to_string(line) +
                                ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace inaut

#endif  // INAUT_ERRORS_HPP_
