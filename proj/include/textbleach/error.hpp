// Copyright 2026 The textbleach Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace textbleach {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input data or bad argument values. Maps to exit code 1 in the CLI.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Malformed file content; carries a 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line)
        : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    explicit ParseError(const std::string& msg) : ParseError(msg, 0) {}
    long line() const { return line_; }

private:
    long line_;
};

// Filesystem problems (missing file, failed write). Exit code 2 in the CLI.
class IoError : public Error {
public:
    using Error::Error;
};

// Inconsistent configuration, e.g. a channel that needs a missing resource.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Train/test hygiene violation: a test user leaked into fitted statistics.
class HygieneError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Model container problems, kept distinct so callers can tell them apart.
class ModelVersionError : public Error {
public:
    using Error::Error;
};

class ModelChecksumError : public Error {
public:
    using Error::Error;
};

class ModelTruncatedError : public Error {
public:
    using Error::Error;
};

}  // namespace textbleach
