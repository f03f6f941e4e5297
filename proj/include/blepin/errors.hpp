// Copyright 2026 the blepin authors.
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

namespace blepin {

/// Base class of everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario name outside the known preset set.
class UnknownScenario : public Error {
public:
    using Error::Error;
};

/// Distance argument was zero or negative.
class InvalidDistance : public Error {
public:
    using Error::Error;
};

/// Input too small or singular for an estimation problem.
class DegenerateInput : public Error {
public:
    using Error::Error;
};

/// A value violates a type invariant or a run precondition.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Filesystem-level failure (open, read, write).
class IoError : public Error {
public:
    using Error::Error;
};

/// Base class for frame decoding failures.
class DecodeError : public Error {
public:
    using Error::Error;
};

class UnknownTag : public DecodeError {
public:
    using DecodeError::DecodeError;
};

class TruncatedFrame : public DecodeError {
public:
    using DecodeError::DecodeError;
};

class InvalidSymbol : public DecodeError {
public:
    using DecodeError::DecodeError;
};

/// CSV parse failure; carries the 1-based line number it happened on.
class CsvError : public Error {
public:
    CsvError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

} // namespace blepin
