// Copyright 2026 the qmmcal authors
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

#ifndef QMMCAL_ERRORS_HPP
#define QMMCAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qmmcal {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mathematical domain violation (non-positive log argument, invalid
/// scenario value, non-finite input).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The Gram matrix is numerically singular: the basis functions are
/// linearly dependent over the measurement grid and the normal-equation
/// solution is not unique.
class SingularGramError : public Error {
 public:
  using Error::Error;
};

/// Grey-relational normalization is undefined: max equals min in one of
/// the input sequences and the sequences are not identical.
class DegenerateRangeError : public Error {
 public:
  using Error::Error;
};

/// A measured pathloss value is zero; the absolute percentage error is
/// undefined there.
class ZeroMeasurementError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (bad header, non-numeric cell, missing key).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure, reported with the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qmmcal

#endif  // QMMCAL_ERRORS_HPP
