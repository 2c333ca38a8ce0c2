/*
   Copyright 2026 The cpa Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cpa {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point handed to a partition lies outside its domain box.
class DomainViolation : public Error {
 public:
  DomainViolation(std::size_t dimension, double value, double lower, double upper);

  std::size_t dimension() const { return dimension_; }
  double value() const { return value_; }

 private:
  std::size_t dimension_;
  double value_;
};

/// Invalid argument or inconsistent geometry.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Normalization or pruning left no probability mass.
class ZeroMass : public Error {
 public:
  using Error::Error;
};

/// De Bruijn density whose supports cannot be glued into global states.
class NonExtendable : public Error {
 public:
  using Error::Error;
};

/// A transition table lookup hit a preimage without samples.
class UnexploredPreimage : public Error {
 public:
  explicit UnexploredPreimage(std::uint64_t code, const std::string& where = {});

  std::uint64_t code() const { return code_; }
  const std::string& where() const { return where_; }

 private:
  std::uint64_t code_;
  std::string where_;
};

/// Flow map produced non-finite values.
class ModelInstability : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed or mismatching table / marginal file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace cpa
