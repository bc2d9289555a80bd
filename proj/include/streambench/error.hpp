// Copyright 2026 The StreamBench Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <stdexcept>
#include <string>

namespace streambench {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition of an operation was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

// An argument is outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (files, streams, class sets).
class InputError : public Error {
 public:
  using Error::Error;
};

// Missing or invalid configuration (profiles, policies, flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A numerical routine could not proceed without regularization.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace streambench
