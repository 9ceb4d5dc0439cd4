// Copyright 2026 The qtherm Authors
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

namespace qtherm {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (negative beta, t < 0, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Operator or layout dimensions do not agree.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A request exceeds a desk-scale resource limit. The message names the limit.
class ResourceGuard : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical method failed to converge.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace qtherm
