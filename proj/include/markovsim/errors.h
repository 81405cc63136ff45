// Copyright 2026 The markovsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace markovsim {

/// Invalid circuit, configuration or argument. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A dense patch would exceed the configured work budget. Maps to exit code 3.
class BudgetExceeded : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure (e.g. a diagonal that does not sum to one). Maps to exit code 4.
class NumericalError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class NormalizationError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

/// Fewer usable points than a fit needs.
class InsufficientData : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

}  // namespace markovsim
