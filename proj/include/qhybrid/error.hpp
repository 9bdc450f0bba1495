// Copyright 2026 The qhybrid Authors
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

namespace qhybrid {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid sizes, unsupported combinations, out-of-range settings.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Shape or wire-index mismatch.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Parameter vector does not supply what a gate or layer needs.
class ParameterError : public Error {
  public:
    using Error::Error;
};

/// Malformed file contents (IDX, CSV, checkpoint).
class FormatError : public Error {
  public:
    using Error::Error;
};

/// Dataset contents that cannot satisfy a request.
class DataError : public Error {
  public:
    using Error::Error;
};

} // namespace qhybrid
