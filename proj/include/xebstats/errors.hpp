// Copyright 2026 The xebstats Authors
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

namespace xebstats {

/// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
    Usage,        // malformed invocation or conflicting flags
    Data,         // invalid data, dimensions, or domain
    Convergence,  // iterative solver did not converge
};

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

   private:
    ErrorKind kind_;
};

#define XEBSTATS_DATA_ERROR(Name)                                                        \
    class Name : public Error {                                                          \
       public:                                                                           \
        explicit Name(const std::string &what) : Error(ErrorKind::Data, #Name ": " + what) {} \
    }

XEBSTATS_DATA_ERROR(DimensionError);
XEBSTATS_DATA_ERROR(DomainError);
XEBSTATS_DATA_ERROR(DegenerateDenominatorError);
XEBSTATS_DATA_ERROR(EmptyInputError);
XEBSTATS_DATA_ERROR(FlatLikelihoodError);
XEBSTATS_DATA_ERROR(NoAcceptanceError);
XEBSTATS_DATA_ERROR(DegenerateBinningError);
XEBSTATS_DATA_ERROR(FormatError);
XEBSTATS_DATA_ERROR(IoError);

#undef XEBSTATS_DATA_ERROR

class ConvergenceError : public Error {
   public:
    explicit ConvergenceError(const std::string &what)
        : Error(ErrorKind::Convergence, "ConvergenceError: " + what) {}
};

class UsageError : public Error {
   public:
    explicit UsageError(const std::string &what) : Error(ErrorKind::Usage, "UsageError: " + what) {}
};

}  // namespace xebstats
