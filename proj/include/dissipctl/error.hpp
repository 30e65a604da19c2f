// Copyright 2026 The dissipctl Authors
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

/**
 * @file error.hpp
 * Exception hierarchy shared by every dissipctl module.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace dissipctl {

/// Base class; every error raised by the library derives from it.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible (non-square, mismatched dims, bad site).
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// An operator that must be Hermitian is not, within tolerance.
class NotHermitianError : public Error {
  public:
    using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
  public:
    using Error::Error;
};

/// The master-equation integrator failed (step underflow, invalid state).
class IntegratorError : public Error {
  public:
    using Error::Error;
};

/// A configured size or iteration budget was exceeded.
class BudgetError : public Error {
  public:
    using Error::Error;
};

/// A synthesis problem has no solution (rank obstruction, inconsistent
/// linear system).
class InfeasibleError : public Error {
  public:
    using Error::Error;
};

/// Iterative synthesis ran out of budget. Carries the best residual seen.
class SolverBudgetError : public Error {
  public:
    SolverBudgetError(const std::string &what, double best_residual)
        : Error(what), best_residual_(best_residual) {}
    [[nodiscard]] double best_residual() const noexcept {
        return best_residual_;
    }

  private:
    double best_residual_;
};

/// Malformed JSON/CSV input. The message names the offending field.
class FormatError : public Error {
  public:
    using Error::Error;
};

} // namespace dissipctl
