/*
 * Copyright 2026 The dgsum Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DGSUM_ERRORS_HPP_
#define DGSUM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dgsum {

// Base class for every error raised by the library. Callers that only care
// about "something was wrong with the inputs" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

// Raised when X does not have full row rank where it is required.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

// Raised when an integer system X u = b has no integral solution.
class NotSurjective : public Error {
 public:
  using Error::Error;
};

class NotInSupport : public Error {
 public:
  using Error::Error;
};

// An enumeration or table would exceed its configured size budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class CollisionNotFound : public Error {
 public:
  using Error::Error;
};

// An internal consistency check failed; indicates a bug, not bad input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// A run cannot make its claim because an input condition does not hold.
class PreconditionUnmet : public Error {
 public:
  using Error::Error;
};

}  // namespace dgsum

#endif  // DGSUM_ERRORS_HPP_
