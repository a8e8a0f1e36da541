// Copyright 2026 The storemkt Authors. All rights reserved.
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

#ifndef STOREMKT_ERRORS_HPP_
#define STOREMKT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace storemkt {

// Argument lies outside a declared domain (price range, period index, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Boundary levels cannot be reached under the rate and level constraints.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Elasticity-to-slope conversion hit a nonpositive denominator.
class DegenerateMarketError : public std::runtime_error {
 public:
  explicit DegenerateMarketError(const std::string& what)
      : std::runtime_error(what) {}
};

// Two-period auction has no root on the (widened) search bracket.
class NoClearingError : public std::runtime_error {
 public:
  explicit NoClearingError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file (CSV, scenario config); message carries line numbers.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// An ownership-variant cost adapter produced a non-convex period cost.
class NonConvexError : public std::runtime_error {
 public:
  explicit NonConvexError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace storemkt

#endif  // STOREMKT_ERRORS_HPP_
