// Copyright 2026 The dhtk Authors
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

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace dhtk {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

/// Canonical rendering in lowest terms: "p/q", or "p" when q == 1.
std::string format_rational(const Rational& value);

/// Parses "p", "-p" or "p/q" (decimal integers). Throws Error(ParseError)
/// on anything else, including zero denominators and NaN-like tokens.
Rational parse_rational(std::string_view token);

/// Rejects values outside int64 with Error(Unsupported).
std::int64_t to_int64(const BigInt& value, std::string_view what);

}  // namespace dhtk
