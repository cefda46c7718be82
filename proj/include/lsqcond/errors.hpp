/*
 * Copyright 2026 The lsqcond Authors. All Rights Reserved
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LSQCOND_ERRORS_HPP_
#define LSQCOND_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace lsqcond {

enum class ErrorKind {
  NonFullRank,
  DimensionMismatch,
  ZeroResidual,
  ZeroSolution,
  OutOfRange,
  ParamOutOfRange,
  DegenerateDirection,
  ZeroColumn,
  Breakdown,
  ParseError,
  IoError,
};

constexpr std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonFullRank: return "NonFullRank";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroResidual: return "ZeroResidual";
    case ErrorKind::ZeroSolution: return "ZeroSolution";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorKind::DegenerateDirection: return "DegenerateDirection";
    case ErrorKind::ZeroColumn: return "ZeroColumn";
    case ErrorKind::Breakdown: return "Breakdown";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace lsqcond

#endif  // LSQCOND_ERRORS_HPP_
