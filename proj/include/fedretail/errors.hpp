/*
   Copyright 2026 The Fedretail Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fedretail {

enum class ErrorCode {
    kMalformedRow,
    kSchemaMismatch,
    kDegenerateColumn,
    kInsufficientHistory,
    kEmptySplit,
    kBadArchitecture,
    kDimensionMismatch,
    kEmptyInput,
    kLengthMismatch,
    kModulusOverflowRisk,
    kMissingSeed,
    kInsufficientShares,
    kDuplicateIndex,
    kUnrecoverableDropout,
    kNotFound,
    kNonMonotoneRound,
    kNonMonotoneTimestamp,
    kRoundNotAnchored,
    kEmptyClientData,
    kEmptyAggregation,
    kZeroDemand,
    kZeroBaseline,
    kAlertInconsistency,
    kBadConfig,
    kIo,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error{std::string{to_string(code)} + ": " + message}, code_{code} {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

class MalformedRowError : public Error {
  public:
    MalformedRowError(std::size_t line_no, const std::string& detail)
        : Error{ErrorCode::kMalformedRow, "line " + std::to_string(line_no) + ": " + detail}, line_no_{line_no} {}

    [[nodiscard]] std::size_t line_no() const noexcept { return line_no_; }

  private:
    std::size_t line_no_;
};

class InsufficientHistoryError : public Error {
  public:
    InsufficientHistoryError(int store_id, std::size_t length, std::size_t max_lag)
        : Error{ErrorCode::kInsufficientHistory, "store " + std::to_string(store_id) + " has " +
                                                     std::to_string(length) + " rows, needs more than " +
                                                     std::to_string(max_lag)},
          store_id_{store_id} {}

    [[nodiscard]] int store_id() const noexcept { return store_id_; }

  private:
    int store_id_;
};

class AlertInconsistencyError : public Error {
  public:
    AlertInconsistencyError(std::int64_t round, const std::string& detail)
        : Error{ErrorCode::kAlertInconsistency, "round " + std::to_string(round) + ": " + detail}, round_{round} {}

    [[nodiscard]] std::int64_t round() const noexcept { return round_; }

  private:
    std::int64_t round_;
};

}  // namespace fedretail
