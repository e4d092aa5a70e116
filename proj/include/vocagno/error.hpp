// Copyright 2026 The Vocagno Authors.
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

#ifndef VOCAGNO_ERROR_HPP_
#define VOCAGNO_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace vocagno {

enum class ErrorCode {
  kInvalidArgument,
  kMalformedLine,
  kOffsetViolation,
  kLossLengthMismatch,
  kLengthMismatch,
  kDocMismatch,
  kIndexOutOfRange,
  kEmptyScope,
  kNoSelectedTokens,
  kEmptyCorpus,
  kEmptyVocab,
  kIdOutOfRange,
  kVocabMismatch,
  kIo,
  kInternal,
};

std::string_view error_code_name(ErrorCode code);

// All failures raised by the library carry one of the codes above. kInternal
// marks a broken invariant inside the library rather than bad input.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace vocagno

#endif  // VOCAGNO_ERROR_HPP_
