/* Copyright 2026 The AGL Toolkit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef AGL_ERROR_HPP_
#define AGL_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace agl {

// Stable error codes. The numeric values are part of the CLI contract
// (printed as "error[NN]") and must not be renumbered.
enum class ErrorCode : int {
  kIo = 10,
  kParse = 11,
  kConfig = 12,
  kDecode = 20,
  kUnsupportedFormat = 21,
  kTooShort = 22,
  kEmptyInput = 23,
  kOntology = 30,
  kMalformedSegment = 31,
  kOutOfRange = 32,
  kMissingJudges = 40,
  kDegenerateFit = 41,
  kDuplicateAttribution = 42,
  kUndefinedCorrelation = 43,
  kMissingGroup = 44,
  kDomain = 50,
  kUnknownCountry = 51,
  kCoordinateRange = 52,
  kEmptyDataset = 60,
  kDuplicate = 61,
  kFormat = 62,
  kNotFound = 70,
  kValidation = 71,
  kConflict = 72,
  kNoContent = 73,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace agl

#endif  // AGL_ERROR_HPP_
