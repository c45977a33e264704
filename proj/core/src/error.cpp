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

#include "agl/error.hpp"

namespace agl {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kDecode: return "decode";
    case ErrorCode::kUnsupportedFormat: return "unsupported-format";
    case ErrorCode::kTooShort: return "too-short";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kOntology: return "ontology";
    case ErrorCode::kMalformedSegment: return "malformed-segment";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kMissingJudges: return "missing-judges";
    case ErrorCode::kDegenerateFit: return "degenerate-fit";
    case ErrorCode::kDuplicateAttribution: return "duplicate-attribution";
    case ErrorCode::kUndefinedCorrelation: return "undefined-correlation";
    case ErrorCode::kMissingGroup: return "missing-group";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kUnknownCountry: return "unknown-country";
    case ErrorCode::kCoordinateRange: return "coordinate-range";
    case ErrorCode::kEmptyDataset: return "empty-dataset";
    case ErrorCode::kDuplicate: return "duplicate";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kNoContent: return "no-content";
  }
  return "unknown";
}

}  // namespace agl
