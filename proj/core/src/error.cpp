/*
 * Copyright 2026 The WrinkleForge Authors
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

#include "wrinkleforge/error.hpp"

namespace wrinkleforge {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptData: return "CorruptData";
    case ErrorCode::NotBinary: return "NotBinary";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::WrongChannelCount: return "WrongChannelCount";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidKernelSpec: return "InvalidKernelSpec";
    case ErrorCode::MissingMask: return "MissingMask";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::InvalidAnnotationSet: return "InvalidAnnotationSet";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::IndivisibleSpatialDims: return "IndivisibleSpatialDims";
    case ErrorCode::NoForwardPass: return "NoForwardPass";
    case ErrorCode::ShrinkNotSupported: return "ShrinkNotSupported";
    case ErrorCode::CorruptCheckpoint: return "CorruptCheckpoint";
    case ErrorCode::HashMismatch: return "HashMismatch";
    case ErrorCode::IncompatibleCheckpoint: return "IncompatibleCheckpoint";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::DatasetMissing: return "DatasetMissing";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::OutputExists: return "OutputExists";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace wrinkleforge
