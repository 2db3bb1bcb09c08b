// Copyright 2026 The qmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMM_ERROR_HPP
#define QMM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qmm {

enum class ErrorCode {
    DimensionMismatch,
    NotHermitian,
    NotUnitTrace,
    NotPSD,
    RegionNotContained,
    RegionMismatch,
    OverlappingSupports,
    OverlappingSubsystems,
    SizeCapExceeded,
    ShapeTooLarge,
    PreconditionViolated,
    SupportConditionViolated,
    WindowTooSmall,
    RegionOutsideWindow,
    NonpositiveBeta,
    InvalidArgument,
};

inline const char *error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::DimensionMismatch:
            return "DimensionMismatch";
        case ErrorCode::NotHermitian:
            return "NotHermitian";
        case ErrorCode::NotUnitTrace:
            return "NotUnitTrace";
        case ErrorCode::NotPSD:
            return "NotPSD";
        case ErrorCode::RegionNotContained:
            return "RegionNotContained";
        case ErrorCode::RegionMismatch:
            return "RegionMismatch";
        case ErrorCode::OverlappingSupports:
            return "OverlappingSupports";
        case ErrorCode::OverlappingSubsystems:
            return "OverlappingSubsystems";
        case ErrorCode::SizeCapExceeded:
            return "SizeCapExceeded";
        case ErrorCode::ShapeTooLarge:
            return "ShapeTooLarge";
        case ErrorCode::PreconditionViolated:
            return "PreconditionViolated";
        case ErrorCode::SupportConditionViolated:
            return "SupportConditionViolated";
        case ErrorCode::WindowTooSmall:
            return "WindowTooSmall";
        case ErrorCode::RegionOutsideWindow:
            return "RegionOutsideWindow";
        case ErrorCode::NonpositiveBeta:
            return "NonpositiveBeta";
        case ErrorCode::InvalidArgument:
            return "InvalidArgument";
    }
    return "Unknown";
}

/// Error carrying a machine-readable code and, where meaningful, the offending residual.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &what, double residual = 0)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code), residual_(residual) {
    }
    ErrorCode code() const {
        return code_;
    }
    double residual() const {
        return residual_;
    }

   private:
    ErrorCode code_;
    double residual_;
};

}  // namespace qmm

#endif
