// Copyright 2026 The ness-battery Authors
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

#include "ness_battery/error.hpp"

namespace ness_battery {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidDensityMatrix: return "InvalidDensityMatrix";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::NonPositiveTemperature: return "NonPositiveTemperature";
    case ErrorCode::InvalidOpticsRates: return "InvalidOpticsRates";
    case ErrorCode::InvalidRates: return "InvalidRates";
    case ErrorCode::ZeroRate: return "ZeroRate";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::DegenerateSteadyState: return "DegenerateSteadyState";
    case ErrorCode::OrderingViolated: return "OrderingViolated";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NonPositiveGradient: return "NonPositiveGradient";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace ness_battery
