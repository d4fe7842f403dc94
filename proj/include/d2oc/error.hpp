/*
 Copyright 2026 The D2OC Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef D2OC_ERROR_HPP
#define D2OC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace d2oc {

enum class ErrorKind {
    NoRelativeDegree,
    DimensionMismatch,
    InvalidArgument,
    NoLiveSamples,
    DegenerateWeights,
    InfeasibleMarginals,
    NotPositiveDefinite,
    UndefinedRatio,
    NoContraction,
    NotSymmetric,
    LengthMismatch,
    Config,
};

const char* to_string(ErrorKind kind) noexcept;

/// Library-wide exception. Callers dispatch on kind() rather than on type.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NoRelativeDegree: return "NoRelativeDegree";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::NoLiveSamples: return "NoLiveSamples";
        case ErrorKind::DegenerateWeights: return "DegenerateWeights";
        case ErrorKind::InfeasibleMarginals: return "InfeasibleMarginals";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::UndefinedRatio: return "UndefinedRatio";
        case ErrorKind::NoContraction: return "NoContraction";
        case ErrorKind::NotSymmetric: return "NotSymmetric";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::Config: return "Config";
    }
    return "Unknown";
}

}  // namespace d2oc

#endif  // D2OC_ERROR_HPP
