/**
 * Copyright 2026 lopsim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LOPSIM_ERRORS_HPP
#define LOPSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lopsim {

/// Classifies every failure the library can raise. The CLI maps kinds to
/// stable process exit codes (validation-like -> 2, size guards -> 3,
/// numeric trouble -> 4).
enum class ErrorKind {
    Dimension,    ///< shape / length mismatch between operands
    Validation,   ///< an input violates a documented invariant
    Domain,       ///< argument outside the operation's domain
    Cutoff,       ///< requested truncation cannot hold the state
    SizeGuard,    ///< input exceeds a hard cost/memory guard
    Numeric,      ///< conditioning or invariant violation detected at run time
    Singularity,  ///< matrix inversion requested at a singular point
    Parse         ///< scenario file could not be parsed
};

class SimError : public std::runtime_error {
public:
    SimError(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Dimension: return "dimension";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Cutoff: return "cutoff";
        case ErrorKind::SizeGuard: return "size-guard";
        case ErrorKind::Numeric: return "numeric";
        case ErrorKind::Singularity: return "singularity";
        case ErrorKind::Parse: return "parse";
    }
    return "unknown";
}

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
    throw SimError(kind, message);
}

}  // namespace lopsim

#endif
