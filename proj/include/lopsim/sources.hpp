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

#ifndef LOPSIM_SOURCES_HPP
#define LOPSIM_SOURCES_HPP

#include <optional>
#include <string>

#include "lopsim/complex_matrix.hpp"

namespace lopsim {

/// Trace mass a constructor may silently lose to Fock truncation before it
/// must fail loudly instead.
inline constexpr double kTruncationTolerance = 1e-10;

/// Single-mode quantum state as a truncated Fock-basis density matrix
/// rho_{n,m}, n,m = 0..n_cut. Hermitian, PSD, trace within the truncation
/// tolerance of 1. Immutable after construction.
class SingleModeSource {
public:
    /// Validates and stores rho; `trace_deficit` is the mass the truncation
    /// dropped (0 for exact states). `renormalize` divides by the trace when
    /// the deviation is within tolerance.
    SingleModeSource(ComplexMatrix rho, std::string label, double trace_deficit = 0.0,
                     bool renormalize = false);

    int n_cut() const { return static_cast<int>(rho_.rows()) - 1; }
    const ComplexMatrix& rho() const { return rho_; }
    cdouble rho(int n, int m) const {
        return rho_(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
    }
    const std::string& label() const { return label_; }

    /// Trace mass lost to truncation, certified by the constructor.
    double trace_deficit() const { return trace_deficit_; }

    /// True iff rho = |j><j| for some Fock level j (within 1e-12).
    bool is_fock() const { return fock_level_.has_value(); }

    /// The Fock level when is_fock(); throws otherwise.
    int fock_level() const;

    /// True iff the state is exactly the vacuum projector.
    bool is_vacuum() const { return fock_level_ == 0; }

private:
    ComplexMatrix rho_;
    std::string label_;
    double trace_deficit_;
    std::optional<int> fock_level_;
};

/// Coefficients g_{n,m} = rho_{n,m} / sqrt(n! m!) of the phase-space series
/// expansion of the source state.
struct HusimiSeries {
    ComplexMatrix g;

    int n_cut() const { return static_cast<int>(g.rows()) - 1; }
    cdouble operator()(int n, int m) const {
        return g(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
    }
};

/// Fock state |n><n| on a basis truncated at n_cut (n <= n_cut required).
SingleModeSource fock(int n, int n_cut);

/// Coherent state with amplitude alpha, truncated at n_cut. Fails with a
/// cutoff error (and a suggested n_cut) when the Poisson tail beyond n_cut
/// exceeds the truncation tolerance.
SingleModeSource coherent(cdouble alpha, int n_cut,
                          double truncation_tolerance = kTruncationTolerance);

/// Thermal state with mean occupation nbar, truncated at n_cut.
SingleModeSource thermal(double nbar, int n_cut,
                         double truncation_tolerance = kTruncationTolerance);

/// Arbitrary user-supplied density matrix; validated, and renormalized only
/// if |trace - 1| is within the truncation tolerance.
SingleModeSource custom(ComplexMatrix rho, double truncation_tolerance = kTruncationTolerance,
                        std::string label = "custom");

/// g_{n,m} = rho_{n,m} / sqrt(n! m!).
HusimiSeries husimi_series(const SingleModeSource& src);

}  // namespace lopsim

#endif
