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

#ifndef LOPSIM_MULTIMODE_HPP
#define LOPSIM_MULTIMODE_HPP

#include <cstdint>
#include <vector>

#include "lopsim/counting_engine.hpp"

// Monte-Carlo estimation of the zero-count probability for sources with d
// internal modes. Only states whose phase-space (Husimi) density is a
// product of complex Gaussians are admitted, so the proposal sampling is
// exact and the only estimator error is statistical.

namespace lopsim {

struct HusimiMode {
    enum class Kind { Vacuum, Coherent, Thermal };
    Kind kind = Kind::Vacuum;
    cdouble alpha{};    // displacement, Coherent only
    double nbar = 0.0;  // mean occupation, Thermal only
};

/// One source: a Gaussian phase-space density per internal mode.
struct SamplableHusimiSource {
    std::vector<HusimiMode> modes;  // length d
};

struct MultimodeScenario {
    ComplexMatrix network;                       // M x M unitary
    std::vector<SamplableHusimiSource> sources;  // length M
    DetectorBank detectors;                      // all eta <= 1 - 1e-6
    std::size_t internal_dim = 1;                // d
    long long sample_count = 0;
    std::uint64_t rng_seed = 0;                  // required; no entropy defaults
};

MultimodeScenario make_multimode_scenario(ComplexMatrix network,
                                          std::vector<SamplableHusimiSource> sources,
                                          DetectorBank detectors, std::size_t internal_dim,
                                          long long sample_count, std::uint64_t rng_seed);

/// The (M*d) x (M*d) matrix U (I - Lambda) U^dag (x) I_d. Its determinant is
/// validated against prod_k (1 - eta_k)^d to 1e-9. Efficiencies at 1 make it
/// singular and are rejected.
ComplexMatrix build_calligraphic_H(const ComplexMatrix& network, const DetectorBank& detectors,
                                   std::size_t internal_dim);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    long long samples = 0;
};

/// Importance-sampled vacuum probability: draws each mode's amplitude from
/// its own Husimi density and averages the exponential weight
/// exp(-alpha^dag (H^-1 - I) alpha) / prod_k (1-eta_k)^d. Substreams are
/// derived per sample from rng_seed and the mean uses deterministic pairwise
/// summation, so the result does not depend on the worker count.
McEstimate estimate_vacuum_probability(const MultimodeScenario& ms);

}  // namespace lopsim

#endif
