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

#ifndef LOPSIM_TEST_HELPERS_HPP
#define LOPSIM_TEST_HELPERS_HPP

#include <cmath>
#include <random>
#include <vector>

#include "lopsim/counting_engine.hpp"
#include "lopsim/distinguishability.hpp"
#include "lopsim/linalg.hpp"

namespace lopsim::testing {

inline cdouble random_complex(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    return {unit(rng), unit(rng)};
}

inline ComplexMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = random_complex(rng);
    return a;
}

/// Haar-like random unitary: Gram-Schmidt on a complex Ginibre matrix.
inline ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = cdouble{normal(rng), normal(rng)};
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t prev = 0; prev < col; ++prev) {
            cdouble dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += std::conj(a(i, prev)) * a(i, col);
            for (std::size_t i = 0; i < n; ++i) a(i, col) -= dot * a(i, prev);
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm += std::norm(a(i, col));
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < n; ++i) a(i, col) /= norm;
    }
    return a;
}

/// Random unit-norm internal-mode vector of dimension d.
inline ModeVector random_mode_vector(std::size_t d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<cdouble> amps(d);
    double norm = 0.0;
    for (auto& a : amps) {
        a = cdouble{normal(rng), normal(rng)};
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto& a : amps) a /= norm;
    return ModeVector(std::move(amps));
}

/// Random PSD unit-diagonal Gram matrix of given size from d-dim vectors.
inline std::vector<ModeVector> random_modes(std::size_t count, std::size_t d,
                                            std::mt19937_64& rng) {
    std::vector<ModeVector> out;
    for (std::size_t k = 0; k < count; ++k) out.push_back(random_mode_vector(d, rng));
    return out;
}

inline DetectorBank uniform_detectors(std::size_t m, double eta) {
    return DetectorBank(std::vector<double>(m, eta));
}

/// The canonical two-photon interference scenario: 50/50 real beamsplitter,
/// one photon per port, overlap v between the internal modes.
inline Scenario hom_scenario(double v, double eta1 = 1.0, double eta2 = 1.0) {
    const double s = std::sqrt(0.5);
    ComplexMatrix u{{s, s}, {s, -s}};
    std::vector<ModeVector> modes;
    modes.emplace_back(std::vector<cdouble>{1.0, 0.0});
    modes.emplace_back(std::vector<cdouble>{v, std::sqrt(1.0 - v * v)});
    auto gram = gram_matrix(modes);
    return make_scenario(std::move(u), {fock(1, 1), fock(1, 1)}, std::move(gram),
                         DetectorBank({eta1, eta2}), 2, std::move(modes));
}

}  // namespace lopsim::testing

#endif
