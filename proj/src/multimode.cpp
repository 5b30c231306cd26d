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

#include "lopsim/multimode.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "lopsim/linalg.hpp"
#include "lopsim/rng.hpp"

namespace lopsim {

namespace {

constexpr double kEtaCeiling = 1.0 - 1e-6;
constexpr long long kMaxSamples = 100000000;

// Deterministic pairwise reduction; order is fixed by the index range alone.
double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

}  // namespace

MultimodeScenario make_multimode_scenario(ComplexMatrix network,
                                          std::vector<SamplableHusimiSource> sources,
                                          DetectorBank detectors, std::size_t internal_dim,
                                          long long sample_count, std::uint64_t rng_seed) {
    network.validate_finite("network");
    std::string diag;
    if (!check_unitary(network, 1e-10, &diag))
        raise(ErrorKind::Validation, "MultimodeScenario: network is not unitary (" + diag + ")");
    const std::size_t m = network.rows();
    if (sources.size() != m)
        raise(ErrorKind::Dimension, "MultimodeScenario: source count != port count");
    if (detectors.size() != m)
        raise(ErrorKind::Dimension, "MultimodeScenario: detector count != port count");
    if (internal_dim == 0)
        raise(ErrorKind::Validation, "MultimodeScenario: internal dimension must be >= 1");
    for (const auto& src : sources) {
        if (src.modes.size() != internal_dim)
            raise(ErrorKind::Dimension,
                  "MultimodeScenario: a source does not list exactly d internal modes");
        for (const auto& mode : src.modes)
            if (mode.kind == HusimiMode::Kind::Thermal && mode.nbar < 0.0)
                raise(ErrorKind::Validation, "MultimodeScenario: thermal nbar must be >= 0");
    }
    for (double e : detectors.eta())
        if (e > kEtaCeiling)
            raise(ErrorKind::Validation,
                  "MultimodeScenario: efficiency " + std::to_string(e) +
                      " too close to 1; the integral form is singular there "
                      "(use the single-mode series engine)");
    if (sample_count < 1)
        raise(ErrorKind::Validation, "MultimodeScenario: sample_count must be >= 1");
    if (sample_count > kMaxSamples)
        raise(ErrorKind::SizeGuard, "MultimodeScenario: sample_count exceeds guard");
    return MultimodeScenario{std::move(network), std::move(sources), std::move(detectors),
                             internal_dim, sample_count, rng_seed};
}

ComplexMatrix build_calligraphic_H(const ComplexMatrix& network, const DetectorBank& detectors,
                                   std::size_t internal_dim) {
    if (!network.square() || network.rows() != detectors.size())
        raise(ErrorKind::Dimension, "build_calligraphic_H: network/detector shape mismatch");
    for (double e : detectors.eta())
        if (e > kEtaCeiling)
            raise(ErrorKind::Singularity,
                  "build_calligraphic_H: efficiency " + std::to_string(e) +
                      " makes the matrix singular");
    const std::size_t m = network.rows();
    ComplexMatrix core(m, m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j < m; ++j) {
            cdouble acc = 0.0;
            for (std::size_t l = 0; l < m; ++l)
                acc += network(k, l) * (1.0 - detectors[l]) * std::conj(network(j, l));
            core(k, j) = acc;
        }
    const std::size_t dim = m * internal_dim;
    ComplexMatrix h(dim, dim);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t s = 0; s < internal_dim; ++s)
                h(k * internal_dim + s, j * internal_dim + s) = core(k, j);

    // det(H) = prod_k (1-eta_k)^d; an independent LU determinant checks the
    // assembled tensor structure.
    Eigen::MatrixXcd he(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            he(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h(i, j);
    double expected = 1.0;
    for (double e : detectors.eta())
        expected *= std::pow(1.0 - e, static_cast<double>(internal_dim));
    const cdouble det = he.determinant();
    if (std::abs(det - expected) > 1e-9)
        raise(ErrorKind::Numeric, "build_calligraphic_H: determinant " + std::to_string(det.real()) +
                                      " deviates from " + std::to_string(expected));
    return h;
}

McEstimate estimate_vacuum_probability(const MultimodeScenario& ms) {
    const std::size_t m = ms.network.rows();
    const std::size_t d = ms.internal_dim;

    // H^-1 - I = U diag(eta/(1-eta)) U^dag (x) I_d; only the M x M port core
    // is needed for the quadratic form.
    ComplexMatrix core(m, m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j < m; ++j) {
            cdouble acc = 0.0;
            for (std::size_t l = 0; l < m; ++l) {
                const double e = ms.detectors[l];
                if (e > kEtaCeiling)
                    raise(ErrorKind::Singularity,
                          "estimate_vacuum_probability: efficiency too close to 1");
                acc += ms.network(k, l) * (e / (1.0 - e)) * std::conj(ms.network(j, l));
            }
            core(k, j) = acc;
        }
    double det_factor = 1.0;
    for (double e : ms.detectors.eta()) det_factor *= std::pow(1.0 - e, static_cast<double>(d));

    const auto count = static_cast<std::size_t>(ms.sample_count);
    std::vector<double> weights(count, 0.0);

#pragma omp parallel for schedule(static)
    for (long long i = 0; i < ms.sample_count; ++i) {
        auto rng = SplitMix64::substream(ms.rng_seed, static_cast<std::uint64_t>(i));
        // One complex amplitude per (port, internal mode), drawn from that
        // mode's own Husimi density.
        std::vector<cdouble> alpha(m * d);
        for (std::size_t k = 0; k < m; ++k) {
            for (std::size_t s = 0; s < d; ++s) {
                const auto& mode = ms.sources[k].modes[s];
                const auto [gx, gy] = rng.normal_pair();
                double sigma = std::numbers::sqrt2 / 2.0;  // vacuum / coherent
                cdouble center{};
                if (mode.kind == HusimiMode::Kind::Coherent) {
                    center = mode.alpha;
                } else if (mode.kind == HusimiMode::Kind::Thermal) {
                    sigma = std::sqrt((1.0 + mode.nbar) / 2.0);
                }
                alpha[k * d + s] = center + cdouble{sigma * gx, sigma * gy};
            }
        }
        // q = alpha^dag (H^-1 - I) alpha, real for the Hermitian core.
        double q = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            for (std::size_t j = 0; j < m; ++j) {
                cdouble inner = 0.0;
                for (std::size_t s = 0; s < d; ++s)
                    inner += std::conj(alpha[k * d + s]) * alpha[j * d + s];
                q += (core(k, j) * inner).real();
            }
        }
        weights[static_cast<std::size_t>(i)] = std::exp(-q) / det_factor;
    }

    const double mean = pairwise_sum(weights, 0, count) / static_cast<double>(count);
    std::vector<double> sq(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double dlt = weights[i] - mean;
        sq[i] = dlt * dlt;
    }
    double se = 0.0;
    if (count > 1)
        se = std::sqrt(pairwise_sum(sq, 0, count) /
                       (static_cast<double>(count) * static_cast<double>(count - 1)));
    return McEstimate{mean, se, ms.sample_count};
}

}  // namespace lopsim
