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

#include "lopsim/distinguishability.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "lopsim/linalg.hpp"

namespace lopsim {

namespace {
constexpr double kNormTol = 1e-10;
constexpr double kHermTol = 1e-12;
constexpr double kPsdTol = 1e-9;
constexpr double kDiagTol = 1e-10;
}  // namespace

ModeVector::ModeVector(std::vector<cdouble> amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty())
        raise(ErrorKind::Validation, "ModeVector: internal dimension must be >= 1");
    double norm2 = 0.0;
    for (const auto& a : amplitudes_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            raise(ErrorKind::Validation, "ModeVector: non-finite amplitude");
        norm2 += std::norm(a);
    }
    if (std::abs(norm2 - 1.0) > kNormTol)
        raise(ErrorKind::Validation,
              "ModeVector: squared norm " + std::to_string(norm2) + " deviates from 1 beyond 1e-10");
}

GramMatrix::GramMatrix(ComplexMatrix v) : v_(std::move(v)) {
    if (!v_.square()) raise(ErrorKind::Dimension, "GramMatrix: matrix must be square");
    v_.validate_finite("GramMatrix");
    std::string diag;
    if ((v_ - v_.adjoint()).max_abs() > kHermTol)
        raise(ErrorKind::Validation, "GramMatrix: not Hermitian within 1e-12");
    for (std::size_t k = 0; k < v_.rows(); ++k) {
        if (std::abs(v_(k, k) - cdouble{1.0, 0.0}) > kDiagTol)
            raise(ErrorKind::Validation,
                  "GramMatrix: diagonal entry " + std::to_string(k) + " deviates from 1");
    }
    // Cauchy-Schwarz: overlaps of unit vectors cannot exceed 1. Catches
    // hand-written matrices before the eigenvalue check does.
    for (std::size_t k = 0; k < v_.rows(); ++k)
        for (std::size_t l = 0; l < v_.cols(); ++l)
            if (std::abs(v_(k, l)) > 1.0 + kNormTol)
                raise(ErrorKind::Validation, "GramMatrix: |V_{" + std::to_string(k) + "," +
                                                 std::to_string(l) + "}| > 1 (Cauchy-Schwarz violated)");
    if (!check_hermitian_psd(v_, kPsdTol, &diag))
        raise(ErrorKind::Validation, "GramMatrix: not positive semi-definite (" + diag + ")");
}

GramMatrix GramMatrix::restricted(const std::vector<std::size_t>& indices) const {
    ComplexMatrix sub(indices.size(), indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i)
        for (std::size_t j = 0; j < indices.size(); ++j) sub(i, j) = v_(indices[i], indices[j]);
    return GramMatrix(std::move(sub));
}

GramMatrix gram_matrix(const std::vector<ModeVector>& modes) {
    if (modes.empty()) return GramMatrix(ComplexMatrix(0, 0));
    const std::size_t d = modes.front().dim();
    for (const auto& m : modes)
        if (m.dim() != d)
            raise(ErrorKind::Dimension, "gram_matrix: mode vectors have mixed internal dimensions");
    ComplexMatrix v(modes.size(), modes.size());
    for (std::size_t k = 0; k < modes.size(); ++k) {
        for (std::size_t l = 0; l < modes.size(); ++l) {
            cdouble dot = 0.0;
            for (std::size_t s = 0; s < d; ++s) dot += std::conj(modes[k][s]) * modes[l][s];
            v(k, l) = dot;
        }
    }
    // Enforce an exactly unit diagonal; roundoff in the inner product would
    // otherwise trip the constructor's diagonal check needlessly.
    for (std::size_t k = 0; k < modes.size(); ++k) v(k, k) = 1.0;
    return GramMatrix(std::move(v));
}

GramMatrix model_uniform_overlap(std::size_t m, cdouble v) {
    ComplexMatrix mat(m, m);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t l = 0; l < m; ++l) {
            if (k == l)
                mat(k, l) = 1.0;
            else
                mat(k, l) = (k < l) ? v : std::conj(v);
        }
    }
    return GramMatrix(std::move(mat));  // constructor performs the PSD validation
}

GramMatrix embed_block_with_vacuum(const GramMatrix& v_nonvac, std::size_t vac_count) {
    const std::size_t n = v_nonvac.size();
    ComplexMatrix out(n + vac_count, n + vac_count);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) out(k, l) = v_nonvac(k, l);
    for (std::size_t k = n; k < n + vac_count; ++k) out(k, k) = 1.0;
    return GramMatrix(std::move(out));
}

std::vector<ModeVector> factor_gram(const GramMatrix& v, double tol) {
    const std::size_t m = v.size();
    Eigen::MatrixXcd ev(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) ev(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(ev);
    std::vector<std::size_t> kept;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        if (solver.eigenvalues()(i) > tol) kept.push_back(static_cast<std::size_t>(i));
    if (kept.empty())
        raise(ErrorKind::Validation, "factor_gram: matrix has no positive eigenvalues");
    std::vector<ModeVector> out;
    out.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        std::vector<cdouble> amps(kept.size());
        double norm2 = 0.0;
        for (std::size_t i = 0; i < kept.size(); ++i) {
            const auto idx = static_cast<Eigen::Index>(kept[i]);
            // phi_k[i] = sqrt(lambda_i) * conj(E_{k,i}) so that
            // phi_k^dag phi_l = sum_i lambda_i E_{k,i} conj(E_{l,i}) = V_{k,l}.
            amps[i] = std::sqrt(solver.eigenvalues()(idx)) *
                      std::conj(solver.eigenvectors()(static_cast<Eigen::Index>(k), idx));
            norm2 += std::norm(amps[i]);
        }
        // Unit diagonal of V guarantees norm2 ~ 1; renormalize roundoff away.
        const double scale = 1.0 / std::sqrt(norm2);
        for (auto& a : amps) a *= scale;
        out.emplace_back(std::move(amps));
    }
    return out;
}

}  // namespace lopsim
