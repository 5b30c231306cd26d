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

#ifndef LOPSIM_DISTINGUISHABILITY_HPP
#define LOPSIM_DISTINGUISHABILITY_HPP

#include <cstddef>
#include <vector>

#include "lopsim/complex_matrix.hpp"

namespace lopsim {

/// Internal-mode vector of a source: unit-norm expansion coefficients over
/// an abstract internal basis of dimension d >= 1. Only pairwise inner
/// products of these vectors ever enter the probabilities, so d is decoupled
/// from the port count.
class ModeVector {
public:
    explicit ModeVector(std::vector<cdouble> amplitudes);

    std::size_t dim() const { return amplitudes_.size(); }
    const std::vector<cdouble>& amplitudes() const { return amplitudes_; }
    cdouble operator[](std::size_t i) const { return amplitudes_[i]; }

private:
    std::vector<cdouble> amplitudes_;
};

/// Pairwise-overlap (Gram) matrix of the sources' internal modes:
/// Hermitian, positive semi-definite, unit diagonal. V = I means fully
/// distinguishable sources; V = all-ones fully indistinguishable.
class GramMatrix {
public:
    /// Validates Hermiticity (1e-12), PSD (-1e-9) and unit diagonal (1e-10).
    explicit GramMatrix(ComplexMatrix v);

    std::size_t size() const { return v_.rows(); }
    const ComplexMatrix& matrix() const { return v_; }
    cdouble operator()(std::size_t k, std::size_t l) const { return v_(k, l); }

    /// Principal submatrix on the given indices (still a valid Gram matrix).
    GramMatrix restricted(const std::vector<std::size_t>& indices) const;

private:
    ComplexMatrix v_;
};

/// V_{k,l} = phi_k^dag phi_l. All vectors must share one dimension and be
/// normalized to 1e-10.
GramMatrix gram_matrix(const std::vector<ModeVector>& modes);

/// V with unit diagonal and constant off-diagonal overlap v (Hermitian
/// completion: conj(v) below the diagonal). Rejected if not PSD; for real v
/// the admissible range is -1/(m-1) <= v <= 1.
GramMatrix model_uniform_overlap(std::size_t m, cdouble v);

/// Block-diagonal extension diag(V, I_vac): vacuum internal modes orthogonal
/// to each other and to everything else.
GramMatrix embed_block_with_vacuum(const GramMatrix& v_nonvac, std::size_t vac_count);

/// Factorizes V = Phi^dag Phi: returns one vector per source whose pairwise
/// inner products reproduce V. Dimension = number of eigenvalues above tol.
std::vector<ModeVector> factor_gram(const GramMatrix& v, double tol = 1e-12);

}  // namespace lopsim

#endif
