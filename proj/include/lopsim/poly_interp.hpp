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

#ifndef LOPSIM_POLY_INTERP_HPP
#define LOPSIM_POLY_INTERP_HPP

#include <vector>

#include "lopsim/complex_matrix.hpp"

namespace lopsim {

/// Monomial coefficients c_0..c_D of the unique degree-D polynomial through
/// (nodes[j], values[j]), found by solving the Vandermonde system. Raises a
/// numeric error when the 1-norm condition estimate of the system exceeds
/// `condition_limit`.
std::vector<cdouble> polynomial_coefficients(const std::vector<cdouble>& nodes,
                                             const std::vector<cdouble>& values,
                                             double condition_limit = 1e12);

/// Node offsets around an expansion point for sampling a polynomial whose
/// coefficients are then recovered by polynomial_coefficients.
enum class DerivativeNodes {
    /// count-th roots of unity: t_j = exp(2*pi*i*j/count). The Vandermonde
    /// system is the DFT matrix (condition = count); coefficient extraction
    /// amplifies sample noise by only ~k! for the k-th derivative.
    Circle,
    /// Chebyshev points mapped to [0,1], returned as offsets from `center`.
    /// Ill-conditioned in the monomial basis beyond degree ~15; kept for
    /// comparison and exercised by the conditioning-error path.
    Chebyshev
};

std::vector<cdouble> derivative_node_offsets(DerivativeNodes kind, double center, std::size_t count);

}  // namespace lopsim

#endif
