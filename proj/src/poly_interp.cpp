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

#include "lopsim/poly_interp.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace lopsim {

namespace {

// Dense LU with partial pivoting; A is overwritten, returns the row
// permutation. Sized for interpolation systems (n <= ~30).
std::vector<std::size_t> lu_factor(ComplexMatrix& a) {
    const std::size_t n = a.rows();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double mag = std::abs(a(r, col));
            if (mag > best) {
                best = mag;
                pivot = r;
            }
        }
        if (best == 0.0)
            raise(ErrorKind::Numeric, "interpolation system is singular (duplicate nodes?)");
        if (pivot != col) {
            std::swap(perm[col], perm[pivot]);
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const cdouble f = a(r, col) / a(col, col);
            a(r, col) = f;
            for (std::size_t j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
        }
    }
    return perm;
}

std::vector<cdouble> lu_solve(const ComplexMatrix& lu, const std::vector<std::size_t>& perm,
                              const std::vector<cdouble>& b) {
    const std::size_t n = lu.rows();
    std::vector<cdouble> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
        x[i] /= lu(i, i);
    }
    return x;
}

double one_norm(const ComplexMatrix& a) {
    double best = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

}  // namespace

std::vector<cdouble> polynomial_coefficients(const std::vector<cdouble>& nodes,
                                             const std::vector<cdouble>& values,
                                             double condition_limit) {
    if (nodes.size() != values.size() || nodes.empty())
        raise(ErrorKind::Dimension, "polynomial_coefficients: node/value count mismatch");
    const std::size_t n = nodes.size();
    ComplexMatrix vand(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        cdouble p = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            vand(j, k) = p;
            p *= nodes[j];
        }
    }
    const double norm_a = one_norm(vand);
    auto perm = lu_factor(vand);

    // Condition estimate through the explicit inverse; the systems are small.
    ComplexMatrix inv(n, n);
    std::vector<cdouble> unit(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        unit[j] = 1.0;
        auto col = lu_solve(vand, perm, unit);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
        unit[j] = 0.0;
    }
    const double cond = norm_a * one_norm(inv);
    if (cond > condition_limit)
        raise(ErrorKind::Numeric,
              "interpolation system condition estimate " + std::to_string(cond) +
                  " exceeds " + std::to_string(condition_limit) +
                  "; lower the scenario cutoff (p_max) or use circle nodes");

    return lu_solve(vand, perm, values);
}

std::vector<cdouble> derivative_node_offsets(DerivativeNodes kind, double center,
                                             std::size_t count) {
    std::vector<cdouble> out(count);
    if (kind == DerivativeNodes::Circle) {
        for (std::size_t j = 0; j < count; ++j) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) /
                                 static_cast<double>(count);
            out[j] = cdouble{std::cos(theta), std::sin(theta)};
        }
    } else {
        for (std::size_t j = 0; j < count; ++j) {
            const double x = std::cos(std::numbers::pi * (2.0 * static_cast<double>(j) + 1.0) /
                                      (2.0 * static_cast<double>(count)));
            out[j] = cdouble{0.5 * (x + 1.0) - center, 0.0};
        }
    }
    return out;
}

}  // namespace lopsim
