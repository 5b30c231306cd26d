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

#include "lopsim/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>

namespace lopsim {

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.same_shape(b))
        raise(ErrorKind::Dimension, "hadamard: shapes differ (" + std::to_string(a.rows()) + "x" +
                                        std::to_string(a.cols()) + " vs " +
                                        std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                                        ")");
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) * b(i, j);
    return out;
}

namespace {

std::vector<std::size_t> expand_indices(const OccupationVector& occ) {
    std::vector<std::size_t> idx;
    idx.reserve(static_cast<std::size_t>(occ.total()));
    for (std::size_t k = 0; k < occ.size(); ++k)
        for (int r = 0; r < occ[k]; ++r) idx.push_back(k);
    return idx;
}

}  // namespace

ComplexMatrix submatrix_with_repetition(const ComplexMatrix& h, const OccupationVector& row_occ,
                                        const OccupationVector& col_occ) {
    if (row_occ.size() != h.rows() || col_occ.size() != h.cols())
        raise(ErrorKind::Dimension, "submatrix_with_repetition: occupation length does not match matrix");
    if (row_occ.total() != col_occ.total())
        raise(ErrorKind::Dimension, "submatrix_with_repetition: |row_occ| != |col_occ| (pattern mismatch)");
    const auto rows = expand_indices(row_occ);
    const auto cols = expand_indices(col_occ);
    ComplexMatrix out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = h(rows[i], cols[j]);
    return out;
}

cdouble permanent_naive(const ComplexMatrix& a) {
    if (!a.square()) raise(ErrorKind::Dimension, "permanent_naive: matrix is not square");
    const std::size_t n = a.rows();
    if (n > kPermanentNaiveMaxN)
        raise(ErrorKind::SizeGuard, "permanent_naive: n = " + std::to_string(n) + " exceeds guard " +
                                        std::to_string(kPermanentNaiveMaxN));
    if (n == 0) return 1.0;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    cdouble sum = 0.0;
    do {
        cdouble prod = 1.0;
        for (std::size_t i = 0; i < n; ++i) prod *= a(i, perm[i]);
        sum += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

namespace {

// Ryser with Gray-code ordering over the non-empty column subsets S of a
// fixed block [begin, end): consecutive subsets differ in one column, so the
// row sums are updated in O(n) per subset.
//
// per(A) = (-1)^n * sum_S (-1)^|S| prod_i sum_{j in S} a_ij
cdouble ryser_block(const ComplexMatrix& a, std::uint64_t begin, std::uint64_t end) {
    const std::size_t n = a.rows();
    std::vector<cdouble> rowsum(n, 0.0);
    // Row sums for the Gray code of the first subset in the block.
    std::uint64_t gray = begin ^ (begin >> 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (gray & (1ULL << j))
            for (std::size_t i = 0; i < n; ++i) rowsum[i] += a(i, j);
    }
    cdouble block_sum = 0.0;
    for (std::uint64_t k = begin; k < end; ++k) {
        if (k != begin) {
            const std::uint64_t next_gray = k ^ (k >> 1);
            const std::uint64_t flipped = gray ^ next_gray;
            const std::size_t j = static_cast<std::size_t>(std::countr_zero(flipped));
            if (next_gray & flipped)
                for (std::size_t i = 0; i < n; ++i) rowsum[i] += a(i, j);
            else
                for (std::size_t i = 0; i < n; ++i) rowsum[i] -= a(i, j);
            gray = next_gray;
        }
        if (gray == 0) continue;
        cdouble prod = 1.0;
        for (std::size_t i = 0; i < n; ++i) prod *= rowsum[i];
        block_sum += (std::popcount(gray) & 1) ? -prod : prod;
    }
    return block_sum;
}

void ryser_check_input(const ComplexMatrix& a) {
    if (!a.square()) raise(ErrorKind::Dimension, "permanent_ryser: matrix is not square");
    if (a.rows() > kPermanentRyserMaxN)
        raise(ErrorKind::SizeGuard, "permanent_ryser: n = " + std::to_string(a.rows()) +
                                        " exceeds guard " + std::to_string(kPermanentRyserMaxN));
}

}  // namespace

cdouble permanent_ryser_serial(const ComplexMatrix& a) {
    ryser_check_input(a);
    const std::size_t n = a.rows();
    if (n == 0) return 1.0;
    cdouble sum = ryser_block(a, 0, 1ULL << n);
    return (n & 1) ? -sum : sum;
}

cdouble permanent_ryser(const ComplexMatrix& a) {
    ryser_check_input(a);
    const std::size_t n = a.rows();
    if (n == 0) return 1.0;
    const std::uint64_t total = 1ULL << n;

    // Fixed block size keeps the partial-sum layout independent of the
    // thread count; block results are reduced in index order.
    constexpr std::uint64_t kBlock = 1ULL << 16;
    if (total <= kBlock) {
        cdouble sum = ryser_block(a, 0, total);
        return (n & 1) ? -sum : sum;
    }
    const std::uint64_t nblocks = (total + kBlock - 1) / kBlock;
    std::vector<cdouble> partial(nblocks, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
        const std::uint64_t begin = static_cast<std::uint64_t>(b) * kBlock;
        const std::uint64_t end = std::min(begin + kBlock, total);
        partial[static_cast<std::size_t>(b)] = ryser_block(a, begin, end);
    }
    cdouble sum = 0.0;
    for (const auto& p : partial) sum += p;
    return (n & 1) ? -sum : sum;
}

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& a) {
    Eigen::MatrixXcd m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
    return m;
}

}  // namespace

bool check_unitary(const ComplexMatrix& u, double tol, std::string* diagnostic) {
    if (!u.square()) {
        if (diagnostic) *diagnostic = "matrix is not square";
        return false;
    }
    const ComplexMatrix res = u.adjoint() * u - ComplexMatrix::identity(u.rows());
    const double r = res.max_abs();
    if (diagnostic) *diagnostic = "unitarity residual " + std::to_string(r);
    return r <= tol;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
    if (!a.square()) raise(ErrorKind::Dimension, "hermitian_eigenvalues: matrix is not square");
    Eigen::MatrixXcd m = to_eigen(a);
    Eigen::MatrixXcd sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym, Eigen::EigenvaluesOnly);
    std::vector<double> out(static_cast<std::size_t>(solver.eigenvalues().size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    return out;
}

bool check_hermitian_psd(const ComplexMatrix& a, double tol, std::string* diagnostic) {
    if (!a.square()) {
        if (diagnostic) *diagnostic = "matrix is not square";
        return false;
    }
    const double herm_res = (a - a.adjoint()).max_abs();
    if (herm_res > tol) {
        if (diagnostic) *diagnostic = "hermiticity residual " + std::to_string(herm_res);
        return false;
    }
    if (a.rows() == 0) return true;
    const auto evals = hermitian_eigenvalues(a);
    const double min_eval = evals.front();
    if (diagnostic) *diagnostic = "minimum eigenvalue " + std::to_string(min_eval);
    return min_eval >= -tol;
}

namespace {

std::array<double, 171> build_factorials() {
    std::array<double, 171> f{};
    f[0] = 1.0;
    for (int i = 1; i <= 170; ++i) f[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(i - 1)] * i;
    return f;
}

const std::array<double, 171> kFactorials = build_factorials();

}  // namespace

double factorial(int n) {
    if (n < 0 || n > 170)
        raise(ErrorKind::SizeGuard, "factorial: n = " + std::to_string(n) +
                                        " outside double-precision table [0, 170]");
    return kFactorials[static_cast<std::size_t>(n)];
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

}  // namespace lopsim
