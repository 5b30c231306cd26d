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

#ifndef LOPSIM_COMPLEX_MATRIX_HPP
#define LOPSIM_COMPLEX_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "lopsim/errors.hpp"

namespace lopsim {

using cdouble = std::complex<double>;

/// Dense complex matrix, row-major. All entries must stay finite; callers
/// that build matrices from user input run validate_finite().
class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, cdouble fill = {})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    /// Row-of-rows construction, convenient in tests and parsers.
    ComplexMatrix(std::initializer_list<std::initializer_list<cdouble>> rows);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cdouble& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cdouble& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    cdouble* data() { return data_.data(); }
    const cdouble* data() const { return data_.data(); }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;

    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix operator+(const ComplexMatrix& rhs) const;
    ComplexMatrix operator-(const ComplexMatrix& rhs) const;
    ComplexMatrix operator*(cdouble scale) const;

    /// Largest entrywise magnitude; zero for empty matrices.
    double max_abs() const;

    cdouble trace() const;

    /// Throws a validation error if any entry is NaN or infinite.
    void validate_finite(const char* what = "matrix") const;

    bool same_shape(const ComplexMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    std::size_t rows_, cols_;
    std::vector<cdouble> data_;
};

/// Non-negative photon counts / repetition multiplicities per index.
struct OccupationVector {
    std::vector<int> counts;

    OccupationVector() = default;
    explicit OccupationVector(std::vector<int> c);
    OccupationVector(std::initializer_list<int> c);

    std::size_t size() const { return counts.size(); }
    int operator[](std::size_t i) const { return counts[i]; }
    int& operator[](std::size_t i) { return counts[i]; }

    /// |n| = sum of all counts.
    int total() const;

    bool operator==(const OccupationVector& o) const { return counts == o.counts; }
    bool operator<(const OccupationVector& o) const { return counts < o.counts; }
};

/// All occupation vectors with component bounds `limits` and total `total`,
/// in lexicographic order. `limits[i] < 0` means unbounded.
std::vector<OccupationVector> enumerate_occupations(const std::vector<int>& limits, int total);

/// All occupation vectors of length `size` with |n| <= max_total, ordered by
/// total then lexicographically. Used for outcome-pattern enumeration.
std::vector<OccupationVector> enumerate_patterns(std::size_t size, int max_total);

}  // namespace lopsim

#endif
