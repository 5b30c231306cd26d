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

#include "lopsim/complex_matrix.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace lopsim {

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cdouble>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            raise(ErrorKind::Dimension, "ragged initializer for ComplexMatrix");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

ComplexMatrix ComplexMatrix::conj() const {
    ComplexMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < rows_ * cols_; ++i) m.data_[i] = std::conj(data_[i]);
    return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (cols_ != rhs.rows_)
        raise(ErrorKind::Dimension, "matrix product shape mismatch: " + std::to_string(rows_) +
                                        "x" + std::to_string(cols_) + " * " +
                                        std::to_string(rhs.rows_) + "x" + std::to_string(rhs.cols_));
    ComplexMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const cdouble aik = (*this)(i, k);
            if (aik == cdouble{}) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
    if (!same_shape(rhs)) raise(ErrorKind::Dimension, "matrix sum shape mismatch");
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + rhs.data_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
    if (!same_shape(rhs)) raise(ErrorKind::Dimension, "matrix difference shape mismatch");
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - rhs.data_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator*(cdouble scale) const {
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] * scale;
    return out;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

cdouble ComplexMatrix::trace() const {
    cdouble t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

void ComplexMatrix::validate_finite(const char* what) const {
    for (const auto& v : data_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            raise(ErrorKind::Validation, std::string(what) + " contains a non-finite entry");
    }
}

OccupationVector::OccupationVector(std::vector<int> c) : counts(std::move(c)) {
    for (int v : counts)
        if (v < 0) raise(ErrorKind::Validation, "occupation counts must be non-negative");
}

OccupationVector::OccupationVector(std::initializer_list<int> c)
    : OccupationVector(std::vector<int>(c)) {}

int OccupationVector::total() const {
    return std::accumulate(counts.begin(), counts.end(), 0);
}

namespace {

void enumerate_rec(const std::vector<int>& limits, int remaining, std::size_t pos,
                   std::vector<int>& cur, std::vector<OccupationVector>& out) {
    if (pos + 1 == cur.size()) {
        const int lim = limits[pos];
        if (lim < 0 || remaining <= lim) {
            cur[pos] = remaining;
            out.emplace_back(cur);
        }
        return;
    }
    const int lim = limits[pos];
    const int top = (lim < 0) ? remaining : std::min(lim, remaining);
    for (int v = 0; v <= top; ++v) {
        cur[pos] = v;
        enumerate_rec(limits, remaining - v, pos + 1, cur, out);
    }
}

}  // namespace

std::vector<OccupationVector> enumerate_occupations(const std::vector<int>& limits, int total) {
    std::vector<OccupationVector> out;
    if (limits.empty()) {
        if (total == 0) out.emplace_back(std::vector<int>{});
        return out;
    }
    std::vector<int> cur(limits.size(), 0);
    enumerate_rec(limits, total, 0, cur, out);
    return out;
}

std::vector<OccupationVector> enumerate_patterns(std::size_t size, int max_total) {
    std::vector<OccupationVector> out;
    std::vector<int> limits(size, -1);
    for (int t = 0; t <= max_total; ++t) {
        auto layer = enumerate_occupations(limits, t);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

}  // namespace lopsim
