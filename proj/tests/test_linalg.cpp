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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lopsim/linalg.hpp"
#include "test_helpers.hpp"

using namespace lopsim;

namespace {
const cdouble I{0.0, 1.0};
}

TEST_CASE("hadamard product") {
    const auto id2 = ComplexMatrix::identity(2);
    CHECK((hadamard(id2, id2) - id2).max_abs() == 0.0);

    const ComplexMatrix a{{1.0, 2.0}, {3.0, 4.0}};
    const ComplexMatrix zero(2, 2);
    CHECK(hadamard(a, zero).max_abs() == 0.0);

    const ComplexMatrix b{{1.0, I}, {-I, 1.0}};
    const auto sq = hadamard(b, b);
    CHECK(std::abs(sq(0, 0) - cdouble{1.0}) < 1e-15);
    CHECK(std::abs(sq(0, 1) - cdouble{-1.0}) < 1e-15);
    CHECK(std::abs(sq(1, 0) - cdouble{-1.0}) < 1e-15);
    CHECK(std::abs(sq(1, 1) - cdouble{1.0}) < 1e-15);

    CHECK_THROWS_AS(hadamard(a, ComplexMatrix(2, 3)), SimError);
}

TEST_CASE("submatrix with repetition") {
    const ComplexMatrix h{{cdouble{1, 1}, cdouble{2, 0}}, {cdouble{3, 0}, cdouble{4, -1}}};

    const auto same = submatrix_with_repetition(h, OccupationVector{1, 1}, OccupationVector{1, 1});
    CHECK((same - h).max_abs() == 0.0);

    const auto rep = submatrix_with_repetition(h, OccupationVector{2, 0}, OccupationVector{2, 0});
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(rep(i, j) == h(0, 0));

    const auto cols =
        submatrix_with_repetition(h, OccupationVector{1, 1}, OccupationVector{0, 2});
    CHECK(cols(0, 0) == h(0, 1));
    CHECK(cols(0, 1) == h(0, 1));
    CHECK(cols(1, 0) == h(1, 1));
    CHECK(cols(1, 1) == h(1, 1));

    CHECK_THROWS_AS(
        submatrix_with_repetition(h, OccupationVector{2, 0}, OccupationVector{1, 0}), SimError);
}

TEST_CASE("permanent small cases") {
    CHECK(std::abs(permanent_naive(ComplexMatrix::identity(3)) - cdouble{1.0}) < 1e-15);
    CHECK(std::abs(permanent_ryser(ComplexMatrix::identity(4)) - cdouble{1.0}) < 1e-14);

    ComplexMatrix j3(3, 3, cdouble{1.0});
    CHECK(std::abs(permanent_naive(j3) - cdouble{6.0}) < 1e-13);
    ComplexMatrix j4(4, 4, cdouble{1.0});
    CHECK(std::abs(permanent_ryser(j4) - cdouble{24.0}) < 1e-12);

    const ComplexMatrix m{{cdouble{1, 2}, cdouble{3, -1}}, {cdouble{0, 1}, cdouble{2, 2}}};
    const cdouble expect = m(0, 0) * m(1, 1) + m(0, 1) * m(1, 0);
    CHECK(std::abs(permanent_naive(m) - expect) < 1e-14);

    CHECK(permanent_naive(ComplexMatrix(0, 0)) == cdouble{1.0});
    CHECK(permanent_ryser(ComplexMatrix(0, 0)) == cdouble{1.0});
}

TEST_CASE("permanent guards and shape errors") {
    CHECK_THROWS_AS(permanent_naive(ComplexMatrix(2, 3)), SimError);
    CHECK_THROWS_AS(permanent_ryser(ComplexMatrix(2, 3)), SimError);
    try {
        permanent_naive(ComplexMatrix(10, 10));
        FAIL("guard did not fire");
    } catch (const SimError& e) {
        CHECK(e.kind() == ErrorKind::SizeGuard);
    }
    try {
        permanent_ryser(ComplexMatrix(27, 27));
        FAIL("guard did not fire");
    } catch (const SimError& e) {
        CHECK(e.kind() == ErrorKind::SizeGuard);
    }
}

TEST_CASE("ryser matches the permutation expansion") {
    std::mt19937_64 rng(991);
    // The 7x7 cross-check plus the randomized sweep over all sizes <= 8.
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng() % 8);
        const auto a = testing::random_matrix(n, rng);
        const cdouble p_naive = permanent_naive(a);
        const cdouble p_ryser = permanent_ryser(a);
        CHECK(std::abs(p_naive - p_ryser) <= 1e-10 * std::max(1.0, std::abs(p_naive)));
    }
    const auto a7 = testing::random_matrix(7, rng);
    CHECK(std::abs(permanent_naive(a7) - permanent_ryser(a7)) <=
          1e-10 * std::abs(permanent_naive(a7)));
}

TEST_CASE("parallel ryser equals the serial reference") {
    std::mt19937_64 rng(1717);
    for (std::size_t n : {3u, 10u, 17u, 18u}) {
        const auto a = testing::random_matrix(n, rng);
        const cdouble serial = permanent_ryser_serial(a);
        const cdouble parallel = permanent_ryser(a);
        CHECK(std::abs(serial - parallel) <= 1e-10 * std::max(1.0, std::abs(serial)));
    }
}

TEST_CASE("permanent row permutation invariance and multilinearity") {
    std::mt19937_64 rng(2023);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng() % 5);
        const auto a = testing::random_matrix(n, rng);
        const cdouble base = permanent_naive(a);

        ComplexMatrix swapped = a;
        for (std::size_t j = 0; j < n; ++j) std::swap(swapped(0, j), swapped(1, j));
        CHECK(std::abs(permanent_naive(swapped) - base) <= 1e-11 * std::max(1.0, std::abs(base)));

        const cdouble c{1.7, -0.3};
        ComplexMatrix scaled = a;
        for (std::size_t j = 0; j < n; ++j) scaled(0, j) *= c;
        CHECK(std::abs(permanent_naive(scaled) - c * base) <=
              1e-11 * std::max(1.0, std::abs(c * base)));
    }
}

TEST_CASE("permanent of repeated PSD blocks is real and non-negative") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t m = 2 + static_cast<std::size_t>(rng() % 2);
        // B^dag B is Hermitian PSD.
        const auto b = testing::random_matrix(m, rng);
        ComplexMatrix h = b.adjoint() * b;
        const double scale = h.max_abs();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) h(i, j) /= scale;
        REQUIRE(check_hermitian_psd(h, 1e-9));

        std::vector<int> occ(m, 0);
        for (int p = 0; p < 3; ++p) occ[rng() % m] += 1;
        const OccupationVector n_occ{occ};
        const cdouble per = permanent_naive(submatrix_with_repetition(h, n_occ, n_occ));
        CHECK(std::abs(per.imag()) <= 1e-9);
        CHECK(per.real() >= -1e-9);
    }
}

TEST_CASE("submatrix with all-ones occupations is the identity map") {
    std::mt19937_64 rng(77);
    const auto a = testing::random_matrix(4, rng);
    const OccupationVector ones{1, 1, 1, 1};
    CHECK((submatrix_with_repetition(a, ones, ones) - a).max_abs() == 0.0);
}

TEST_CASE("check_unitary") {
    CHECK(check_unitary(ComplexMatrix::identity(3), 1e-12));
    const double s = std::sqrt(0.5);
    CHECK(check_unitary(ComplexMatrix{{s, s}, {s, -s}}, 1e-12));
    std::string diag;
    CHECK_FALSE(check_unitary(ComplexMatrix{{1.0, 0.0}, {0.0, 2.0}}, 1e-10, &diag));
    CHECK(diag.find("residual") != std::string::npos);
    CHECK_FALSE(check_unitary(ComplexMatrix(2, 3), 1e-10, &diag));
}

TEST_CASE("check_hermitian_psd") {
    CHECK(check_hermitian_psd(ComplexMatrix::identity(3), 1e-12));
    CHECK(check_hermitian_psd(ComplexMatrix{{1.0, 1.0}, {1.0, 1.0}}, 1e-12));
    CHECK_FALSE(check_hermitian_psd(ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}, 1e-9));
    CHECK_FALSE(check_hermitian_psd(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}, 1e-9));
}

TEST_CASE("factorial table") {
    CHECK(factorial(0) == 1.0);
    CHECK(factorial(5) == 120.0);
    CHECK(factorial(170) > 1e300);
    CHECK_THROWS_AS(factorial(171), SimError);
    CHECK(binomial(5, 2) == 10.0);
    CHECK(binomial(4, 7) == 0.0);
}
