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

#include "lopsim/distinguishability.hpp"
#include "lopsim/linalg.hpp"
#include "test_helpers.hpp"

using namespace lopsim;

TEST_CASE("gram matrix of identical modes is all-ones") {
    const ModeVector phi(std::vector<cdouble>{cdouble{0.6, 0.0}, cdouble{0.0, 0.8}});
    const auto v = gram_matrix({phi, phi, phi});
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l) CHECK(std::abs(v(k, l) - cdouble{1.0}) < 1e-12);
}

TEST_CASE("gram matrix of orthonormal modes is the identity") {
    const ModeVector e1(std::vector<cdouble>{1.0, 0.0});
    const ModeVector e2(std::vector<cdouble>{0.0, 1.0});
    const auto v = gram_matrix({e1, e2});
    CHECK((v.matrix() - ComplexMatrix::identity(2)).max_abs() < 1e-12);
}

TEST_CASE("gram matrix overlap equals the inner product") {
    for (double overlap : {0.0, 0.3, 0.9, 1.0}) {
        const ModeVector a(std::vector<cdouble>{1.0, 0.0});
        const ModeVector b(std::vector<cdouble>{overlap, std::sqrt(1.0 - overlap * overlap)});
        const auto v = gram_matrix({a, b});
        CHECK(std::abs(v(0, 1) - cdouble{overlap}) < 1e-12);
        CHECK(std::abs(v(1, 0) - cdouble{overlap}) < 1e-12);
    }
}

TEST_CASE("gram matrix input validation") {
    const ModeVector a(std::vector<cdouble>{1.0, 0.0});
    const ModeVector b(std::vector<cdouble>{1.0});
    CHECK_THROWS_AS(gram_matrix({a, b}), SimError);
    CHECK_THROWS_AS(ModeVector(std::vector<cdouble>{0.5, 0.5}), SimError);  // unnormalized
    CHECK_THROWS_AS(ModeVector(std::vector<cdouble>{}), SimError);
}

TEST_CASE("uniform overlap model") {
    CHECK((model_uniform_overlap(2, 0.0).matrix() - ComplexMatrix::identity(2)).max_abs() == 0.0);

    const auto j2 = model_uniform_overlap(2, 1.0);
    CHECK(std::abs(j2(0, 1) - cdouble{1.0}) == 0.0);

    // Analytic eigenvalues 1 - v and 1 + (M-1) v: v = -0.6 at M = 3 gives -0.2.
    CHECK_THROWS_AS(model_uniform_overlap(3, -0.6), SimError);
    CHECK_NOTHROW(model_uniform_overlap(3, -0.5));

    const auto cplx = model_uniform_overlap(2, cdouble{0.3, 0.4});
    CHECK(std::abs(cplx(1, 0) - std::conj(cplx(0, 1))) < 1e-15);
    CHECK_THROWS_AS(model_uniform_overlap(2, cdouble{0.9, 0.9}), SimError);  // |v| > 1
}

TEST_CASE("vacuum block embedding") {
    const auto i3 = embed_block_with_vacuum(model_uniform_overlap(2, 0.0), 1);
    CHECK((i3.matrix() - ComplexMatrix::identity(3)).max_abs() == 0.0);

    const auto block = embed_block_with_vacuum(model_uniform_overlap(2, 1.0), 2);
    CHECK(block.size() == 4);
    CHECK(block(0, 1) == cdouble{1.0});
    CHECK(block(2, 3) == cdouble{0.0});
    CHECK(block(0, 2) == cdouble{0.0});
    CHECK(block(3, 3) == cdouble{1.0});

    const auto same = embed_block_with_vacuum(model_uniform_overlap(2, 0.5), 0);
    CHECK((same.matrix() - model_uniform_overlap(2, 0.5).matrix()).max_abs() == 0.0);
}

TEST_CASE("gram output is always Hermitian PSD with bounded overlaps") {
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t m = 2 + rng() % 3;
        const std::size_t d = 1 + rng() % 3;
        const auto v = gram_matrix(testing::random_modes(m, d, rng));
        CHECK(check_hermitian_psd(v.matrix(), 1e-9));
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t l = 0; l < m; ++l) CHECK(std::abs(v(k, l)) <= 1.0 + 1e-10);
    }
}

TEST_CASE("gram invariant under a common unitary rotation of the modes") {
    std::mt19937_64 rng(4242);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t m = 3;
        const std::size_t d = 3;
        const auto modes = testing::random_modes(m, d, rng);
        const auto rot = testing::random_unitary(d, rng);
        std::vector<ModeVector> rotated;
        for (const auto& phi : modes) {
            std::vector<cdouble> amps(d, cdouble{});
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) amps[i] += rot(i, j) * phi[j];
            double norm = 0.0;
            for (const auto& a : amps) norm += std::norm(a);
            norm = std::sqrt(norm);
            for (auto& a : amps) a /= norm;
            rotated.emplace_back(std::move(amps));
        }
        const auto v1 = gram_matrix(modes).matrix();
        const auto v2 = gram_matrix(rotated).matrix();
        CHECK((v1 - v2).max_abs() < 1e-10);
    }
}

TEST_CASE("factor_gram reproduces the overlaps") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        const auto v = gram_matrix(testing::random_modes(3, 2, rng));
        const auto vectors = factor_gram(v);
        const auto rebuilt = gram_matrix(vectors);
        CHECK((rebuilt.matrix() - v.matrix()).max_abs() < 1e-9);
    }
}

TEST_CASE("explicit gram validation errors") {
    // Non-unit diagonal.
    CHECK_THROWS_AS(GramMatrix(ComplexMatrix{{2.0, 0.0}, {0.0, 1.0}}), SimError);
    // Cauchy-Schwarz violation.
    CHECK_THROWS_AS(GramMatrix(ComplexMatrix{{1.0, 1.5}, {1.5, 1.0}}), SimError);
    // Not Hermitian.
    CHECK_THROWS_AS(GramMatrix(ComplexMatrix{{1.0, 0.5}, {0.2, 1.0}}), SimError);
}
