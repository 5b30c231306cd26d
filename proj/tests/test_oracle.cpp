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

#include "lopsim/fock_oracle.hpp"
#include "lopsim/linalg.hpp"
#include "test_helpers.hpp"

using namespace lopsim;
using lopsim::testing::hom_scenario;
using lopsim::testing::random_modes;
using lopsim::testing::random_unitary;
using lopsim::testing::uniform_detectors;

TEST_CASE("fock basis enumeration is complete and duplicate-free") {
    const FockBasis basis(2, 2, 3);
    // C(3 + 4, 4) states with |occ| <= 3 over 4 modes.
    CHECK(basis.size() == 35);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        CHECK(basis.state(i).total() <= 3);
        CHECK(basis.index(basis.state(i)) == i);
        for (std::size_t j = i + 1; j < basis.size(); ++j)
            CHECK_FALSE(basis.state(i) == basis.state(j));
    }
    CHECK_THROWS_AS(FockBasis(3, 2, 40), SimError);  // state guard
}

TEST_CASE("fock expansion over internal modes") {
    const cdouble a{0.6, 0.0}, b{0.0, 0.8};
    const auto terms = detail::expand_fock_in_modes({a, b}, 2);
    REQUIRE(terms.size() == 3);
    for (const auto& [occ, amp] : terms) {
        if (occ == OccupationVector{2, 0}) CHECK(std::abs(amp - a * a) < 1e-14);
        if (occ == OccupationVector{1, 1})
            CHECK(std::abs(amp - std::sqrt(2.0) * a * b) < 1e-14);
        if (occ == OccupationVector{0, 2}) CHECK(std::abs(amp - b * b) < 1e-14);
    }
}

TEST_CASE("assembled input states") {
    std::mt19937_64 rng(11);

    // All vacuum: a rank-1 projector on the zero state (the identity Gram
    // matrix factorizes to two orthonormal internal modes, so d = 2).
    auto vac = make_scenario(random_unitary(2, rng), {fock(0, 0), fock(0, 0)},
                             model_uniform_overlap(2, 0.0), uniform_detectors(2, 1.0), 1);
    const auto rho_vac = assemble_input_state(vac, 2);
    CHECK(rho_vac.trace() == doctest::Approx(1.0).epsilon(1e-12));
    const auto diag = rho_vac.diagonal();
    CHECK(diag[rho_vac.basis().index(OccupationVector{0, 0, 0, 0})] ==
          doctest::Approx(1.0).epsilon(1e-12));

    // One photon with phi = (1, 0) occupies a single lattice mode.
    std::vector<ModeVector> modes;
    modes.emplace_back(std::vector<cdouble>{1.0, 0.0});
    modes.emplace_back(std::vector<cdouble>{0.0, 1.0});
    auto one = make_scenario(random_unitary(2, rng), {fock(1, 1), fock(0, 0)},
                             gram_matrix(modes), uniform_detectors(2, 1.0), 1, modes);
    const auto rho_one = assemble_input_state(one, 2);
    const auto d1 = rho_one.diagonal();
    CHECK(d1[rho_one.basis().index(OccupationVector{1, 0, 0, 0})] ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("density operator invariants on the materialized matrix") {
    std::mt19937_64 rng(12);
    std::vector<ModeVector> modes = random_modes(2, 1, rng);
    auto s = make_scenario(random_unitary(2, rng), {thermal(0.3, 15), coherent(0.4, 8)},
                           gram_matrix(modes), uniform_detectors(2, 0.8), 4, modes);
    const auto rho = assemble_input_state(s, 1);
    const auto dense = rho.to_matrix();
    CHECK((dense - dense.adjoint()).max_abs() <= 1e-10);
    CHECK(check_hermitian_psd(dense, 1e-8));
    CHECK(std::abs(dense.trace().real() - 1.0) <= s.truncation_budget() + 1e-9);
}

TEST_CASE("apply_network basics") {
    std::mt19937_64 rng(13);
    std::vector<ModeVector> modes;
    modes.emplace_back(std::vector<cdouble>{1.0});
    modes.emplace_back(std::vector<cdouble>{1.0});

    // Identity leaves the state untouched.
    auto s = make_scenario(ComplexMatrix::identity(2), {fock(1, 1), fock(0, 0)},
                           gram_matrix(modes), uniform_detectors(2, 1.0), 1, modes);
    const auto rho = assemble_input_state(s, 1);
    const auto rho_id = apply_network(rho, ComplexMatrix::identity(2));
    const auto before = rho.to_matrix();
    const auto after = rho_id.to_matrix();
    CHECK((before - after).max_abs() <= 1e-12);

    // Single photon on a balanced beamsplitter: half in each port.
    const double sq = std::sqrt(0.5);
    const ComplexMatrix bs{{sq, sq}, {sq, -sq}};
    const auto rho_bs = apply_network(rho, bs);
    const auto d = rho_bs.diagonal();
    CHECK(d[rho_bs.basis().index(OccupationVector{1, 0})] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d[rho_bs.basis().index(OccupationVector{0, 1})] == doctest::Approx(0.5).epsilon(1e-12));

    // Indistinguishable two-photon input: the coincidence amplitude vanishes.
    auto two = make_scenario(bs, {fock(1, 1), fock(1, 1)}, model_uniform_overlap(2, 1.0),
                             uniform_detectors(2, 1.0), 2, modes);
    const auto rho_two = apply_network(assemble_input_state(two, 1), bs);
    const auto d2 = rho_two.diagonal();
    CHECK(d2[rho_two.basis().index(OccupationVector{1, 1})] <= 1e-12);
}

TEST_CASE("givens lift agrees with the permanent lift") {
    std::mt19937_64 rng(14);
    for (int rep = 0; rep < 5; ++rep) {
        const std::size_t m = 2 + rng() % 2;
        const auto u = random_unitary(m, rng);
        std::vector<SingleModeSource> sources;
        std::vector<ModeVector> modes;
        for (std::size_t k = 0; k < m; ++k) {
            sources.push_back(fock(k == 0 ? 2 : 1, k == 0 ? 2 : 1));
            modes.emplace_back(std::vector<cdouble>{1.0});
        }
        auto s = make_scenario(u, std::move(sources), model_uniform_overlap(m, 1.0),
                               uniform_detectors(m, 1.0), static_cast<int>(m) + 1, modes);
        const auto rho = assemble_input_state(s, 1);
        const auto lifted = apply_network(rho, u);

        const auto w = detail::dense_lift(u.adjoint(), rho.basis());
        const auto& in = rho.ensemble().front().amplitudes;
        std::vector<cdouble> expect(in.size(), cdouble{});
        for (std::size_t i = 0; i < in.size(); ++i)
            for (std::size_t j = 0; j < in.size(); ++j) expect[i] += w(i, j) * in[j];
        const auto& got = lifted.ensemble().front().amplitudes;
        for (std::size_t i = 0; i < in.size(); ++i) CHECK(std::abs(got[i] - expect[i]) <= 1e-10);
    }
}

TEST_CASE("apply_network preserves trace and hermiticity") {
    std::mt19937_64 rng(15);
    auto modes = random_modes(2, 1, rng);
    auto s = make_scenario(random_unitary(2, rng), {thermal(0.4, 18), fock(1, 1)},
                           gram_matrix(modes), uniform_detectors(2, 0.7), 4, modes);
    const auto rho = assemble_input_state(s, 1);
    const auto out = apply_network(rho, s.unitary);
    CHECK(std::abs(out.trace() - rho.trace()) <= 1e-9);
    const auto dense = out.to_matrix();
    CHECK((dense - dense.adjoint()).max_abs() <= 1e-10);
}

TEST_CASE("binomial thinning detection") {
    std::mt19937_64 rng(16);
    std::vector<ModeVector> modes;
    modes.emplace_back(std::vector<cdouble>{1.0});
    modes.emplace_back(std::vector<cdouble>{1.0});

    auto vac = make_scenario(ComplexMatrix::identity(2), {fock(0, 0), fock(0, 0)},
                             gram_matrix(modes), uniform_detectors(2, 0.5), 1, modes);
    const auto rho_vac = assemble_input_state(vac, 1);
    CHECK(detect(rho_vac, uniform_detectors(2, 0.5), {0, 0}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(detect(rho_vac, uniform_detectors(2, 0.5), {1, 0}) == 0.0);

    auto one = make_scenario(ComplexMatrix::identity(2), {fock(1, 1), fock(0, 0)},
                             gram_matrix(modes), DetectorBank({0.7, 0.7}), 1, modes);
    const auto rho_one = assemble_input_state(one, 1);
    CHECK(detect(rho_one, DetectorBank({0.7, 0.7}), {1, 0}) ==
          doctest::Approx(0.7).epsilon(1e-12));
    CHECK(detect(rho_one, DetectorBank({0.7, 0.7}), {0, 0}) ==
          doctest::Approx(0.3).epsilon(1e-12));

    auto two = make_scenario(ComplexMatrix::identity(2), {fock(2, 2), fock(0, 0)},
                             gram_matrix(modes), uniform_detectors(2, 0.5), 2, modes);
    const auto rho_two = assemble_input_state(two, 1);
    CHECK(detect(rho_two, uniform_detectors(2, 0.5), {2, 0}) ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(detect(rho_two, uniform_detectors(2, 0.5), {1, 0}) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(detect(rho_two, uniform_detectors(2, 0.5), {0, 0}) ==
          doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("detection ignores the internal basis") {
    std::mt19937_64 rng(17);
    const auto u = random_unitary(2, rng);
    const auto modes = random_modes(2, 2, rng);
    const auto rot = random_unitary(2, rng);
    std::vector<ModeVector> rotated;
    for (const auto& phi : modes) {
        std::vector<cdouble> amps(2, cdouble{});
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) amps[i] += rot(i, j) * phi[j];
        double norm = 0.0;
        for (const auto& a : amps) norm += std::norm(a);
        norm = std::sqrt(norm);
        for (auto& a : amps) a /= norm;
        rotated.emplace_back(std::move(amps));
    }
    auto build = [&](const std::vector<ModeVector>& mv) {
        return make_scenario(u, {fock(1, 1), coherent(0.4, 8)}, gram_matrix(mv),
                             DetectorBank({0.8, 0.6}), 6, mv);
    };
    const auto t1 = oracle_distribution(build(modes), 2, 2);
    const auto t2 = oracle_distribution(build(rotated), 2, 2);
    REQUIRE(t1.entries.size() == t2.entries.size());
    for (std::size_t i = 0; i < t1.entries.size(); ++i)
        CHECK(std::abs(t1.entries[i].probability - t2.entries[i].probability) <= 1e-9);
}

TEST_CASE("oracle distribution sums to one over the complete pattern set") {
    std::mt19937_64 rng(18);
    auto modes = random_modes(2, 2, rng);
    auto s = make_scenario(random_unitary(2, rng), {coherent(0.35, 7), thermal(0.2, 13)},
                           gram_matrix(modes), DetectorBank({0.9, 0.4}), 5, modes);
    int cut_sum = 0;
    for (const auto& src : s.sources) cut_sum += src.n_cut();
    const auto table = oracle_distribution(s, 2, cut_sum);
    CHECK(std::abs(table.total() - 1.0) <= s.truncation_budget() + 1e-8);
}

TEST_CASE("ordering identity fixture") {
    // n = 0: both orderings give 1, and 1/(1+lambda) = 1-xi closes the relation.
    const auto r0 = ordering_identity_check(0, 0.3);
    CHECK(r0.pass);

    for (double xi : {0.1, 0.3, 0.45}) {
        const auto r = ordering_identity_check(10, xi);
        CHECK(r.max_deviation <= 1e-9);
        CHECK(r.pass);
    }

    // xi = 1/2 closes the relation analytically even though the anti-normal
    // series itself diverges there (lambda = 1): (1-xi)^n vs (1+1)^(-n-1)/(1-xi).
    const double xi = 0.5, lambda = 1.0;
    for (int n = 0; n <= 4; ++n)
        CHECK(std::abs(std::pow(1.0 - xi, n) -
                       std::pow(1.0 + lambda, -n - 1.0) / (1.0 - xi)) < 1e-15);
    CHECK_THROWS_AS(ordering_identity_check(10, 0.5), SimError);
    CHECK_THROWS_AS(ordering_identity_check(10, 1.5), SimError);
    CHECK_THROWS_AS(ordering_identity_check(10, 0.0), SimError);
}

TEST_CASE("gaussian integral fixture") {
    const auto r1 = gaussian_integral_check(1.0, 0.0, 0.0);
    CHECK(r1.max_deviation <= 1e-6);

    const auto r2 = gaussian_integral_check(2.0, 1.0, 1.0);
    CHECK(r2.max_deviation <= 1e-6);  // closed form: exp(1/2)/2

    const ComplexMatrix a{{2.0, 0.5}, {0.5, 1.0}};
    const auto r3 = gaussian_integral_check_matrix(a, {0.0, 0.0}, {0.0, 0.0});
    CHECK(r3.max_deviation <= 1e-6);  // closed form: 1/det = 1/1.75

    CHECK_THROWS_AS(gaussian_integral_check(-1.0, 0.0, 0.0), SimError);
    CHECK_THROWS_AS(
        gaussian_integral_check_matrix(ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}, {0.0, 0.0},
                                       {0.0, 0.0}),
        SimError);
}

TEST_CASE("oracle matches the engine on the dip and on mixed sources") {
    // Partially distinguishable two-photon interference.
    const auto hom = hom_scenario(0.5);
    const auto engine_table = distribution(hom, 2);
    const auto oracle_table = oracle_distribution(hom, 2, 2);
    REQUIRE(engine_table.entries.size() == oracle_table.entries.size());
    for (std::size_t i = 0; i < engine_table.entries.size(); ++i)
        CHECK(std::abs(engine_table.entries[i].probability -
                       oracle_table.entries[i].probability) <= 1e-8);

    // Thermal (x) Fock through a random network with partial overlap.
    std::mt19937_64 rng(19);
    auto modes = random_modes(2, 2, rng);
    auto s = make_scenario(random_unitary(2, rng), {thermal(0.2, 13), fock(1, 1)},
                           gram_matrix(modes), DetectorBank({0.8, 0.65}), 14, modes);
    const auto et = distribution(s, 3);
    const auto ot = oracle_distribution(s, 2, 3);
    for (std::size_t i = 0; i < et.entries.size(); ++i)
        CHECK(std::abs(et.entries[i].probability - ot.entries[i].probability) <= 1e-8);
}
