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

#ifndef LOPSIM_FOCK_ORACLE_HPP
#define LOPSIM_FOCK_ORACLE_HPP

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "lopsim/counting_engine.hpp"

// Brute-force verifier for the counting engine: simulates the full pipeline
// directly in the multimode Fock space (M ports x d internal modes), sharing
// no probability code with the engine's permanent series. Scaling target is
// M <= 3, d <= 2, a handful of photons; correctness, not performance.

namespace lopsim {

/// State-count guard for the brute-force lattice.
inline constexpr std::size_t kOracleMaxStates = 20000;

/// Enumerated occupation basis of the M*d mode lattice up to a total photon
/// cutoff, with O(1) state lookup.
class FockBasis {
public:
    FockBasis(std::size_t ports, std::size_t internal_dim, int max_total);

    std::size_t mode_count() const { return ports_ * internal_dim_; }
    std::size_t ports() const { return ports_; }
    std::size_t internal_dim() const { return internal_dim_; }
    int max_total() const { return max_total_; }

    std::size_t size() const { return states_.size(); }
    const OccupationVector& state(std::size_t i) const { return states_[i]; }
    std::size_t index(const OccupationVector& occ) const;

    /// Photons in port l summed over its internal modes.
    int pooled(std::size_t state_idx, std::size_t port) const;

private:
    std::size_t ports_, internal_dim_;
    int max_total_;
    std::vector<OccupationVector> states_;
    std::unordered_map<std::string, std::size_t> lookup_;
};

/// Density operator over a FockBasis, held as a weighted ensemble of pure
/// state vectors (the sources' spectral decompositions keep the rank small;
/// a dense matrix at the state-count guard would need gigabytes). Hermiticity
/// and positivity hold by construction; to_matrix() materializes the dense
/// form for inspection on small bases.
class DensityOperator {
public:
    struct PureTerm {
        double weight;
        std::vector<cdouble> amplitudes;  // over basis states
    };

    DensityOperator(FockBasis basis, std::vector<PureTerm> ensemble);

    const FockBasis& basis() const { return basis_; }
    const std::vector<PureTerm>& ensemble() const { return ensemble_; }

    double trace() const;

    /// Diagonal weights <occ|rho|occ> for every basis state.
    std::vector<double> diagonal() const;

    /// Dense matrix; guarded against large bases.
    ComplexMatrix to_matrix(std::size_t max_states = 2048) const;

private:
    FockBasis basis_;
    std::vector<PureTerm> ensemble_;
};

/// Expands every source state onto the shared a-mode lattice and tensors
/// them: each source's internal mode vector spreads its photons over the d
/// internal modes of its port. Scenario mode vectors are used when present
/// (padded to d with zeros); otherwise the Gram matrix is factorized, which
/// requires d >= its rank.
DensityOperator assemble_input_state(const Scenario& s, std::size_t d);

/// Conjugates rho by the Fock-space lift of the mode transformation U (x) I_d,
/// realized as a sequence of lifted two-port Givens rotations plus phases.
DensityOperator apply_network(const DensityOperator& rho, const ComplexMatrix& u);

/// P_m: sums, over every lattice occupation, the state's diagonal weight
/// times the probability that per-port binomial thinning with efficiency
/// eta_l (internal modes pooled) yields exactly m_l clicks in each port.
double detect(const DensityOperator& rho, const DetectorBank& eta, const OutcomePattern& m);

/// Full brute-force probability table; the reference the engine is tested
/// against.
ProbabilityTable oracle_distribution(const Scenario& s, std::size_t d, int max_total);

/// Numeric report of a fixture check; serializes to the CLI's JSON output.
struct FixtureReport {
    std::string name;
    double max_deviation = 0.0;
    bool pass = false;
    std::string detail;
};

/// Verifies, on truncated single-mode operators, the normal/anti-normal
/// ordering identity N{exp(-xi b^dag b)} = A{exp(-lambda b^dag b)}/(1-xi)
/// with lambda = xi/(1-xi), together with both diagonal closed forms
/// (1-xi)^n and (1+lambda)^(-n-1). The anti-normal series converges only for
/// xi < 1/2; larger xi raises a domain error naming the divergence.
FixtureReport ordering_identity_check(int n_max, double xi, double tolerance = 1e-9);

/// Quadrature check of the Gaussian integral
/// (1/pi) integral exp(-a|z|^2 + conj(lambda) z + conj(z) mu) d^2 z
/// against exp(conj(lambda) mu / a) / a. Relative deviation reported.
FixtureReport gaussian_integral_check(double a, cdouble lambda, cdouble mu, double step = 0.01,
                                      double radius_sigmas = 6.0, double tolerance = 1e-6);

/// Matrix form for positive-definite Hermitian A (diagonalized, then a
/// product of the scalar quadratures): compares against
/// exp(lambda^dag A^{-1} mu) / det(A).
FixtureReport gaussian_integral_check_matrix(const ComplexMatrix& a,
                                             const std::vector<cdouble>& lambda,
                                             const std::vector<cdouble>& mu, double step = 0.01,
                                             double radius_sigmas = 6.0, double tolerance = 1e-6);

namespace detail {

/// Expansion of (c^dag)^n |0> over the d-mode occupation lattice of one port,
/// where c^dag = sum_s phi_s a_s^dag: amplitude at occupation j (|j| = n) is
/// sqrt(n!/prod j_s!) prod phi_s^{j_s}.
std::vector<std::pair<OccupationVector, cdouble>> expand_fock_in_modes(
    const std::vector<cdouble>& phi, int n);

/// Dense symmetric-algebra lift of a single-particle matrix: amplitude
/// <out|W|in> = per(R[out, in]) / sqrt(out! in!). Cross-check for the Givens
/// route on tiny bases.
ComplexMatrix dense_lift(const ComplexMatrix& single_particle, const FockBasis& basis);

}  // namespace detail

}  // namespace lopsim

#endif
