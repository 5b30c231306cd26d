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

#include "lopsim/fock_oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "lopsim/linalg.hpp"

namespace lopsim {

namespace {

std::string occupation_key(const OccupationVector& occ) {
    std::string key;
    key.reserve(occ.size());
    for (int v : occ.counts) key.push_back(static_cast<char>(v + 1));
    return key;
}

double lattice_state_count(std::size_t modes, int max_total) {
    // C(max_total + modes, modes), counting all totals 0..max_total.
    double c = 1.0;
    for (std::size_t i = 1; i <= modes; ++i)
        c *= static_cast<double>(max_total + i) / static_cast<double>(i);
    return c;
}

}  // namespace

FockBasis::FockBasis(std::size_t ports, std::size_t internal_dim, int max_total)
    : ports_(ports), internal_dim_(internal_dim), max_total_(max_total) {
    if (ports_ == 0 || internal_dim_ == 0)
        raise(ErrorKind::Validation, "FockBasis: ports and internal dimension must be >= 1");
    if (max_total_ < 0) raise(ErrorKind::Domain, "FockBasis: negative photon cutoff");
    const double predicted = lattice_state_count(mode_count(), max_total_);
    if (predicted > static_cast<double>(kOracleMaxStates))
        raise(ErrorKind::SizeGuard,
              "FockBasis: " + std::to_string(static_cast<long long>(predicted)) +
                  " lattice states exceed the guard " + std::to_string(kOracleMaxStates));
    states_ = enumerate_patterns(mode_count(), max_total_);
    lookup_.reserve(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) lookup_.emplace(occupation_key(states_[i]), i);
}

std::size_t FockBasis::index(const OccupationVector& occ) const {
    const auto it = lookup_.find(occupation_key(occ));
    if (it == lookup_.end())
        raise(ErrorKind::Domain, "FockBasis: occupation outside the enumerated basis");
    return it->second;
}

int FockBasis::pooled(std::size_t state_idx, std::size_t port) const {
    const auto& occ = states_[state_idx];
    int total = 0;
    for (std::size_t s = 0; s < internal_dim_; ++s)
        total += occ[port * internal_dim_ + s];
    return total;
}

DensityOperator::DensityOperator(FockBasis basis, std::vector<PureTerm> ensemble)
    : basis_(std::move(basis)), ensemble_(std::move(ensemble)) {
    for (const auto& t : ensemble_) {
        if (t.weight < 0.0)
            raise(ErrorKind::Validation, "DensityOperator: negative ensemble weight");
        if (t.amplitudes.size() != basis_.size())
            raise(ErrorKind::Dimension, "DensityOperator: amplitude vector size != basis size");
    }
}

double DensityOperator::trace() const {
    double t = 0.0;
    for (const auto& term : ensemble_) {
        double norm2 = 0.0;
        for (const auto& a : term.amplitudes) norm2 += std::norm(a);
        t += term.weight * norm2;
    }
    return t;
}

std::vector<double> DensityOperator::diagonal() const {
    std::vector<double> diag(basis_.size(), 0.0);
    for (const auto& term : ensemble_)
        for (std::size_t i = 0; i < diag.size(); ++i)
            diag[i] += term.weight * std::norm(term.amplitudes[i]);
    return diag;
}

ComplexMatrix DensityOperator::to_matrix(std::size_t max_states) const {
    if (basis_.size() > max_states)
        raise(ErrorKind::SizeGuard, "DensityOperator::to_matrix: basis too large to materialize");
    ComplexMatrix rho(basis_.size(), basis_.size());
    for (const auto& term : ensemble_)
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            if (term.amplitudes[i] == cdouble{}) continue;
            for (std::size_t j = 0; j < basis_.size(); ++j)
                rho(i, j) += term.weight * term.amplitudes[i] * std::conj(term.amplitudes[j]);
        }
    return rho;
}

namespace detail {

std::vector<std::pair<OccupationVector, cdouble>> expand_fock_in_modes(
    const std::vector<cdouble>& phi, int n) {
    std::vector<std::pair<OccupationVector, cdouble>> out;
    std::vector<int> limits(phi.size(), -1);
    for (const auto& occ : enumerate_occupations(limits, n)) {
        cdouble amp = std::sqrt(factorial(n));
        for (std::size_t s = 0; s < phi.size(); ++s) {
            for (int r = 0; r < occ[s]; ++r) amp *= phi[s];
            amp /= std::sqrt(factorial(occ[s]));
        }
        if (amp != cdouble{}) out.emplace_back(occ, amp);
    }
    return out;
}

ComplexMatrix dense_lift(const ComplexMatrix& single_particle, const FockBasis& basis) {
    ComplexMatrix w(basis.size(), basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto& out = basis.state(i);
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const auto& in = basis.state(j);
            if (out.total() != in.total()) continue;
            double norm = 1.0;
            for (int v : out.counts) norm *= factorial(v);
            for (int v : in.counts) norm *= factorial(v);
            w(i, j) = permanent_ryser(submatrix_with_repetition(single_particle, out, in)) /
                      std::sqrt(norm);
        }
    }
    return w;
}

}  // namespace detail

namespace {

constexpr std::size_t kMaxEnsembleTerms = 4096;

// Sparse lattice vector of one source over its own d internal modes.
using LocalVector = std::vector<std::pair<OccupationVector, cdouble>>;

// Spectral decomposition of a source state, eigenvectors expanded onto the
// port's internal-mode occupations.
std::vector<std::pair<double, LocalVector>> source_pure_terms(const SingleModeSource& src,
                                                              const std::vector<cdouble>& phi) {
    const auto dim = static_cast<Eigen::Index>(src.rho().rows());
    Eigen::MatrixXcd rho(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            rho(i, j) = src.rho(static_cast<int>(i), static_cast<int>(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);

    std::vector<std::pair<double, LocalVector>> terms;
    for (Eigen::Index e = 0; e < dim; ++e) {
        const double w = solver.eigenvalues()(e);
        if (w <= 1e-14) continue;
        LocalVector vec;
        for (Eigen::Index n = 0; n < dim; ++n) {
            const cdouble chi = solver.eigenvectors()(n, e);
            if (std::abs(chi) < 1e-16) continue;
            for (auto& [occ, amp] : detail::expand_fock_in_modes(phi, static_cast<int>(n))) {
                bool merged = false;
                for (auto& [o2, a2] : vec) {
                    if (o2 == occ) {
                        a2 += chi * amp;
                        merged = true;
                        break;
                    }
                }
                if (!merged) vec.emplace_back(occ, chi * amp);
            }
        }
        terms.emplace_back(w, std::move(vec));
    }
    return terms;
}

std::vector<std::vector<cdouble>> resolve_mode_vectors(const Scenario& s, std::size_t d) {
    std::vector<std::vector<cdouble>> phis;
    if (!s.mode_vectors.empty()) {
        for (const auto& mv : s.mode_vectors) {
            if (mv.dim() > d)
                raise(ErrorKind::Dimension,
                      "assemble_input_state: mode vector dimension " + std::to_string(mv.dim()) +
                          " exceeds the requested internal dimension " + std::to_string(d));
            auto amps = mv.amplitudes();
            amps.resize(d, cdouble{});
            phis.push_back(std::move(amps));
        }
        return phis;
    }
    // No explicit internal modes: factorize the Gram matrix.
    const auto factored = factor_gram(s.gram);
    for (const auto& mv : factored) {
        if (mv.dim() > d)
            raise(ErrorKind::Dimension,
                  "assemble_input_state: Gram factorization needs internal dimension >= " +
                      std::to_string(mv.dim()) + ", got " + std::to_string(d));
        auto amps = mv.amplitudes();
        amps.resize(d, cdouble{});
        phis.push_back(std::move(amps));
    }
    return phis;
}

}  // namespace

DensityOperator assemble_input_state(const Scenario& s, std::size_t d) {
    const std::size_t m = s.port_count();
    int max_total = 0;
    for (const auto& src : s.sources) max_total += src.n_cut();
    FockBasis basis(m, d, max_total);

    const auto phis = resolve_mode_vectors(s, d);

    // Pure-term decomposition per input port; ports without a source hold the
    // vacuum.
    std::vector<std::vector<std::pair<double, LocalVector>>> per_port(m);
    const OccupationVector local_vacuum(std::vector<int>(d, 0));
    for (std::size_t port = 0; port < m; ++port)
        per_port[port] = {{1.0, LocalVector{{local_vacuum, cdouble{1.0, 0.0}}}}};
    for (std::size_t k = 0; k < s.sources.size(); ++k)
        per_port[s.input_ports[k]] = source_pure_terms(s.sources[k], phis[k]);

    std::size_t tuple_count = 1;
    for (const auto& terms : per_port) {
        tuple_count *= terms.size();
        if (tuple_count > kMaxEnsembleTerms)
            raise(ErrorKind::SizeGuard,
                  "assemble_input_state: ensemble exceeds " + std::to_string(kMaxEnsembleTerms) +
                      " pure terms");
    }

    std::vector<DensityOperator::PureTerm> ensemble;
    ensemble.reserve(tuple_count);
    std::vector<std::size_t> choice(m, 0);
    while (true) {
        double weight = 1.0;
        for (std::size_t port = 0; port < m; ++port) weight *= per_port[port][choice[port]].first;

        DensityOperator::PureTerm term;
        term.weight = weight;
        term.amplitudes.assign(basis.size(), cdouble{});
        // Tensor the per-port sparse vectors onto the shared lattice.
        OccupationVector occ(std::vector<int>(basis.mode_count(), 0));
        std::vector<std::size_t> pick(m, 0);
        while (true) {
            cdouble amp = 1.0;
            for (std::size_t port = 0; port < m; ++port) {
                const auto& [local_occ, local_amp] = per_port[port][choice[port]].second[pick[port]];
                amp *= local_amp;
                for (std::size_t sdx = 0; sdx < d; ++sdx)
                    occ[port * d + sdx] = local_occ[sdx];
            }
            term.amplitudes[basis.index(occ)] += amp;
            std::size_t carry = 0;
            while (carry < m) {
                if (++pick[carry] < per_port[carry][choice[carry]].second.size()) break;
                pick[carry] = 0;
                ++carry;
            }
            if (carry == m) break;
        }
        ensemble.push_back(std::move(term));

        std::size_t carry = 0;
        while (carry < m) {
            if (++choice[carry] < per_port[carry].size()) break;
            choice[carry] = 0;
            ++carry;
        }
        if (carry == m) break;
    }
    return DensityOperator(std::move(basis), std::move(ensemble));
}

namespace {

struct GivensFactor {
    std::size_t upper, lower;  // ports (upper = lower - 1)
    cdouble g00, g01, g10, g11;
};

// Reduce R to a diagonal unitary with rotations acting on adjacent rows; the
// factors satisfy (G_K ... G_1) R = diag(phases).
std::vector<GivensFactor> givens_factorize(ComplexMatrix r, std::vector<cdouble>& phases) {
    const std::size_t m = r.rows();
    std::vector<GivensFactor> factors;
    for (std::size_t col = 0; col < m; ++col) {
        for (std::size_t row = m; row-- > col + 1;) {
            const cdouble x = r(row - 1, col);
            const cdouble y = r(row, col);
            if (std::abs(y) < 1e-15) continue;
            const double norm = std::sqrt(std::norm(x) + std::norm(y));
            GivensFactor f{row - 1, row, std::conj(x) / norm, std::conj(y) / norm, -y / norm,
                           x / norm};
            for (std::size_t j = 0; j < m; ++j) {
                const cdouble a = r(row - 1, j);
                const cdouble b = r(row, j);
                r(row - 1, j) = f.g00 * a + f.g01 * b;
                r(row, j) = f.g10 * a + f.g11 * b;
            }
            factors.push_back(f);
        }
    }
    phases.resize(m);
    for (std::size_t k = 0; k < m; ++k) phases[k] = r(k, k);
    return factors;
}

// Lift of a two-mode single-particle map [t u; v w] (columns are the images
// of the modes) applied to a lattice vector. Photon number on the pair is
// conserved, so amplitudes mix within each (a+b)-shell:
// amp(p, T-p) += sqrt(p!(T-p)!/(a!b!)) *
//                sum_j C(a,j) C(b,p-j) t^j v^{a-j} u^{p-j} w^{b-p+j} * amp(a, b)
void apply_two_mode(const FockBasis& basis, std::vector<cdouble>& vec, std::size_t mode_a,
                    std::size_t mode_b, cdouble t, cdouble u, cdouble v, cdouble w) {
    std::vector<cdouble> out(vec.size(), cdouble{});
    OccupationVector occ2;
    for (std::size_t idx = 0; idx < vec.size(); ++idx) {
        const cdouble amp = vec[idx];
        if (amp == cdouble{}) continue;
        const auto& occ = basis.state(idx);
        const int a = occ[mode_a];
        const int b = occ[mode_b];
        const int total = a + b;
        if (total == 0) {
            out[idx] += amp;
            continue;
        }
        occ2 = occ;
        for (int p = 0; p <= total; ++p) {
            cdouble mix = 0.0;
            for (int j = std::max(0, p - b); j <= std::min(a, p); ++j) {
                cdouble contrib = binomial(a, j) * binomial(b, p - j);
                for (int r = 0; r < j; ++r) contrib *= t;
                for (int r = 0; r < a - j; ++r) contrib *= v;
                for (int r = 0; r < p - j; ++r) contrib *= u;
                for (int r = 0; r < b - p + j; ++r) contrib *= w;
                mix += contrib;
            }
            if (mix == cdouble{}) continue;
            mix *= std::sqrt(factorial(p) * factorial(total - p) / (factorial(a) * factorial(b)));
            occ2[mode_a] = p;
            occ2[mode_b] = total - p;
            out[basis.index(occ2)] += mix * amp;
        }
        occ2[mode_a] = a;
        occ2[mode_b] = b;
    }
    vec.swap(out);
}

}  // namespace

DensityOperator apply_network(const DensityOperator& rho, const ComplexMatrix& u) {
    const auto& basis = rho.basis();
    if (u.rows() != basis.ports() || !u.square())
        raise(ErrorKind::Dimension, "apply_network: unitary size != port count");
    std::string diag;
    if (!check_unitary(u, 1e-10, &diag))
        raise(ErrorKind::Validation, "apply_network: network is not unitary (" + diag + ")");

    // Rewriting a_k^dag = sum_l conj(U_{k,l}) b_l^dag turns the input-mode
    // amplitudes into output-mode ones through the lift of R = U^dag.
    const ComplexMatrix r = u.adjoint();
    std::vector<cdouble> phases;
    const auto factors = givens_factorize(r, phases);

    const std::size_t d = basis.internal_dim();
    std::vector<DensityOperator::PureTerm> ensemble = rho.ensemble();
    for (auto& term : ensemble) {
        // R = G_1^dag ... G_K^dag D, so the lift of D acts first.
        for (std::size_t idx = 0; idx < term.amplitudes.size(); ++idx) {
            if (term.amplitudes[idx] == cdouble{}) continue;
            cdouble scale = 1.0;
            for (std::size_t port = 0; port < basis.ports(); ++port) {
                const int n = basis.pooled(idx, port);
                for (int rpt = 0; rpt < n; ++rpt) scale *= phases[port];
            }
            term.amplitudes[idx] *= scale;
        }
        for (std::size_t f = factors.size(); f-- > 0;) {
            const auto& g = factors[f];
            // G^dag of [[g00,g01],[g10,g11]] has columns (conj g00, conj g01)
            // and (conj g10, conj g11).
            for (std::size_t s = 0; s < d; ++s)
                apply_two_mode(basis, term.amplitudes, g.upper * d + s, g.lower * d + s,
                               std::conj(g.g00), std::conj(g.g10), std::conj(g.g01),
                               std::conj(g.g11));
        }
    }
    DensityOperator out(basis, std::move(ensemble));
    const double tr_in = rho.trace();
    const double tr_out = out.trace();
    if (std::abs(tr_in - tr_out) > 1e-9)
        raise(ErrorKind::Numeric, "apply_network: trace drift " + std::to_string(tr_out - tr_in));
    return out;
}

namespace {

double binomial_pmf(int n, double eta, int k) {
    if (k < 0 || k > n) return 0.0;
    return binomial(n, k) * std::pow(eta, k) * std::pow(1.0 - eta, n - k);
}

}  // namespace

double detect(const DensityOperator& rho, const DetectorBank& eta, const OutcomePattern& m) {
    const auto& basis = rho.basis();
    if (eta.size() != basis.ports() || m.size() != basis.ports())
        raise(ErrorKind::Dimension, "detect: detector/pattern length != port count");
    const auto diag = rho.diagonal();
    double p = 0.0;
    for (std::size_t idx = 0; idx < diag.size(); ++idx) {
        if (diag[idx] == 0.0) continue;
        double thinning = 1.0;
        for (std::size_t port = 0; port < basis.ports() && thinning != 0.0; ++port)
            thinning *= binomial_pmf(basis.pooled(idx, port), eta[port], m[port]);
        p += diag[idx] * thinning;
    }
    return p;
}

ProbabilityTable oracle_distribution(const Scenario& s, std::size_t d, int max_total) {
    const DensityOperator input = assemble_input_state(s, d);
    const DensityOperator output = apply_network(input, s.unitary);

    ProbabilityTable table;
    table.metadata.digest = scenario_digest(s);
    table.metadata.p_max = s.p_max;
    table.metadata.max_total = max_total;
    table.metadata.truncation_budget = s.truncation_budget();
    table.metadata.series_truncated = false;

    const auto& basis = output.basis();
    const auto diag = output.diagonal();
    for (const auto& m : enumerate_patterns(s.port_count(), max_total)) {
        double p = 0.0;
        for (std::size_t idx = 0; idx < diag.size(); ++idx) {
            if (diag[idx] == 0.0) continue;
            double thinning = 1.0;
            for (std::size_t port = 0; port < basis.ports() && thinning != 0.0; ++port)
                thinning *= binomial_pmf(basis.pooled(idx, port), s.detectors[port], m[port]);
            p += diag[idx] * thinning;
        }
        table.entries.push_back(ProbabilityEntry{m, p, "oracle"});
    }
    return table;
}

FixtureReport ordering_identity_check(int n_max, double xi, double tolerance) {
    if (!(xi > 0.0 && xi < 1.0))
        raise(ErrorKind::Domain, "ordering_identity_check: xi must lie in (0, 1)");
    if (xi >= 0.5)
        raise(ErrorKind::Domain,
              "ordering_identity_check: anti-normal series diverges for xi >= 1/2 "
              "(lambda = xi/(1-xi) >= 1); choose xi < 0.5");
    if (n_max < 0) raise(ErrorKind::Domain, "ordering_identity_check: n_max must be >= 0");
    const double lambda = xi / (1.0 - xi);

    // Terms until lambda^K * C(K + n_max, n_max) drops below roundoff; the
    // series alternates, so the first omitted term bounds the truncation.
    std::size_t n_terms = 0;
    {
        double t = 1.0;
        while (t > 1e-16) {
            ++n_terms;
            t *= lambda * static_cast<double>(n_terms + static_cast<std::size_t>(n_max)) /
                 static_cast<double>(n_terms);
            if (n_terms > 100000)
                raise(ErrorKind::Domain,
                      "ordering_identity_check: series converges too slowly at xi = " +
                          std::to_string(xi));
        }
    }

    const std::size_t dim_n = static_cast<std::size_t>(n_max) + 1;

    // Normal side on the small truncated space: the series terminates because
    // b^k annihilates every retained state once k > n_max.
    ComplexMatrix lower_n(dim_n, dim_n);
    for (std::size_t n = 1; n < dim_n; ++n) lower_n(n - 1, n) = std::sqrt(static_cast<double>(n));
    const ComplexMatrix raise_n = lower_n.adjoint();
    ComplexMatrix normal_side(dim_n, dim_n);
    {
        ComplexMatrix term = ComplexMatrix::identity(dim_n);
        normal_side = term;
        for (int k = 1; k <= n_max; ++k) {
            term = raise_n * term * lower_n;
            term = term * cdouble{-xi / static_cast<double>(k), 0.0};
            normal_side = normal_side + term;
        }
    }

    // Anti-normal side needs headroom: b^k (b^dag)^k passes through states up
    // to n_max + k. The recursion T_{k+1} = -lambda/(k+1) b T_k b^dag is
    // evaluated with the bidiagonal structure of the truncated b, i.e.
    // (b X b^dag)_{ij} = sqrt((i+1)(j+1)) X_{i+1,j+1}. The alternating terms
    // reach ~1e6 before cancelling down to (1+lambda)^(-n-1), so the
    // accumulation runs in extended precision.
    const std::size_t dim_a = dim_n + n_terms;
    std::vector<long double> term_a(dim_a * dim_a, 0.0L);
    std::vector<long double> next_a(dim_a * dim_a, 0.0L);
    std::vector<long double> anti(dim_n * dim_n, 0.0L);
    for (std::size_t i = 0; i < dim_a; ++i) term_a[i * dim_a + i] = 1.0L;
    auto accumulate = [&]() {
        for (std::size_t i = 0; i < dim_n; ++i)
            for (std::size_t j = 0; j < dim_n; ++j) anti[i * dim_n + j] += term_a[i * dim_a + j];
    };
    accumulate();
    for (std::size_t k = 1; k <= n_terms; ++k) {
        const long double scale = -static_cast<long double>(lambda) / static_cast<long double>(k);
        for (std::size_t i = 0; i < dim_a; ++i) {
            for (std::size_t j = 0; j < dim_a; ++j) {
                if (i + 1 < dim_a && j + 1 < dim_a)
                    next_a[i * dim_a + j] =
                        scale *
                        sqrtl(static_cast<long double>((i + 1)) *
                              static_cast<long double>(j + 1)) *
                        term_a[(i + 1) * dim_a + (j + 1)];
                else
                    next_a[i * dim_a + j] = 0.0L;
            }
        }
        term_a.swap(next_a);
        accumulate();
    }

    double dev = 0.0;
    for (std::size_t n = 0; n < dim_n; ++n) {
        for (std::size_t m = 0; m < dim_n; ++m) {
            const cdouble nv = normal_side(n, m);
            const cdouble av{static_cast<double>(anti[n * dim_n + m]), 0.0};
            if (n == m) {
                dev = std::max(dev, std::abs(nv - std::pow(1.0 - xi, static_cast<double>(n))));
                dev = std::max(dev, std::abs(av - std::pow(1.0 + lambda,
                                                           -static_cast<double>(n) - 1.0)));
            } else {
                dev = std::max(dev, std::abs(nv));
                dev = std::max(dev, std::abs(av));
            }
            // The full operator identity, element by element.
            dev = std::max(dev, std::abs(nv - av / (1.0 - xi)));
        }
    }
    FixtureReport report;
    report.name = "ordering-identity";
    report.max_deviation = dev;
    report.pass = dev <= tolerance;
    report.detail = "xi=" + std::to_string(xi) + " n_max=" + std::to_string(n_max) +
                    " terms=" + std::to_string(n_terms);
    return report;
}

namespace {

cdouble gaussian_quadrature_1d(double a, cdouble lambda, cdouble mu, double step, double radius) {
    const cdouble center = (lambda + mu) / (2.0 * a);
    const double cx = center.real(), cy = center.imag();
    const auto steps = static_cast<long long>(std::ceil(2.0 * radius / step));
    cdouble sum = 0.0;
    for (long long ix = 0; ix < steps; ++ix) {
        const double x = cx - radius + (static_cast<double>(ix) + 0.5) * step;
        cdouble row = 0.0;
        for (long long iy = 0; iy < steps; ++iy) {
            const double y = cy - radius + (static_cast<double>(iy) + 0.5) * step;
            const cdouble z{x, y};
            row += std::exp(-a * std::norm(z) + std::conj(lambda) * z + std::conj(z) * mu);
        }
        sum += row;
    }
    return sum * (step * step / std::numbers::pi);
}

}  // namespace

FixtureReport gaussian_integral_check(double a, cdouble lambda, cdouble mu, double step,
                                      double radius_sigmas, double tolerance) {
    if (a <= 0.0) raise(ErrorKind::Domain, "gaussian_integral_check: a must be positive");
    const double radius = radius_sigmas / std::sqrt(a);
    const cdouble quad = gaussian_quadrature_1d(a, lambda, mu, step, radius);
    const cdouble closed = std::exp(std::conj(lambda) * mu / a) / a;
    FixtureReport report;
    report.name = "gaussian-integral";
    report.max_deviation = std::abs(quad - closed) / std::abs(closed);
    report.pass = report.max_deviation <= tolerance;
    report.detail = "a=" + std::to_string(a);
    return report;
}

FixtureReport gaussian_integral_check_matrix(const ComplexMatrix& a,
                                             const std::vector<cdouble>& lambda,
                                             const std::vector<cdouble>& mu, double step,
                                             double radius_sigmas, double tolerance) {
    if (!a.square() || a.rows() != lambda.size() || a.rows() != mu.size())
        raise(ErrorKind::Dimension, "gaussian_integral_check_matrix: shape mismatch");
    const auto n = static_cast<Eigen::Index>(a.rows());
    Eigen::MatrixXcd ae(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            ae(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(ae);
    if (solver.eigenvalues().minCoeff() <= 0.0)
        raise(ErrorKind::Domain, "gaussian_integral_check_matrix: A must be positive definite");

    Eigen::VectorXcd lv(n), mv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        lv(i) = lambda[static_cast<std::size_t>(i)];
        mv(i) = mu[static_cast<std::size_t>(i)];
    }
    // Diagonalize A = W diag(a_i) W^dag and substitute alpha = W beta; the
    // integral factorizes into scalar quadratures with shifted sources.
    const Eigen::MatrixXcd w = solver.eigenvectors();
    const Eigen::VectorXcd lp = w.adjoint() * lv;
    const Eigen::VectorXcd mp = w.adjoint() * mv;
    cdouble quad{1.0, 0.0};
    for (Eigen::Index i = 0; i < n; ++i) {
        const double ai = solver.eigenvalues()(i);
        quad *= gaussian_quadrature_1d(ai, lp(i), mp(i), step, radius_sigmas / std::sqrt(ai));
    }
    const cdouble closed =
        std::exp((lv.adjoint() * ae.inverse() * mv)(0)) / ae.determinant();
    FixtureReport report;
    report.name = "gaussian-integral-matrix";
    report.max_deviation = std::abs(quad - closed) / std::abs(closed);
    report.pass = report.max_deviation <= tolerance;
    report.detail = "dim=" + std::to_string(a.rows());
    return report;
}

}  // namespace lopsim
