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

#include "lopsim/counting_engine.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <optional>

#include "lopsim/linalg.hpp"

namespace lopsim {

namespace {

constexpr double kClampTol = 1e-9;
constexpr double kImagTol = 1e-9;
constexpr double kUnitaryTol = 1e-10;

}  // namespace

DetectorBank::DetectorBank(std::vector<double> eta) : eta_(std::move(eta)) {
    for (double e : eta_) {
        if (!(e >= 0.0 && e <= 1.0))
            raise(ErrorKind::Validation,
                  "DetectorBank: efficiency " + std::to_string(e) + " outside [0, 1]");
    }
}

double Scenario::truncation_budget() const {
    double b = 0.0;
    for (const auto& s : sources) b += s.trace_deficit();
    return b;
}

bool Scenario::series_truncated() const {
    bool all_fock = true;
    int cut_sum = 0;
    for (const auto& s : sources) {
        all_fock = all_fock && s.is_fock();
        cut_sum += s.n_cut();
    }
    return !all_fock && p_max < cut_sum;
}

Scenario make_scenario(ComplexMatrix unitary, std::vector<SingleModeSource> sources,
                       GramMatrix gram, DetectorBank detectors, int p_max,
                       std::vector<ModeVector> mode_vectors) {
    unitary.validate_finite("network");
    std::string diag;
    if (!check_unitary(unitary, kUnitaryTol, &diag))
        raise(ErrorKind::Validation, "Scenario: network is not unitary (" + diag + ")");
    const std::size_t m = unitary.rows();
    if (detectors.size() != m)
        raise(ErrorKind::Dimension, "Scenario: detector count " + std::to_string(detectors.size()) +
                                        " != port count " + std::to_string(m));
    if (sources.size() != m)
        raise(ErrorKind::Dimension, "Scenario: source count " + std::to_string(sources.size()) +
                                        " != port count " + std::to_string(m));
    if (gram.size() != sources.size())
        raise(ErrorKind::Dimension, "Scenario: Gram matrix size != source count");
    if (!mode_vectors.empty() && mode_vectors.size() != sources.size())
        raise(ErrorKind::Dimension, "Scenario: mode-vector count != source count");

    bool all_fock = true;
    int fock_total = 0;
    for (const auto& s : sources) {
        if (s.is_fock())
            fock_total += s.fock_level();
        else
            all_fock = false;
    }
    const int min_pmax = all_fock ? fock_total : 1;
    if (p_max < min_pmax)
        raise(ErrorKind::Validation, "Scenario: cutoff p_max = " + std::to_string(p_max) +
                                         " below minimum " + std::to_string(min_pmax) +
                                         " for these sources");

    std::vector<std::size_t> ports(m);
    std::iota(ports.begin(), ports.end(), 0);
    return Scenario{std::move(unitary), std::move(sources), std::move(ports), std::move(gram),
                    std::move(detectors), p_max, std::move(mode_vectors)};
}

namespace {

struct Fnv1a {
    std::uint64_t h = 1469598103934665603ULL;

    void bytes(const char* p, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(p[i]);
            h *= 1099511628211ULL;
        }
    }
    void text(const std::string& s) { bytes(s.data(), s.size()); }
    void real(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g;", v);
        bytes(buf, std::strlen(buf));
    }
    void complex_value(cdouble v) {
        real(v.real());
        real(v.imag());
    }
    void integer(long long v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%lld;", v);
        bytes(buf, std::strlen(buf));
    }
    void matrix(const ComplexMatrix& m) {
        integer(static_cast<long long>(m.rows()));
        integer(static_cast<long long>(m.cols()));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) complex_value(m(i, j));
    }
};

}  // namespace

std::string scenario_digest(const Scenario& s) {
    Fnv1a f;
    f.text("network:");
    f.matrix(s.unitary);
    f.text("ports:");
    for (auto p : s.input_ports) f.integer(static_cast<long long>(p));
    f.text("sources:");
    for (const auto& src : s.sources) {
        f.integer(src.n_cut());
        f.matrix(src.rho());
    }
    f.text("gram:");
    f.matrix(s.gram.matrix());
    f.text("detectors:");
    for (double e : s.detectors.eta()) f.real(e);
    f.text("cutoff:");
    f.integer(s.p_max);
    char out[17];
    std::snprintf(out, sizeof out, "%016" PRIx64, f.h);
    return std::string(out);
}

double ProbabilityTable::total() const {
    double t = 0.0;
    for (const auto& e : entries) t += e.probability;
    return t;
}

const ProbabilityEntry* ProbabilityTable::find(const OutcomePattern& m) const {
    for (const auto& e : entries)
        if (e.pattern == m) return &e;
    return nullptr;
}

ComplexMatrix build_H(const ComplexMatrix& input_rows, const DetectorBank& detectors,
                      const GramMatrix& gram) {
    const std::size_t n = input_rows.rows();
    const std::size_t m = input_rows.cols();
    if (detectors.size() != m)
        raise(ErrorKind::Dimension, "build_H: detector count != network columns");
    if (gram.size() != n) raise(ErrorKind::Dimension, "build_H: Gram size != network rows");
    ComplexMatrix h(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            cdouble acc = 0.0;
            for (std::size_t l = 0; l < m; ++l)
                acc += input_rows(k, l) * detectors[l] * std::conj(input_rows(j, l));
            h(k, j) = ((k == j) ? cdouble{1.0, 0.0} : cdouble{}) - acc * gram(k, j);
        }
    }
    if ((h - h.adjoint()).max_abs() > 1e-12)
        raise(ErrorKind::Numeric, "build_H: result not Hermitian within 1e-12");
    if (n > 0) {
        const auto ev = hermitian_eigenvalues(h);
        if (ev.front() < -kClampTol || ev.back() > 1.0 + kClampTol)
            raise(ErrorKind::Numeric, "build_H: eigenvalues [" + std::to_string(ev.front()) + ", " +
                                          std::to_string(ev.back()) + "] escape [0, 1]");
    }
    return h;
}

namespace {

ComplexMatrix selected_rows(const ComplexMatrix& u, const std::vector<std::size_t>& ports) {
    ComplexMatrix a(ports.size(), u.cols());
    for (std::size_t k = 0; k < ports.size(); ++k)
        for (std::size_t l = 0; l < u.cols(); ++l) a(k, l) = u(ports[k], l);
    return a;
}

std::vector<std::size_t> expand_occupation(const OccupationVector& occ) {
    std::vector<std::size_t> idx;
    idx.reserve(static_cast<std::size_t>(occ.total()));
    for (std::size_t k = 0; k < occ.size(); ++k)
        for (int r = 0; r < occ[k]; ++r) idx.push_back(k);
    return idx;
}

}  // namespace

SeriesEvaluator::SeriesEvaluator(const Scenario& s)
    : input_rows_(selected_rows(s.unitary, s.input_ports)), gram_(s.gram.matrix()) {
    const std::size_t n_src = s.sources.size();
    std::vector<HusimiSeries> g;
    g.reserve(n_src);
    std::vector<int> bounds(n_src);
    for (std::size_t k = 0; k < n_src; ++k) {
        g.push_back(husimi_series(s.sources[k]));
        bounds[k] = s.sources[k].n_cut();
    }
    // One term per occupation pair (n, m) with |n| = |m| = p and a nonzero
    // product of series coefficients; rows of H[m, n] repeat per m, columns
    // per n.
    for (int p = 0; p <= s.p_max; ++p) {
        const auto occs = enumerate_occupations(bounds, p);
        for (const auto& n_occ : occs) {
            for (const auto& m_occ : occs) {
                cdouble coef = 1.0;
                for (std::size_t k = 0; k < n_src; ++k) {
                    coef *= g[k](n_occ[k], m_occ[k]);
                    if (coef == cdouble{}) break;
                }
                if (coef == cdouble{}) continue;
                terms_.push_back(Term{expand_occupation(m_occ), expand_occupation(n_occ), coef});
            }
        }
    }
}

cdouble SeriesEvaluator::operator()(const std::vector<cdouble>& eta) const {
    const std::size_t n = input_rows_.rows();
    const std::size_t m = input_rows_.cols();
    if (eta.size() != m)
        raise(ErrorKind::Dimension, "SeriesEvaluator: efficiency vector length != port count");
    ComplexMatrix h(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            cdouble acc = 0.0;
            for (std::size_t l = 0; l < m; ++l)
                acc += input_rows_(k, l) * eta[l] * std::conj(input_rows_(j, l));
            h(k, j) = ((k == j) ? cdouble{1.0, 0.0} : cdouble{}) - acc * gram_(k, j);
        }
    }
    cdouble sum = 0.0;
    ComplexMatrix block;
    for (const auto& t : terms_) {
        const std::size_t p = t.rows.size();
        block = ComplexMatrix(p, p);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) block(i, j) = h(t.rows[i], t.cols[j]);
        sum += permanent_ryser(block) * t.coef;
    }
    return sum;
}

namespace detail {

double clamp_probability(double value, const char* where) {
    if (value < -kClampTol)
        raise(ErrorKind::Numeric, std::string(where) + ": probability " + std::to_string(value) +
                                      " below -1e-9 (invariant violation)");
    if (value > 1.0 + kClampTol)
        raise(ErrorKind::Numeric, std::string(where) + ": probability " + std::to_string(value) +
                                      " above 1+1e-9 (invariant violation)");
    return std::clamp(value, 0.0, 1.0);
}

double require_real(cdouble value, const char* where) {
    if (std::abs(value.imag()) > kImagTol)
        raise(ErrorKind::Numeric, std::string(where) + ": imaginary residue " +
                                      std::to_string(value.imag()) + " exceeds 1e-9");
    return value.real();
}

cdouble fock_interference_sum(const std::vector<std::vector<int>>& perms,
                              const std::vector<cdouble>& amplitudes,
                              const ComplexMatrix& overlaps, bool parallel) {
    const std::size_t count = perms.size();
    const std::size_t n = perms.empty() ? 0 : perms.front().size();
    std::vector<cdouble> partial(count, 0.0);
    // J(sigma2 o sigma1^{-1}) = prod_i V_{k_{sigma1(i)}, k_{sigma2(i)}}, so the
    // composed permutation never has to be formed.
#pragma omp parallel for schedule(static) if (parallel)
    for (long long a = 0; a < static_cast<long long>(count); ++a) {
        const auto& s1 = perms[static_cast<std::size_t>(a)];
        cdouble acc = 0.0;
        for (std::size_t b = 0; b < count; ++b) {
            const auto& s2 = perms[b];
            cdouble j = 1.0;
            for (std::size_t i = 0; i < n; ++i)
                j *= overlaps(static_cast<std::size_t>(s1[i]), static_cast<std::size_t>(s2[i]));
            acc += j * std::conj(amplitudes[b]);
        }
        partial[static_cast<std::size_t>(a)] = acc * amplitudes[static_cast<std::size_t>(a)];
    }
    cdouble sum = 0.0;
    for (const auto& p : partial) sum += p;
    return sum;
}

}  // namespace detail

double vacuum_probability(const Scenario& s) {
    SeriesEvaluator eval(s);
    std::vector<cdouble> eta(s.port_count());
    for (std::size_t l = 0; l < eta.size(); ++l) eta[l] = s.detectors[l];
    const double v = detail::require_real(eval(eta), "vacuum_probability");
    return detail::clamp_probability(v, "vacuum_probability");
}

Scenario vacuum_reduce(const Scenario& s) {
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < s.sources.size(); ++k)
        if (!s.sources[k].is_vacuum()) keep.push_back(k);
    if (keep.size() == s.sources.size()) return s;

    std::vector<SingleModeSource> sources;
    std::vector<std::size_t> ports;
    std::vector<ModeVector> vectors;
    for (auto k : keep) {
        sources.push_back(s.sources[k]);
        ports.push_back(s.input_ports[k]);
        if (!s.mode_vectors.empty()) vectors.push_back(s.mode_vectors[k]);
    }
    return Scenario{s.unitary, std::move(sources), std::move(ports), s.gram.restricted(keep),
                    s.detectors, s.p_max, std::move(vectors)};
}

double probability_fock(const Scenario& s, const OutcomePattern& m) {
    if (m.size() != s.port_count())
        raise(ErrorKind::Dimension, "probability_fock: pattern length != port count");
    std::vector<int> levels(s.sources.size());
    int n_total = 0;
    for (std::size_t k = 0; k < s.sources.size(); ++k) {
        if (!s.sources[k].is_fock())
            raise(ErrorKind::Domain, "probability_fock: source '" + s.sources[k].label() +
                                         "' is not a Fock state; use probability_general");
        levels[k] = s.sources[k].fock_level();
        n_total += levels[k];
    }
    if (m.total() != n_total)
        raise(ErrorKind::Domain,
              "probability_fock: pattern detects " + std::to_string(m.total()) + " photons but " +
                  std::to_string(n_total) + " were launched; use probability_general for losses");
    if (n_total > kFockPathMaxPhotons)
        raise(ErrorKind::SizeGuard, "probability_fock: " + std::to_string(n_total) +
                                        " photons exceed the (N!)^2 guard N <= " +
                                        std::to_string(kFockPathMaxPhotons));
    if (n_total == 0) return 1.0;

    // Nondecreasing port lists fixed by the occupations.
    std::vector<int> k_list;
    for (std::size_t k = 0; k < levels.size(); ++k)
        for (int r = 0; r < levels[k]; ++r) k_list.push_back(static_cast<int>(k));
    std::vector<int> l_list;
    for (std::size_t l = 0; l < m.size(); ++l)
        for (int r = 0; r < m[l]; ++r) l_list.push_back(static_cast<int>(l));

    const std::size_t n = static_cast<std::size_t>(n_total);
    std::vector<std::vector<int>> perms;
    {
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 0);
        do {
            perms.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
    }
    std::vector<cdouble> amplitudes(perms.size());
    for (std::size_t a = 0; a < perms.size(); ++a) {
        cdouble prod = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = s.input_ports[static_cast<std::size_t>(k_list[static_cast<std::size_t>(perms[a][i])])];
            prod *= s.unitary(row, static_cast<std::size_t>(l_list[i]));
        }
        amplitudes[a] = prod;
    }
    ComplexMatrix overlaps(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            overlaps(a, b) = s.gram(static_cast<std::size_t>(k_list[a]), static_cast<std::size_t>(k_list[b]));

    const cdouble sum = detail::fock_interference_sum(perms, amplitudes, overlaps, true);

    double prefactor = 1.0;
    for (std::size_t l = 0; l < m.size(); ++l)
        prefactor *= std::pow(s.detectors[l], m[l]) / factorial(m[l]);
    for (int lvl : levels) prefactor /= factorial(lvl);

    const double v = detail::require_real(sum * prefactor, "probability_fock");
    return detail::clamp_probability(v, "probability_fock");
}

namespace {

cdouble derivative_recursive(const SeriesEvaluator& eval, const Scenario& s,
                             const OutcomePattern& m, const std::vector<std::size_t>& axes,
                             std::size_t axis_idx, std::vector<cdouble>& eta,
                             DerivativeNodes nodes) {
    if (axis_idx == axes.size()) return eval(eta);
    const std::size_t l = axes[axis_idx];
    const std::size_t count = static_cast<std::size_t>(s.p_max) + 1;
    const double center = s.detectors[l];
    const auto offsets = derivative_node_offsets(nodes, center, count);
    std::vector<cdouble> values(count);
    const cdouble saved = eta[l];
    for (std::size_t j = 0; j < count; ++j) {
        eta[l] = center + offsets[j];
        values[j] = derivative_recursive(eval, s, m, axes, axis_idx + 1, eta, nodes);
    }
    eta[l] = saved;
    const auto coeffs = polynomial_coefficients(offsets, values);
    const int order = m[l];
    const double sign = (order % 2 == 0) ? 1.0 : -1.0;
    return sign * factorial(order) * coeffs[static_cast<std::size_t>(order)];
}

}  // namespace

double probability_general(const Scenario& s, const OutcomePattern& m, DerivativeNodes nodes) {
    if (m.size() != s.port_count())
        raise(ErrorKind::Dimension, "probability_general: pattern length != port count");
    if (m.total() > s.p_max)
        raise(ErrorKind::Domain, "probability_general: |m| = " + std::to_string(m.total()) +
                                     " exceeds the scenario cutoff p_max = " +
                                     std::to_string(s.p_max));
    std::vector<std::size_t> axes;
    for (std::size_t l = 0; l < m.size(); ++l)
        if (m[l] > 0) axes.push_back(l);

    SeriesEvaluator eval(s);
    std::vector<cdouble> eta(s.port_count());
    for (std::size_t l = 0; l < eta.size(); ++l) eta[l] = s.detectors[l];

    const cdouble deriv = derivative_recursive(eval, s, m, axes, 0, eta, nodes);
    double prefactor = 1.0;
    for (std::size_t l = 0; l < m.size(); ++l)
        prefactor *= std::pow(s.detectors[l], m[l]) / factorial(m[l]);
    const double v = detail::require_real(deriv * prefactor, "probability_general");
    return detail::clamp_probability(v, "probability_general");
}

namespace {

// Shared node grid over every axis any series-path pattern differentiates:
// evaluate the generating series once per node tuple, convert the value
// tensor to mixed Taylor coefficients one axis at a time, then read each
// pattern's coefficient.
class CoefficientGrid {
public:
    CoefficientGrid(const Scenario& s, std::vector<std::size_t> axes, DerivativeNodes nodes)
        : axes_(std::move(axes)), node_count_(static_cast<std::size_t>(s.p_max) + 1) {
        const std::size_t dims = axes_.size();
        std::size_t total = 1;
        for (std::size_t a = 0; a < dims; ++a) total *= node_count_;
        values_.assign(total, cdouble{});

        offsets_.reserve(dims);
        for (auto l : axes_)
            offsets_.push_back(derivative_node_offsets(nodes, s.detectors[l], node_count_));

        SeriesEvaluator eval(s);
        std::vector<cdouble> base_eta(s.port_count());
        for (std::size_t l = 0; l < base_eta.size(); ++l) base_eta[l] = s.detectors[l];

#pragma omp parallel for schedule(dynamic) firstprivate(base_eta)
        for (long long flat = 0; flat < static_cast<long long>(total); ++flat) {
            std::size_t rest = static_cast<std::size_t>(flat);
            for (std::size_t a = 0; a < dims; ++a) {
                const std::size_t q = rest % node_count_;
                rest /= node_count_;
                base_eta[axes_[a]] = cdouble{s.detectors[axes_[a]], 0.0} + offsets_[a][q];
            }
            values_[static_cast<std::size_t>(flat)] = eval(base_eta);
        }

        // Axis-by-axis conversion from samples to monomial coefficients in
        // the shifted variable t_l = eta_l - eta*_l.
        std::vector<cdouble> line(node_count_), coeffs;
        std::size_t stride = 1;
        for (std::size_t a = 0; a < dims; ++a) {
            const std::size_t block = stride * node_count_;
            for (std::size_t start = 0; start < total; ++start) {
                if ((start / stride) % node_count_ != 0) continue;
                for (std::size_t q = 0; q < node_count_; ++q) line[q] = values_[start + q * stride];
                coeffs = polynomial_coefficients(offsets_[a], line);
                for (std::size_t q = 0; q < node_count_; ++q) values_[start + q * stride] = coeffs[q];
            }
            stride = block;
        }
    }

    /// Mixed Taylor coefficient for the pattern (pattern entries off the grid
    /// axes must be zero).
    cdouble coefficient(const OutcomePattern& m) const {
        std::size_t flat = 0, stride = 1;
        for (std::size_t a = 0; a < axes_.size(); ++a) {
            flat += static_cast<std::size_t>(m[axes_[a]]) * stride;
            stride *= node_count_;
        }
        return values_[flat];
    }

private:
    std::vector<std::size_t> axes_;
    std::size_t node_count_;
    std::vector<std::vector<cdouble>> offsets_;
    std::vector<cdouble> values_;
};

}  // namespace

ProbabilityTable distribution(const Scenario& s, int max_total, DerivativeNodes nodes) {
    if (max_total < 0) raise(ErrorKind::Domain, "distribution: max_total must be >= 0");
    if (max_total > s.p_max)
        raise(ErrorKind::Domain, "distribution: max_total exceeds the scenario cutoff p_max");

    bool all_fock = true;
    int fock_total = 0;
    for (const auto& src : s.sources) {
        if (src.is_fock())
            fock_total += src.fock_level();
        else
            all_fock = false;
    }

    const auto patterns = enumerate_patterns(s.port_count(), max_total);

    const auto use_fock_path = [&](const OutcomePattern& m) {
        if (!all_fock) return false;
        if (m.total() > fock_total) return true;  // exact zero, no sum needed
        return m.total() == fock_total && fock_total <= kFockPathMaxPhotons;
    };

    // Ports that any series-path pattern differentiates.
    std::vector<bool> axis_needed(s.port_count(), false);
    bool series_needed = false;
    for (const auto& m : patterns) {
        if (use_fock_path(m)) continue;
        series_needed = true;
        for (std::size_t l = 0; l < m.size(); ++l)
            if (m[l] > 0) axis_needed[l] = true;
    }
    std::vector<std::size_t> axes;
    for (std::size_t l = 0; l < axis_needed.size(); ++l)
        if (axis_needed[l]) axes.push_back(l);

    std::optional<CoefficientGrid> grid;
    if (series_needed) grid.emplace(s, axes, nodes);

    ProbabilityTable table;
    table.metadata.digest = scenario_digest(s);
    table.metadata.p_max = s.p_max;
    table.metadata.max_total = max_total;
    table.metadata.truncation_budget = s.truncation_budget();
    table.metadata.series_truncated = s.series_truncated();

    table.entries.reserve(patterns.size());
    for (const auto& m : patterns) {
        ProbabilityEntry entry;
        entry.pattern = m;
        if (use_fock_path(m)) {
            entry.probability =
                (m.total() > fock_total) ? 0.0 : probability_fock(s, m);
            entry.path = "fock";
        } else {
            double prefactor = 1.0;
            for (std::size_t l = 0; l < m.size(); ++l)
                if (m[l] > 0) prefactor *= std::pow(s.detectors[l], m[l]);
            const double sign = (m.total() % 2 == 0) ? 1.0 : -1.0;
            const double v =
                detail::require_real(grid->coefficient(m) * sign * prefactor, "distribution");
            entry.probability = detail::clamp_probability(v, "distribution");
            entry.path = "series";
        }
        table.entries.push_back(std::move(entry));
    }

    const double total = table.total();
    if (total > 1.0 + 1e-8)
        raise(ErrorKind::Numeric,
              "distribution: probabilities sum to " + std::to_string(total) + " > 1 + 1e-8");
    return table;
}

}  // namespace lopsim
