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

#ifndef LOPSIM_COUNTING_ENGINE_HPP
#define LOPSIM_COUNTING_ENGINE_HPP

#include <string>
#include <vector>

#include "lopsim/complex_matrix.hpp"
#include "lopsim/distinguishability.hpp"
#include "lopsim/poly_interp.hpp"
#include "lopsim/sources.hpp"

namespace lopsim {

/// Permutation-sum guard for the Fock fast path; the double sum costs (N!)^2.
inline constexpr int kFockPathMaxPhotons = 8;

/// Per-port detector efficiencies, each in [0, 1].
class DetectorBank {
public:
    explicit DetectorBank(std::vector<double> eta);

    std::size_t size() const { return eta_.size(); }
    double operator[](std::size_t l) const { return eta_[l]; }
    const std::vector<double>& eta() const { return eta_; }

private:
    std::vector<double> eta_;
};

/// A detection pattern: photons counted per output port.
using OutcomePattern = OccupationVector;

/// Everything a computation needs: the M x M multiport unitary, the sources
/// feeding (a subset of) its input ports, their overlap matrix, the detector
/// efficiencies on all M output ports, and the total-photon series cutoff.
///
/// `input_ports` lists which rows of the unitary carry the sources; a full
/// scenario uses 0..M-1 and vacuum_reduce() shrinks the list. Build through
/// make_scenario(), which validates every invariant.
struct Scenario {
    ComplexMatrix unitary;                  // M x M, unitary to 1e-10
    std::vector<SingleModeSource> sources;  // size N <= M, aligned with input_ports
    std::vector<std::size_t> input_ports;   // sorted, distinct, values < M
    GramMatrix gram;                        // N x N
    DetectorBank detectors;                 // size M
    int p_max = 0;                          // generating-series truncation
    std::vector<ModeVector> mode_vectors;   // optional (empty or size N); feeds the oracle

    std::size_t port_count() const { return unitary.rows(); }
    std::size_t source_count() const { return sources.size(); }

    /// Sum of the sources' certified truncation deficits.
    double truncation_budget() const;

    /// True when the series cutoff drops occupied Fock levels of some source.
    bool series_truncated() const;
};

Scenario make_scenario(ComplexMatrix unitary, std::vector<SingleModeSource> sources,
                       GramMatrix gram, DetectorBank detectors, int p_max,
                       std::vector<ModeVector> mode_vectors = {});

/// FNV-1a content hash of the scenario's semantic fields, as fixed-width hex.
std::string scenario_digest(const Scenario& s);

struct TableMetadata {
    std::string digest;
    int p_max = 0;
    int max_total = 0;
    double truncation_budget = 0.0;
    bool series_truncated = false;
};

struct ProbabilityEntry {
    OutcomePattern pattern;
    double probability = 0.0;
    std::string path;  // "fock" or "series"
};

/// Probabilities for every pattern with |m| <= max_total, sorted by total
/// count then lexicographically. Entries are validated to lie in
/// [-1e-9, 1+1e-9] and to sum to at most 1 + 1e-8.
struct ProbabilityTable {
    std::vector<ProbabilityEntry> entries;
    TableMetadata metadata;

    double total() const;
    const ProbabilityEntry* find(const OutcomePattern& m) const;
};

/// H = I - (A diag(eta) A^dag) o V with A the selected input rows of the
/// multiport. Validated Hermitian (1e-12) with spectrum in [-1e-9, 1+1e-9].
ComplexMatrix build_H(const ComplexMatrix& input_rows, const DetectorBank& detectors,
                      const GramMatrix& gram);

/// Evaluates the truncated generating series at given (possibly complex)
/// per-port efficiencies. The term list is precomputed once per instance, so
/// repeated evaluation — the derivative grids — stays cheap.
class SeriesEvaluator {
public:
    explicit SeriesEvaluator(const Scenario& s);

    cdouble operator()(const std::vector<cdouble>& eta) const;

    std::size_t term_count() const { return terms_.size(); }

private:
    struct Term {
        std::vector<std::size_t> rows, cols;  // expanded indices into H
        cdouble coef;                          // product of Husimi-series entries
    };
    ComplexMatrix input_rows_;  // N x M
    ComplexMatrix gram_;        // N x N
    std::vector<Term> terms_;
};

/// P_0: probability of detecting no photons anywhere (the generating
/// function at the physical efficiencies). Real within 1e-9, clamped to [0,1].
double vacuum_probability(const Scenario& s);

/// Drops vacuum sources: restricts sources, input ports, the Gram matrix and
/// mode vectors to the non-vacuum entries. Output probabilities are invariant
/// under this reduction.
Scenario vacuum_reduce(const Scenario& s);

/// Fock-input fast path: every source must be a Fock state and the pattern
/// must detect all input photons (|m| = N). Guarded at N <= 8.
double probability_fock(const Scenario& s, const OutcomePattern& m);

/// General path: extracts the efficiency derivatives of P_0 exactly. P_0 is a
/// polynomial of degree <= p_max in each eta_l, so each requested axis is
/// sampled at p_max+1 nodes, the coefficients are recovered from the
/// interpolation system, and the derivative is taken analytically.
double probability_general(const Scenario& s, const OutcomePattern& m,
                           DerivativeNodes nodes = DerivativeNodes::Circle);

/// Every pattern with |m| <= max_total; uses the Fock fast path when its
/// preconditions hold, the series path otherwise. Deterministic entry order.
ProbabilityTable distribution(const Scenario& s, int max_total,
                              DerivativeNodes nodes = DerivativeNodes::Circle);

namespace detail {

/// The (N!)^2 permutation double sum of the Fock fast path over precomputed
/// single-permutation amplitudes. `parallel` selects the OpenMP kernel; both
/// kernels produce the same ordered reduction.
cdouble fock_interference_sum(const std::vector<std::vector<int>>& perms,
                              const std::vector<cdouble>& amplitudes,
                              const ComplexMatrix& overlaps, bool parallel);

/// Clamp with the invariant-violation rules: values in [-1e-9, 0) clamp to 0,
/// (1, 1+1e-9] clamp to 1, anything further raises a numeric error.
double clamp_probability(double value, const char* where);

/// Checks |imag| <= 1e-9 and returns the real part.
double require_real(cdouble value, const char* where);

}  // namespace detail

}  // namespace lopsim

#endif
