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

#include "lopsim/sources.hpp"

#include <cmath>
#include <string>

#include "lopsim/linalg.hpp"

namespace lopsim {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kPsdTol = 1e-9;
constexpr double kDiagSlack = 1e-12;

std::optional<int> detect_fock_level(const ComplexMatrix& rho) {
    std::optional<int> level;
    for (std::size_t n = 0; n < rho.rows(); ++n) {
        for (std::size_t m = 0; m < rho.cols(); ++m) {
            const double mag = std::abs(rho(n, m));
            if (n == m && std::abs(mag - 1.0) <= 1e-12) {
                if (level) return std::nullopt;  // two unit diagonal entries
                level = static_cast<int>(n);
            } else if (mag > 1e-12) {
                return std::nullopt;
            }
        }
    }
    return level;
}

}  // namespace

SingleModeSource::SingleModeSource(ComplexMatrix rho, std::string label, double trace_deficit,
                                   bool renormalize)
    : rho_(std::move(rho)), label_(std::move(label)), trace_deficit_(trace_deficit) {
    if (!rho_.square() || rho_.rows() == 0)
        raise(ErrorKind::Validation, "SingleModeSource: density matrix must be square and non-empty");
    if (rho_.rows() > 171)
        raise(ErrorKind::SizeGuard,
              "SingleModeSource: n_cut beyond the double-precision factorial table (170)");
    rho_.validate_finite("density matrix");
    if ((rho_ - rho_.adjoint()).max_abs() > kHermTol)
        raise(ErrorKind::Validation, "SingleModeSource '" + label_ + "': not Hermitian within 1e-12");
    std::string diag;
    if (!check_hermitian_psd(rho_, kPsdTol, &diag))
        raise(ErrorKind::Validation,
              "SingleModeSource '" + label_ + "': not positive semi-definite (" + diag + ")");
    const double tr = rho_.trace().real();
    if (renormalize && tr > 0.0) {
        for (std::size_t i = 0; i < rho_.rows(); ++i)
            for (std::size_t j = 0; j < rho_.cols(); ++j) rho_(i, j) /= tr;
    } else if (std::abs(tr - (1.0 - trace_deficit_)) > kTruncationTolerance + 1e-12) {
        raise(ErrorKind::Validation, "SingleModeSource '" + label_ + "': trace " + std::to_string(tr) +
                                         " inconsistent with declared truncation deficit");
    }
    for (std::size_t n = 0; n < rho_.rows(); ++n) {
        const double p = rho_(n, n).real();
        if (p < -kPsdTol || p > 1.0 + kDiagSlack)
            raise(ErrorKind::Validation,
                  "SingleModeSource '" + label_ + "': diagonal entry outside [0, 1]");
    }
    fock_level_ = detect_fock_level(rho_);
}

int SingleModeSource::fock_level() const {
    if (!fock_level_)
        raise(ErrorKind::Domain, "SingleModeSource '" + label_ + "' is not a Fock state");
    return *fock_level_;
}

SingleModeSource fock(int n, int n_cut) {
    if (n < 0 || n_cut < 0) raise(ErrorKind::Domain, "fock: n and n_cut must be non-negative");
    if (n > n_cut)
        raise(ErrorKind::Cutoff, "fock: level " + std::to_string(n) + " exceeds n_cut " +
                                     std::to_string(n_cut));
    ComplexMatrix rho(static_cast<std::size_t>(n_cut) + 1, static_cast<std::size_t>(n_cut) + 1);
    rho(static_cast<std::size_t>(n), static_cast<std::size_t>(n)) = 1.0;
    return SingleModeSource(std::move(rho), "fock(" + std::to_string(n) + ")");
}

SingleModeSource coherent(cdouble alpha, int n_cut, double truncation_tolerance) {
    if (n_cut < 0) raise(ErrorKind::Domain, "coherent: n_cut must be non-negative");
    const double mu = std::norm(alpha);  // mean photon number
    // Poisson tail mass beyond n_cut decides whether the cutoff is usable.
    double kept = 0.0, term = std::exp(-mu);
    int required = -1;
    for (int n = 0; n <= 170; ++n) {
        kept += term;
        if (required < 0 && 1.0 - kept <= truncation_tolerance) required = n;
        if (n == n_cut && 1.0 - kept > truncation_tolerance) {
            // keep scanning to report the smallest workable n_cut
            for (int nn = n + 1; nn <= 170 && required < 0; ++nn) {
                term *= mu / nn;
                kept += term;
                if (1.0 - kept <= truncation_tolerance) required = nn;
            }
            raise(ErrorKind::Cutoff,
                  "coherent: truncation deficit at n_cut " + std::to_string(n_cut) + " exceeds " +
                      std::to_string(truncation_tolerance) +
                      (required >= 0 ? "; need n_cut >= " + std::to_string(required)
                                     : "; no n_cut <= 170 suffices"));
        }
        if (n == n_cut) break;
        term *= mu / (n + 1);
    }
    const double deficit = std::max(0.0, 1.0 - kept);

    const std::size_t dim = static_cast<std::size_t>(n_cut) + 1;
    ComplexMatrix rho(dim, dim);
    const double weight = std::exp(-mu);
    std::vector<cdouble> pow_alpha(dim);
    pow_alpha[0] = 1.0;
    for (std::size_t n = 1; n < dim; ++n) pow_alpha[n] = pow_alpha[n - 1] * alpha;
    for (std::size_t n = 0; n < dim; ++n)
        for (std::size_t m = 0; m < dim; ++m)
            rho(n, m) = weight * pow_alpha[n] * std::conj(pow_alpha[m]) /
                        std::sqrt(factorial(static_cast<int>(n)) * factorial(static_cast<int>(m)));
    return SingleModeSource(std::move(rho), "coherent", deficit);
}

SingleModeSource thermal(double nbar, int n_cut, double truncation_tolerance) {
    if (nbar < 0.0) raise(ErrorKind::Domain, "thermal: nbar must be non-negative");
    if (n_cut < 0) raise(ErrorKind::Domain, "thermal: n_cut must be non-negative");
    const double ratio = nbar / (1.0 + nbar);
    const double deficit = (nbar == 0.0) ? 0.0 : std::pow(ratio, n_cut + 1);
    if (deficit > truncation_tolerance) {
        int required = -1;
        for (int nn = n_cut + 1; nn <= 170; ++nn) {
            if (std::pow(ratio, nn + 1) <= truncation_tolerance) {
                required = nn;
                break;
            }
        }
        raise(ErrorKind::Cutoff, "thermal: geometric tail " + std::to_string(deficit) +
                                     " at n_cut " + std::to_string(n_cut) + " exceeds " +
                                     std::to_string(truncation_tolerance) +
                                     (required >= 0 ? "; need n_cut >= " + std::to_string(required)
                                                    : "; no n_cut <= 170 suffices"));
    }
    const std::size_t dim = static_cast<std::size_t>(n_cut) + 1;
    ComplexMatrix rho(dim, dim);
    double p = 1.0 / (1.0 + nbar);
    for (std::size_t n = 0; n < dim; ++n) {
        rho(n, n) = p;
        p *= ratio;
    }
    return SingleModeSource(std::move(rho), "thermal", deficit);
}

SingleModeSource custom(ComplexMatrix rho, double truncation_tolerance, std::string label) {
    if (!rho.square()) raise(ErrorKind::Validation, "custom: density matrix must be square");
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > truncation_tolerance)
        raise(ErrorKind::Validation, "custom: trace " + std::to_string(tr) +
                                         " deviates from 1 beyond the truncation tolerance");
    return SingleModeSource(std::move(rho), std::move(label), 0.0, /*renormalize=*/true);
}

HusimiSeries husimi_series(const SingleModeSource& src) {
    const std::size_t dim = src.rho().rows();
    ComplexMatrix g(dim, dim);
    for (std::size_t n = 0; n < dim; ++n)
        for (std::size_t m = 0; m < dim; ++m)
            g(n, m) = src.rho()(n, m) /
                      std::sqrt(factorial(static_cast<int>(n)) * factorial(static_cast<int>(m)));
    return HusimiSeries{std::move(g)};
}

}  // namespace lopsim
