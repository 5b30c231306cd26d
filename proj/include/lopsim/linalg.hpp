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

#ifndef LOPSIM_LINALG_HPP
#define LOPSIM_LINALG_HPP

#include <string>
#include <vector>

#include "lopsim/complex_matrix.hpp"

namespace lopsim {

/// Hard cost guards for the exact permanent kernels. Exceeding them raises
/// a size-guard error instead of hanging the process.
inline constexpr std::size_t kPermanentNaiveMaxN = 9;
inline constexpr std::size_t kPermanentRyserMaxN = 26;

/// Entrywise (Hadamard) product. Shapes must match.
ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b);

/// Builds the p x p matrix H[row_occ, col_occ]: row index k of `h` is
/// repeated row_occ[k] times (nondecreasing index order), likewise columns.
/// |row_occ| and |col_occ| must agree.
ComplexMatrix submatrix_with_repetition(const ComplexMatrix& h, const OccupationVector& row_occ,
                                        const OccupationVector& col_occ);

/// Permanent by direct permutation expansion, O(n * n!). Reference kernel;
/// guarded at n <= 9.
cdouble permanent_naive(const ComplexMatrix& a);

/// Permanent by Ryser's formula with Gray-code subset iteration, O(2^n * n).
/// Guarded at n <= 26. Runs the OpenMP kernel when compiled with OpenMP;
/// the result is independent of the thread count.
cdouble permanent_ryser(const ComplexMatrix& a);

/// Single-threaded Ryser kernel, kept as the reference for the parallel one.
cdouble permanent_ryser_serial(const ComplexMatrix& a);

/// True iff max-entry-norm of (U^dag U - I) <= tol. Non-square input returns
/// false; `diagnostic`, when given, receives the reason or the residual.
bool check_unitary(const ComplexMatrix& u, double tol, std::string* diagnostic = nullptr);

/// True iff max|A - A^dag| <= tol and every eigenvalue >= -tol.
bool check_hermitian_psd(const ComplexMatrix& a, double tol, std::string* diagnostic = nullptr);

/// Eigenvalues of (A + A^dag)/2 in ascending order.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

/// Factorials 0..170 as doubles (values beyond 170 overflow double).
double factorial(int n);

/// Binomial coefficient as a double, n <= 170.
double binomial(int n, int k);

}  // namespace lopsim

#endif
