#pragma once

#include <optional>
#include <vector>

#include "chiraldecay/complex_matrix.hpp"

namespace chiraldecay::numerics {

// Matrix exponential by Pade-13 scaling and squaring (Higham thresholds),
// with a 30-term Taylor fallback below ||M||_1 = 0.5. Exactly triangular
// input yields exactly triangular output. Throws OverflowError above
// norm_cap, NonSquareError for rectangular input.
ComplexMatrix expm(const ComplexMatrix& m, double norm_cap = 1e4);

struct EigvalsResult {
  std::vector<cplx> values;           // with multiplicity, deflation order
  bool condition_warning = false;     // eigenvector basis condition > 1e8
  double condition_estimate = 1.0;    // sigma_max/sigma_min of eigenvector matrix
};

// Eigenvalues via Householder Hessenberg reduction + complex shifted QR.
// Exactly triangular input short-circuits to the diagonal. The condition
// estimate comes from inverse iteration eigenvectors and flags near-EP
// (defective) spectra.
EigvalsResult eigvals(const ComplexMatrix& m, int max_sweeps_per_eig = 40);

struct LargestSingularResult {
  double sigma = 0.0;        // top eigenvalue of M^dag M (squared top singular value)
  std::vector<cplx> vector;  // matching unit eigenvector
};

// Power iteration on M^dag M, accelerated by repeated normalized squaring so
// near-degenerate leading eigenvalues still converge; Rayleigh tolerance 1e-12.
LargestSingularResult largest_singular(const ComplexMatrix& m);

// All singular values, descending, via one-sided complex Jacobi. Accurate for
// the small singular values the rank tests threshold at 1e-8.
std::vector<double> singular_values(const ComplexMatrix& m);

// LU with partial pivoting; triangular input short-circuits to the exact
// diagonal product.
cplx determinant(const ComplexMatrix& m);

// Ryser's inclusion-exclusion with Gray-code row-sum updates and Kahan
// compensated accumulation; N <= 24 (TooLargeError above). Triangular input
// short-circuits to the diagonal product, which is exact.
cplx permanent(const ComplexMatrix& m);

// Solve A x = b by LU with partial pivoting (near-singular pivots are
// nudged, which is what the inverse-iteration caller wants).
std::vector<cplx> solve_regularized(ComplexMatrix a, std::vector<cplx> b);

struct TridiagEigensystem {
  std::vector<double> values;          // ascending
  std::vector<std::vector<double>> vectors;  // vectors[j] belongs to values[j]
};

// Implicit-shift QL for a real symmetric tridiagonal matrix, with
// eigenvector accumulation (classic tql2).
TridiagEigensystem symmetric_tridiag_eig(const std::vector<double>& diag,
                                         const std::vector<double>& offdiag);

}  // namespace chiraldecay::numerics
