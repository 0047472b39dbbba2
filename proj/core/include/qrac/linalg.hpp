#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <utility>

#include <Eigen/Dense>

#include "qrac/errors.hpp"

namespace qrac::linalg {

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Vector  = Eigen::VectorXcd;

/// Tolerance for accepting a matrix as Hermitian (max absolute entry
/// difference between A and its adjoint).
inline constexpr double kHermitianTol = 1e-12;

/// Spectral decomposition of a Hermitian matrix, eigenvalues sorted in
/// descending order with matching eigenvector columns.
struct EigDecomposition {
    Eigen::VectorXd eigenvalues;
    Matrix eigenvectors;
};

/// Result of the trace-zero norm inequality check: lhs is the operator norm,
/// rhs is sqrt((r-1)/r) times the Frobenius norm with r the numerical rank.
struct Lemma1Check {
    double lhs = 0.0;
    double rhs = 0.0;
    int rank = 0;
};

bool is_hermitian(const Matrix& a, double tol = kHermitianTol);

/// Full spectral decomposition. Throws ValidationError if the input is not
/// Hermitian within tol, NumericError if the solver fails to converge.
/// Deterministic for a fixed input.
EigDecomposition hermitian_eig(const Matrix& a, double tol = kHermitianTol);

/// Largest eigenvalue of a Hermitian matrix (eigenvalues-only fast path).
double max_eigenvalue(const Matrix& a, double tol = kHermitianTol);

/// Operator norm of a Hermitian matrix: max_i |lambda_i|.
double operator_norm(const Matrix& a);

/// sqrt(sum of squared entry magnitudes) = sqrt(Tr(A^dag A)). Any matrix.
double frobenius_norm(const Matrix& a);

/// PSD square root: B with B^2 = A. Eigenvalues in [-1e-6, 0) are clipped to
/// zero; anything below -1e-6 raises ValidationError.
Matrix matrix_sqrt_psd(const Matrix& a);

/// Pseudo-inverse square root on the support of a PSD matrix. Eigenvalues
/// below rel_cutoff times the largest are treated as zero.
Matrix inverse_sqrt_psd(const Matrix& a, double rel_cutoff = 1e-12);

/// Checks the operator-norm vs Frobenius-norm inequality for a nonzero
/// trace-zero Hermitian matrix. The rank threshold is |lambda| >
/// 1e-10 * operator_norm. Guarantees lhs <= rhs + 1e-10 for valid inputs.
Lemma1Check lemma1_check(const Matrix& a);

/// One standard complex Gaussian (independent N(0,1) real and imaginary
/// parts) via Box-Muller on explicit 53-bit uniforms. Using the raw engine
/// output keeps the stream identical across standard library implementations.
Complex complex_standard_normal(std::mt19937_64& rng);

/// Haar-random unit vector: componentwise complex Gaussians, normalized.
Vector haar_random_state_vector(int dim, std::mt19937_64& rng);

/// Haar-random rank-1 density matrix |psi><psi|. Trace 1, PSD, reproducible
/// for a fixed (dim, engine state).
Matrix haar_random_pure_state(int dim, std::mt19937_64& rng);

} // namespace qrac::linalg
