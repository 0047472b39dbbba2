#include "qrac/linalg.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qrac::linalg {

namespace {

void require_square_finite(const Matrix& a, const char* who) {
    if (a.rows() == 0 || a.rows() != a.cols()) {
        std::ostringstream msg;
        msg << who << ": expected a nonempty square matrix, got "
            << a.rows() << "x" << a.cols();
        throw ValidationError(msg.str());
    }
    if (!a.allFinite()) {
        throw ValidationError(std::string(who) + ": matrix has NaN/Inf entries");
    }
}

Matrix hermitize(const Matrix& a) {
    return 0.5 * (a + a.adjoint());
}

} // namespace

bool is_hermitian(const Matrix& a, double tol) {
    if (a.rows() != a.cols() || a.rows() == 0) return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

EigDecomposition hermitian_eig(const Matrix& a, double tol) {
    require_square_finite(a, "hermitian_eig");
    const double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol) {
        std::ostringstream msg;
        msg << "hermitian_eig: input is not Hermitian (max |A - A^dag| = "
            << dev << ", tol = " << tol << ")";
        throw ValidationError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(a));
    if (solver.info() != Eigen::Success) {
        const Matrix recon = solver.eigenvectors() *
                             solver.eigenvalues().asDiagonal() *
                             solver.eigenvectors().adjoint();
        std::ostringstream msg;
        msg << "hermitian_eig: solver did not converge for dim " << a.rows()
            << " (reconstruction residual " << (recon - a).norm() << ")";
        throw NumericError(msg.str());
    }
    EigDecomposition out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

double max_eigenvalue(const Matrix& a, double tol) {
    require_square_finite(a, "max_eigenvalue");
    const double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol) {
        std::ostringstream msg;
        msg << "max_eigenvalue: input is not Hermitian (max |A - A^dag| = " << dev << ")";
        throw ValidationError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(a), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("max_eigenvalue: solver did not converge");
    }
    return solver.eigenvalues().maxCoeff();
}

double operator_norm(const Matrix& a) {
    require_square_finite(a, "operator_norm");
    if (!is_hermitian(a)) {
        throw ValidationError("operator_norm: input is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(a), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("operator_norm: solver did not converge");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double frobenius_norm(const Matrix& a) {
    return a.norm();
}

Matrix matrix_sqrt_psd(const Matrix& a) {
    EigDecomposition eig = hermitian_eig(a);
    Eigen::VectorXd roots(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        const double lambda = eig.eigenvalues[i];
        if (lambda < -1e-6) {
            std::ostringstream msg;
            msg << "matrix_sqrt_psd: input is not PSD (eigenvalue " << lambda << ")";
            throw ValidationError(msg.str());
        }
        roots[i] = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
    }
    return hermitize(eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.adjoint());
}

Matrix inverse_sqrt_psd(const Matrix& a, double rel_cutoff) {
    EigDecomposition eig = hermitian_eig(a);
    const double cutoff = rel_cutoff * std::max(eig.eigenvalues.maxCoeff(), 0.0);
    Eigen::VectorXd inv_roots(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        const double lambda = eig.eigenvalues[i];
        inv_roots[i] = lambda > cutoff ? 1.0 / std::sqrt(lambda) : 0.0;
    }
    return hermitize(eig.eigenvectors * inv_roots.asDiagonal() * eig.eigenvectors.adjoint());
}

Lemma1Check lemma1_check(const Matrix& a) {
    EigDecomposition eig = hermitian_eig(a);
    const double trace = a.trace().real();
    if (std::abs(trace) > 1e-10) {
        std::ostringstream msg;
        msg << "lemma1_check: trace must vanish, got " << trace;
        throw ValidationError(msg.str());
    }
    const double op_norm = eig.eigenvalues.cwiseAbs().maxCoeff();
    if (op_norm == 0.0) {
        throw ValidationError("lemma1_check: matrix is zero");
    }
    const double rank_cut = 1e-10 * op_norm;
    int rank = 0;
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        if (std::abs(eig.eigenvalues[i]) > rank_cut) ++rank;
    }
    if (rank < 2) {
        throw ValidationError("lemma1_check: numerical rank below 2 is impossible for a trace-zero matrix");
    }
    Lemma1Check out;
    out.lhs = op_norm;
    out.rhs = std::sqrt((rank - 1.0) / rank) * frobenius_norm(a);
    out.rank = rank;
    return out;
}

Complex complex_standard_normal(std::mt19937_64& rng) {
    // u1 in (0,1], u2 in [0,1); 53-bit mantissa resolution.
    const double u1 = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

Vector haar_random_state_vector(int dim, std::mt19937_64& rng) {
    if (dim < 1) {
        throw ValidationError("haar_random_state_vector: dim must be >= 1");
    }
    Vector g(dim);
    double norm = 0.0;
    do {
        for (int i = 0; i < dim; ++i) g[i] = complex_standard_normal(rng);
        norm = g.norm();
    } while (norm == 0.0);
    return g / norm;
}

Matrix haar_random_pure_state(int dim, std::mt19937_64& rng) {
    const Vector psi = haar_random_state_vector(dim, rng);
    return psi * psi.adjoint();
}

} // namespace qrac::linalg
