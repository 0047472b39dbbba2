#pragma once

#include <utility>
#include <vector>

#include "qrac/rac.hpp"

namespace qrac::strategies {

/// Columns of `vectors` are the basis states. Gram matrix must be the
/// identity within 1e-10.
struct OrthonormalBasis {
    Matrix vectors;

    int dim() const { return static_cast<int>(vectors.rows()); }
};

/// k mutually unbiased orthonormal bases in a prime dimension; every
/// cross-basis overlap satisfies |<u|v>|^2 = 1/dim.
struct MubFamily {
    int dim = 0;
    std::vector<OrthonormalBasis> bases;
};

/// Real symmetrized triple products 2 Re(<e_j|f_k><f_k|g_l><g_l|e_j>) for all
/// (j, k, l).
struct TripleProducts {
    int dim = 0;
    std::vector<double> values;

    double at(int j, int k, int l) const {
        return values[(static_cast<std::size_t>(j) * dim + k) * dim + l];
    }
};

bool is_prime(int value);

/// The cyclic shift X (|k> -> |k+1 mod d>) and clock Z (|k> -> w^k |k>,
/// w = exp(2 pi i / d)). Both unitary, ZX = w XZ, X^d = Z^d = identity.
std::pair<Matrix, Matrix> weyl_generators(int d);

/// Discrete Fourier basis, column k has entries exp(2 pi i j k / d)/sqrt(d).
/// Diagonalizes X and is unbiased to the computational basis.
OrthonormalBasis fourier_basis(int d);

/// The optimal (2, d, d) protocol: computational plus Fourier decodings and
/// Weyl-displaced encodings X^{x1} Z^{x2} |psi> with |psi> the normalized sum
/// of |0> and its Fourier transform. Achieves (1 + 1/sqrt(d))/2.
Strategy n2_optimal_strategy(int d);

/// The optimal (3, 2, 2) protocol: the three Pauli eigenbases as decodings
/// and the eight Bloch-cube states ((+-1, +-1, +-1)/sqrt(3)) as encodings.
/// Achieves (1 + 1/sqrt(3))/2.
Strategy cube_strategy_322();

/// Weyl-Heisenberg MUB family for prime d: basis 0 is computational, basis k
/// (1 <= k <= d) is the eigenbasis of X Z^{k-1}. 2 <= count <= d + 1.
/// Non-prime d raises ValidationError.
MubFamily mub_bases(int d, int count);

/// Projective measurements in the first n MUBs of dimension d, with the
/// closed-form best-response states. Requires 2 <= n <= d + 1, d prime.
Strategy mub_strategy(int n, int d);

/// For each input tuple, the projector onto a top eigenvector of
/// sum_y M_{x_y|y} (descending eigensolver order breaks ties).
std::vector<Matrix> optimal_states_for_measurements(const std::vector<Povm>& measurements);

TripleProducts mub_triple_products(const OrthonormalBasis& e,
                                   const OrthonormalBasis& f,
                                   const OrthonormalBasis& g);

} // namespace qrac::strategies
