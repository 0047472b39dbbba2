#include "qrac/strategies.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qrac::strategies {

namespace {

using linalg::Complex;
using linalg::Vector;

Complex root_of_unity(int numerator, int d) {
    const double angle = 2.0 * std::numbers::pi * numerator / d;
    return {std::cos(angle), std::sin(angle)};
}

void require_dim(int d, const char* who) {
    if (d < 2) {
        throw ValidationError(std::string(who) + ": dimension must be >= 2");
    }
}

} // namespace

bool is_prime(int value) {
    if (value < 2) return false;
    for (int p = 2; p * p <= value; ++p) {
        if (value % p == 0) return false;
    }
    return true;
}

std::pair<Matrix, Matrix> weyl_generators(int d) {
    require_dim(d, "weyl_generators");
    Matrix shift = Matrix::Zero(d, d);
    Matrix clock = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        shift((k + 1) % d, k) = 1.0;
        clock(k, k) = root_of_unity(k, d);
    }
    return {shift, clock};
}

OrthonormalBasis fourier_basis(int d) {
    require_dim(d, "fourier_basis");
    Matrix f(d, d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            f(j, k) = scale * root_of_unity((j * k) % d, d);
        }
    }
    return {f};
}

Strategy n2_optimal_strategy(int d) {
    require_dim(d, "n2_optimal_strategy");
    const auto [shift, clock] = weyl_generators(d);
    const OrthonormalBasis fourier = fourier_basis(d);

    // |psi> is the normalized sum of |0> and its Fourier transform; the
    // relative phase is fixed to +1.
    Vector psi = fourier.vectors.col(0);
    psi[0] += 1.0;
    psi.normalize();

    std::vector<Matrix> shift_powers(d), clock_powers(d);
    shift_powers[0] = Matrix::Identity(d, d);
    clock_powers[0] = Matrix::Identity(d, d);
    for (int k = 1; k < d; ++k) {
        shift_powers[k] = shift * shift_powers[k - 1];
        clock_powers[k] = clock * clock_powers[k - 1];
    }

    RacSetting setting(2, d, d);
    Strategy strategy{setting, {}, {}};
    strategy.states.resize(setting.tuple_count());
    for (int x2 = 0; x2 < d; ++x2) {
        for (int x1 = 0; x1 < d; ++x1) {
            const Vector encoded = shift_powers[x1] * (clock_powers[x2] * psi);
            strategy.states[static_cast<std::size_t>(x1) + static_cast<std::size_t>(d) * x2] =
                encoded * encoded.adjoint();
        }
    }
    strategy.measurements.push_back(projective_povm(Matrix::Identity(d, d)));
    strategy.measurements.push_back(projective_povm(fourier.vectors));
    return strategy;
}

Strategy cube_strategy_322() {
    const Complex i(0.0, 1.0);
    Matrix sigma_x(2, 2), sigma_y(2, 2), sigma_z(2, 2);
    sigma_x << 0, 1, 1, 0;
    sigma_y << 0, -i, i, 0;
    sigma_z << 1, 0, 0, -1;
    const Matrix identity = Matrix::Identity(2, 2);
    const std::vector<Matrix> paulis{sigma_x, sigma_y, sigma_z};

    RacSetting setting(3, 2, 2);
    Strategy strategy{setting, {}, {}};

    for (const Matrix& pauli : paulis) {
        Povm povm;
        povm.effects.push_back(0.5 * (identity + pauli));
        povm.effects.push_back(0.5 * (identity - pauli));
        strategy.measurements.push_back(std::move(povm));
    }

    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    strategy.states.resize(setting.tuple_count());
    for (std::uint64_t rank = 0; rank < setting.tuple_count(); ++rank) {
        const InputTuple x = tuple_unrank(rank, setting);
        Matrix rho = identity;
        for (int axis = 0; axis < 3; ++axis) {
            const double component = (x[axis] == 0 ? 1.0 : -1.0) * inv_sqrt3;
            rho += component * paulis[axis];
        }
        strategy.states[rank] = 0.5 * rho;
    }
    return strategy;
}

MubFamily mub_bases(int d, int count) {
    if (!is_prime(d)) {
        std::ostringstream msg;
        msg << "mub_bases: unsupported dimension " << d << " (prime required)";
        throw ValidationError(msg.str());
    }
    if (count < 2 || count > d + 1) {
        std::ostringstream msg;
        msg << "mub_bases: count " << count << " outside [2, " << d + 1 << "]";
        throw ValidationError(msg.str());
    }

    MubFamily family{d, {}};
    family.bases.push_back({Matrix::Identity(d, d)});

    if (d == 2) {
        // X and XZ eigenbases, phases fixed so the first component is real
        // positive.
        const double s = 1.0 / std::sqrt(2.0);
        const Complex i(0.0, 1.0);
        Matrix x_basis(2, 2), xz_basis(2, 2);
        x_basis << s, s, s, -s;
        xz_basis << s, s, s * i, -s * i;
        family.bases.push_back({x_basis});
        if (count > 2) family.bases.push_back({xz_basis});
        family.bases.resize(count);
        return family;
    }

    // Odd prime: the eigenbasis of X Z^m has columns with entries
    // w^{a t^2 + j t}/sqrt(d) where 2a = m (mod d).
    const int inv_two = (d + 1) / 2;
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 1; k < count; ++k) {
        const int m = k - 1;
        const int quad = static_cast<int>((static_cast<long long>(m) * inv_two) % d);
        Matrix basis(d, d);
        for (int j = 0; j < d; ++j) {
            for (int t = 0; t < d; ++t) {
                const long long exponent =
                    (static_cast<long long>(quad) * t * t + static_cast<long long>(j) * t) % d;
                basis(t, j) = scale * root_of_unity(static_cast<int>(exponent), d);
            }
        }
        family.bases.push_back({basis});
    }
    return family;
}

Strategy mub_strategy(int n, int d) {
    if (n < 2) {
        throw ValidationError("mub_strategy: n must be >= 2");
    }
    const MubFamily family = mub_bases(d, n); // validates d prime, n <= d + 1

    Strategy strategy{RacSetting(n, d, d), {}, {}};
    strategy.measurements.reserve(n);
    for (const OrthonormalBasis& basis : family.bases) {
        strategy.measurements.push_back(projective_povm(basis.vectors));
    }
    strategy.states = optimal_states_for_measurements(strategy.measurements);
    return strategy;
}

std::vector<Matrix> optimal_states_for_measurements(const std::vector<Povm>& measurements) {
    const RacSetting setting = setting_from_measurements(measurements);
    const int dim = setting.D();

    std::vector<Matrix> states;
    states.reserve(setting.tuple_count());
    Matrix score(dim, dim);
    for (std::uint64_t rank = 0; rank < setting.tuple_count(); ++rank) {
        const InputTuple x = tuple_unrank(rank, setting);
        score.setZero();
        for (int y = 0; y < setting.n(); ++y) {
            score += measurements[y].effects[x[y]];
        }
        const linalg::EigDecomposition eig = linalg::hermitian_eig(score, 1e-9);
        const Vector top = eig.eigenvectors.col(0);
        states.push_back(top * top.adjoint());
    }
    return states;
}

TripleProducts mub_triple_products(const OrthonormalBasis& e,
                                   const OrthonormalBasis& f,
                                   const OrthonormalBasis& g) {
    const int dim = e.dim();
    if (f.dim() != dim || g.dim() != dim) {
        throw ValidationError("mub_triple_products: bases have mismatched dimensions");
    }
    const Matrix ef = e.vectors.adjoint() * f.vectors; // <e_j|f_k>
    const Matrix fg = f.vectors.adjoint() * g.vectors;
    const Matrix ge = g.vectors.adjoint() * e.vectors;

    TripleProducts out{dim, {}};
    out.values.reserve(static_cast<std::size_t>(dim) * dim * dim);
    for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) {
            for (int l = 0; l < dim; ++l) {
                // z + conj(z): real by construction.
                out.values.push_back(2.0 * (ef(j, k) * fg(k, l) * ge(l, j)).real());
            }
        }
    }
    return out;
}

} // namespace qrac::strategies
