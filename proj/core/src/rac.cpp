#include "qrac/rac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qrac {

namespace {

using linalg::Complex;

/// Tr(A B) without forming the product.
Complex trace_product(const Matrix& a, const Matrix& b) {
    return (a.transpose().cwiseProduct(b)).sum();
}

/// Advances a tuple in little-endian odometer order. symbols[0] is the
/// fastest digit, matching tuple_rank.
void advance_tuple(InputTuple& symbols, int d) {
    for (auto& s : symbols) {
        if (++s < d) return;
        s = 0;
    }
}

std::string indexed(const char* prefix, std::size_t i) {
    std::ostringstream out;
    out << prefix << " " << i;
    return out.str();
}

} // namespace

RacSetting::RacSetting(int n, int d, int big_d) : n_(n), d_(d), dim_(big_d) {
    if (n < 1) throw ValidationError("RacSetting: n must be >= 1");
    if (d < 2) throw ValidationError("RacSetting: d must be >= 2");
    if (big_d < 2) throw ValidationError("RacSetting: D must be >= 2");
    std::uint64_t count = 1;
    const auto base = static_cast<std::uint64_t>(d);
    for (int i = 0; i < n; ++i) {
        if (count > std::numeric_limits<std::uint64_t>::max() / base) {
            throw ValidationError("RacSetting: d^n exceeds the index range");
        }
        count *= base;
    }
    tuple_count_ = count;
}

std::uint64_t tuple_rank(const InputTuple& tuple, const RacSetting& setting) {
    if (tuple.size() != static_cast<std::size_t>(setting.n())) {
        std::ostringstream msg;
        msg << "tuple_rank: expected " << setting.n() << " symbols, got " << tuple.size();
        throw ValidationError(msg.str());
    }
    std::uint64_t rank = 0;
    std::uint64_t weight = 1;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (tuple[i] < 0 || tuple[i] >= setting.d()) {
            std::ostringstream msg;
            msg << "tuple_rank: symbol " << i << " = " << tuple[i]
                << " outside {0, ..., " << setting.d() - 1 << "}";
            throw ValidationError(msg.str());
        }
        rank += weight * static_cast<std::uint64_t>(tuple[i]);
        weight *= static_cast<std::uint64_t>(setting.d());
    }
    return rank;
}

InputTuple tuple_unrank(std::uint64_t rank, const RacSetting& setting) {
    if (rank >= setting.tuple_count()) {
        std::ostringstream msg;
        msg << "tuple_unrank: rank " << rank << " out of range (d^n = "
            << setting.tuple_count() << ")";
        throw ValidationError(msg.str());
    }
    InputTuple symbols(setting.n());
    const auto base = static_cast<std::uint64_t>(setting.d());
    for (int i = 0; i < setting.n(); ++i) {
        symbols[i] = static_cast<int>(rank % base);
        rank /= base;
    }
    return symbols;
}

Povm projective_povm(const Matrix& basis_columns) {
    if (basis_columns.rows() != basis_columns.cols() || basis_columns.rows() == 0) {
        throw ValidationError("projective_povm: basis must be a square column matrix");
    }
    Povm povm;
    povm.effects.reserve(basis_columns.cols());
    for (Eigen::Index b = 0; b < basis_columns.cols(); ++b) {
        const auto v = basis_columns.col(b);
        povm.effects.push_back(v * v.adjoint());
    }
    return povm;
}

ValidationReport validate_strategy(const Strategy& strategy) {
    ValidationReport report;
    const RacSetting& setting = strategy.setting;
    const int dim = setting.D();

    if (strategy.states.size() != setting.tuple_count()) {
        std::ostringstream msg;
        msg << "expected d^n = " << setting.tuple_count() << " states, found "
            << strategy.states.size();
        report.issues.push_back({"states", msg.str(),
                                 static_cast<double>(strategy.states.size())});
    }
    if (strategy.measurements.size() != static_cast<std::size_t>(setting.n())) {
        std::ostringstream msg;
        msg << "expected n = " << setting.n() << " measurements, found "
            << strategy.measurements.size();
        report.issues.push_back({"measurements", msg.str(),
                                 static_cast<double>(strategy.measurements.size())});
    }

    for (std::size_t k = 0; k < strategy.states.size(); ++k) {
        const Matrix& rho = strategy.states[k];
        const std::string where = indexed("state", k);
        if (rho.rows() != dim || rho.cols() != dim) {
            std::ostringstream msg;
            msg << "dimension " << rho.rows() << "x" << rho.cols()
                << ", expected " << dim << "x" << dim;
            report.issues.push_back({where, msg.str(), 0.0});
            continue;
        }
        if (!rho.allFinite()) {
            report.issues.push_back({where, "non-finite entries", 0.0});
            continue;
        }
        const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        report.max_state_hermiticity = std::max(report.max_state_hermiticity, herm);
        if (herm > kPsdTol) {
            report.issues.push_back({where, "not Hermitian", herm});
            continue;
        }
        const double trace_residual = std::abs(rho.trace().real() - 1.0);
        report.max_state_trace_residual =
            std::max(report.max_state_trace_residual, trace_residual);
        if (trace_residual > kTraceTol) {
            report.issues.push_back({where, "trace deviates from 1", trace_residual});
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (rho + rho.adjoint()),
                                                     Eigen::EigenvaluesOnly);
        const double min_eig = solver.eigenvalues().minCoeff();
        report.min_state_eigenvalue = std::min(report.min_state_eigenvalue, min_eig);
        if (min_eig < -kPsdTol) {
            report.issues.push_back({where, "not PSD", min_eig});
        }
    }

    for (std::size_t y = 0; y < strategy.measurements.size(); ++y) {
        const Povm& povm = strategy.measurements[y];
        const std::string where = indexed("measurement", y);
        if (povm.effects.size() != static_cast<std::size_t>(setting.d())) {
            std::ostringstream msg;
            msg << "expected " << setting.d() << " effects, found " << povm.effects.size();
            report.issues.push_back({where, msg.str(),
                                     static_cast<double>(povm.effects.size())});
            continue;
        }
        Matrix sum = Matrix::Zero(dim, dim);
        bool structurally_ok = true;
        for (std::size_t b = 0; b < povm.effects.size(); ++b) {
            const Matrix& effect = povm.effects[b];
            const std::string effect_where = where + ", " + indexed("effect", b);
            if (effect.rows() != dim || effect.cols() != dim) {
                std::ostringstream msg;
                msg << "dimension " << effect.rows() << "x" << effect.cols()
                    << ", expected " << dim << "x" << dim;
                report.issues.push_back({effect_where, msg.str(), 0.0});
                structurally_ok = false;
                continue;
            }
            if (!effect.allFinite()) {
                report.issues.push_back({effect_where, "non-finite entries", 0.0});
                structurally_ok = false;
                continue;
            }
            const double herm = (effect - effect.adjoint()).cwiseAbs().maxCoeff();
            report.max_effect_hermiticity = std::max(report.max_effect_hermiticity, herm);
            if (herm > kPsdTol) {
                report.issues.push_back({effect_where, "not Hermitian", herm});
            }
            Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (effect + effect.adjoint()),
                                                         Eigen::EigenvaluesOnly);
            const double min_eig = solver.eigenvalues().minCoeff();
            report.min_effect_eigenvalue = std::min(report.min_effect_eigenvalue, min_eig);
            if (min_eig < -kPsdTol) {
                report.issues.push_back({effect_where, "not PSD", min_eig});
            }
            sum += effect;
        }
        if (structurally_ok) {
            const double completeness = (sum - Matrix::Identity(dim, dim)).norm();
            report.max_completeness_residual =
                std::max(report.max_completeness_residual, completeness);
            if (completeness > kCompletenessTol) {
                report.issues.push_back({where, "effects do not sum to identity", completeness});
            }
        }
    }

    return report;
}

double evaluate_asp(const std::vector<Matrix>& states,
                    const std::vector<Povm>& measurements,
                    const RacSetting& setting) {
    if (states.size() != setting.tuple_count()) {
        throw ValidationError("evaluate_asp: state count does not match d^n");
    }
    if (measurements.size() != static_cast<std::size_t>(setting.n())) {
        throw ValidationError("evaluate_asp: measurement count does not match n");
    }
    const int dim = setting.D();
    for (const Povm& povm : measurements) {
        if (povm.effects.size() != static_cast<std::size_t>(setting.d())) {
            throw ValidationError("evaluate_asp: POVM outcome count does not match d");
        }
        for (const Matrix& effect : povm.effects) {
            if (effect.rows() != dim || effect.cols() != dim) {
                throw ValidationError("evaluate_asp: effect dimension mismatch");
            }
        }
    }

    Complex sum = 0.0;
    InputTuple symbols(setting.n(), 0);
    for (std::uint64_t rank = 0; rank < setting.tuple_count(); ++rank) {
        const Matrix& rho = states[rank];
        if (rho.rows() != dim || rho.cols() != dim) {
            throw ValidationError("evaluate_asp: state dimension mismatch at rank " +
                                  std::to_string(rank));
        }
        for (int y = 0; y < setting.n(); ++y) {
            sum += trace_product(rho, measurements[y].effects[symbols[y]]);
        }
        advance_tuple(symbols, setting.d());
    }

    const double scale = 1.0 / (static_cast<double>(setting.n()) *
                                static_cast<double>(setting.tuple_count()));
    const Complex asp = sum * scale;
    if (std::abs(asp.imag()) > 1e-10) {
        std::ostringstream msg;
        msg << "evaluate_asp: imaginary residue " << asp.imag();
        throw NumericError(msg.str());
    }
    double value = asp.real();
    // Round-off slack only; larger excursions are reported as-is so a bad
    // strategy shows its true score next to the validation report.
    if (value > 1.0 && value <= 1.0 + 1e-9) value = 1.0;
    if (value < 0.0 && value >= -1e-9) value = 0.0;
    return value;
}

double evaluate_asp(const Strategy& strategy) {
    return evaluate_asp(strategy.states, strategy.measurements, strategy.setting);
}

RacSetting setting_from_measurements(const std::vector<Povm>& measurements) {
    if (measurements.empty()) {
        throw ValidationError("setting_from_measurements: empty measurement list");
    }
    const std::size_t d = measurements.front().effects.size();
    if (d < 2) {
        throw ValidationError("setting_from_measurements: POVMs need at least 2 outcomes");
    }
    const Eigen::Index dim = measurements.front().effects.front().rows();
    for (const Povm& povm : measurements) {
        if (povm.effects.size() != d) {
            throw ValidationError("setting_from_measurements: inconsistent outcome counts");
        }
        for (const Matrix& effect : povm.effects) {
            if (effect.rows() != dim || effect.cols() != dim) {
                throw ValidationError("setting_from_measurements: inconsistent dimensions");
            }
        }
    }
    return RacSetting(static_cast<int>(measurements.size()), static_cast<int>(d),
                      static_cast<int>(dim));
}

double best_response_value(const std::vector<Povm>& measurements) {
    const RacSetting setting = setting_from_measurements(measurements);
    double sum = 0.0;
    InputTuple symbols(setting.n(), 0);
    const int dim = setting.D();
    Matrix score(dim, dim);
    for (std::uint64_t rank = 0; rank < setting.tuple_count(); ++rank) {
        score.setZero();
        for (int y = 0; y < setting.n(); ++y) {
            score += measurements[y].effects[symbols[y]];
        }
        sum += linalg::max_eigenvalue(score, 1e-9);
        advance_tuple(symbols, setting.d());
    }
    return sum / (static_cast<double>(setting.n()) *
                  static_cast<double>(setting.tuple_count()));
}

} // namespace qrac
