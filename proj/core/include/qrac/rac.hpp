#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrac/errors.hpp"
#include "qrac/linalg.hpp"

namespace qrac {

using linalg::Matrix;

/// The random access code setting: n input symbols from an alphabet of size
/// d, encoded into one quantum system of dimension D. Validated on
/// construction; d^n must fit in the index range.
class RacSetting {
public:
    RacSetting(int n, int d, int big_d);

    int n() const { return n_; }
    int d() const { return d_; }
    int D() const { return dim_; }

    /// d^n, the number of input tuples.
    std::uint64_t tuple_count() const { return tuple_count_; }

    bool operator==(const RacSetting& other) const = default;

private:
    int n_;
    int d_;
    int dim_;
    std::uint64_t tuple_count_;
};

/// Input tuple (x_1, ..., x_n), each symbol in {0, ..., d-1}.
using InputTuple = std::vector<int>;

/// Little-endian mixed-radix rank: sum_i symbols[i] * d^i. Bijective onto
/// {0, ..., d^n - 1}.
std::uint64_t tuple_rank(const InputTuple& tuple, const RacSetting& setting);

/// Inverse of tuple_rank.
InputTuple tuple_unrank(std::uint64_t rank, const RacSetting& setting);

/// A d-outcome measurement: PSD effects summing to the identity.
struct Povm {
    std::vector<Matrix> effects;
};

/// Projective POVM from orthonormal basis columns: effect b = |v_b><v_b|.
Povm projective_povm(const Matrix& basis_columns);

/// Encoding states (indexed by tuple rank) plus one decoding POVM per input
/// position.
struct Strategy {
    RacSetting setting;
    std::vector<Matrix> states;
    std::vector<Povm> measurements;
};

struct ValidationIssue {
    std::string location;
    std::string message;
    double residual = 0.0;
};

/// Outcome of validate_strategy: the issue list is empty for a valid
/// strategy; the summary residuals are reported either way.
struct ValidationReport {
    std::vector<ValidationIssue> issues;

    double max_state_trace_residual = 0.0;
    double max_state_hermiticity = 0.0;
    double min_state_eigenvalue = 0.0;
    double max_effect_hermiticity = 0.0;
    double min_effect_eigenvalue = 0.0;
    double max_completeness_residual = 0.0;

    bool valid() const { return issues.empty(); }
};

/// Validation tolerances: PSD eigenvalue floor, state trace, POVM
/// completeness (Frobenius).
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kCompletenessTol = 1e-9;

/// Reports every violated strategy invariant with its location and numeric
/// residual. Never throws.
ValidationReport validate_strategy(const Strategy& strategy);

/// Average success probability of the strategy: the plain double sum
/// (1/(n d^n)) sum_x sum_y Tr(rho_x M_{x_y|y}). Throws ValidationError on
/// structural mismatch and NumericError if the imaginary residue of the sum
/// exceeds 1e-10.
double evaluate_asp(const Strategy& strategy);

/// ASP sum for a (states, measurements) pair without constructing a
/// Strategy. Same contract as evaluate_asp.
double evaluate_asp(const std::vector<Matrix>& states,
                    const std::vector<Povm>& measurements,
                    const RacSetting& setting);

/// Best achievable ASP for fixed measurements, with the optimal state for
/// each x substituted in closed form: (1/(n d^n)) sum_x lambda_max(sum_y
/// M_{x_y|y}).
double best_response_value(const std::vector<Povm>& measurements);

/// Infers the (n, d, D) setting from a measurement list, validating that all
/// POVMs have the same outcome count and dimension.
RacSetting setting_from_measurements(const std::vector<Povm>& measurements);

} // namespace qrac
