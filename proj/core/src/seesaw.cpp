#include "qrac/seesaw.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "qrac/bounds.hpp"
#include "qrac/strategies.hpp"

namespace qrac::seesaw {

namespace {

using linalg::Complex;

Matrix hermitize(const Matrix& a) {
    return 0.5 * (a + a.adjoint());
}

double real_trace_product(const Matrix& a, const Matrix& b) {
    return (a.transpose().cwiseProduct(b)).sum().real();
}

double ensemble_objective(const std::vector<Matrix>& ensemble,
                          const std::vector<Matrix>& effects) {
    double objective = 0.0;
    for (std::size_t b = 0; b < ensemble.size(); ++b) {
        objective += real_trace_product(ensemble[b], effects[b]);
    }
    return objective;
}

/// SplitMix64 step; used to decorrelate per-restart seeds.
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::mt19937_64 restart_engine(std::uint64_t master_seed, int restart_index) {
    std::uint64_t state = master_seed ^ 0x6A09E667F3BCC908ULL;
    splitmix64(state);
    state ^= static_cast<std::uint64_t>(restart_index) * 0x9E3779B97F4A7C15ULL;
    return std::mt19937_64(splitmix64(state));
}

void validate_config(const SeesawConfig& config) {
    if (config.restarts < 1) throw ValidationError("seesaw: restarts must be >= 1");
    if (config.max_outer_iters < 1) throw ValidationError("seesaw: max_outer_iters must be >= 1");
    if (config.inner_max_iters < 1) throw ValidationError("seesaw: inner_max_iters must be >= 1");
    if (!(config.outer_tol > 0.0)) throw ValidationError("seesaw: outer_tol must be > 0");
    if (!(config.inner_tol > 0.0)) throw ValidationError("seesaw: inner_tol must be > 0");
    if (config.threads < 0) throw ValidationError("seesaw: threads must be >= 0");
}

/// Tidies a raw seesaw iterate into an exactly valid strategy: effects are
/// clipped to the PSD cone and renormalized to a complete POVM, states are
/// Hermitized with unit trace.
Strategy finalize_strategy(const RacSetting& setting, std::vector<Matrix> states,
                           std::vector<Povm> measurements) {
    const int dim = setting.D();
    const Matrix identity = Matrix::Identity(dim, dim);

    for (Matrix& rho : states) {
        rho = hermitize(rho);
        rho /= rho.trace().real();
    }

    for (Povm& povm : measurements) {
        for (Matrix& effect : povm.effects) {
            effect = hermitize(effect);
            Eigen::SelfAdjointEigenSolver<Matrix> solver(effect);
            if (solver.eigenvalues().minCoeff() < 0.0) {
                const Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(0.0);
                effect = hermitize(solver.eigenvectors() * clipped.asDiagonal() *
                                   solver.eigenvectors().adjoint());
            }
        }
        Matrix sum = Matrix::Zero(dim, dim);
        for (const Matrix& effect : povm.effects) sum += effect;
        const Matrix correction = linalg::inverse_sqrt_psd(hermitize(sum));
        Matrix completed = Matrix::Zero(dim, dim);
        for (Matrix& effect : povm.effects) {
            effect = hermitize(correction * effect * correction);
            completed += effect;
        }
        const Matrix deficit = identity - completed;
        for (Matrix& effect : povm.effects) {
            effect += deficit / setting.d();
        }
    }

    return Strategy{setting, std::move(states), std::move(measurements)};
}

} // namespace

DiscriminationResult discrimination_povm(const std::vector<Matrix>& ensemble,
                                         int max_iters, double tol,
                                         const std::vector<Matrix>* init) {
    if (ensemble.empty()) {
        throw ValidationError("discrimination_povm: empty ensemble");
    }
    const Eigen::Index dim = ensemble.front().rows();
    const std::size_t outcomes = ensemble.size();
    for (const Matrix& op : ensemble) {
        if (op.rows() != dim || op.cols() != dim) {
            throw ValidationError("discrimination_povm: ensemble dimension mismatch");
        }
    }
    if (init && init->size() != outcomes) {
        throw ValidationError("discrimination_povm: init POVM size mismatch");
    }

    const Matrix identity = Matrix::Identity(dim, dim);
    std::vector<Matrix> effects;
    if (init) {
        effects = *init;
    } else {
        effects.assign(outcomes, identity / static_cast<double>(outcomes));
    }

    DiscriminationResult best;
    best.effects = effects;
    best.objective = ensemble_objective(ensemble, effects);
    best.converged = false;

    double previous = best.objective;
    std::vector<Matrix> sandwiched(outcomes);
    for (int iter = 1; iter <= max_iters; ++iter) {
        Matrix lagrange = Matrix::Zero(dim, dim);
        for (std::size_t b = 0; b < outcomes; ++b) {
            sandwiched[b].noalias() = ensemble[b] * effects[b] * ensemble[b];
            lagrange += sandwiched[b];
        }
        const Matrix root = linalg::inverse_sqrt_psd(hermitize(lagrange));

        Matrix total = Matrix::Zero(dim, dim);
        for (std::size_t b = 0; b < outcomes; ++b) {
            effects[b] = hermitize(root * sandwiched[b] * root);
            total += effects[b];
        }
        // lambda may be singular; share the off-support deficit evenly to
        // restore completeness.
        const Matrix deficit = identity - total;
        for (std::size_t b = 0; b < outcomes; ++b) {
            effects[b] += deficit / static_cast<double>(outcomes);
        }

        const double objective = ensemble_objective(ensemble, effects);
        best.iterations = iter;
        if (objective > best.objective) {
            best.objective = objective;
            best.effects = effects;
        }
        if (std::abs(objective - previous) < tol) {
            best.converged = true;
            break;
        }
        previous = objective;
    }
    return best;
}

std::vector<Matrix> initial_states(const RacSetting& setting, std::mt19937_64& rng) {
    std::vector<Matrix> states;
    states.reserve(setting.tuple_count());
    for (std::uint64_t rank = 0; rank < setting.tuple_count(); ++rank) {
        states.push_back(linalg::haar_random_pure_state(setting.D(), rng));
    }
    return states;
}

std::vector<Matrix> state_step(const std::vector<Povm>& measurements) {
    return strategies::optimal_states_for_measurements(measurements);
}

MeasurementStepResult measurement_step(const std::vector<Matrix>& states,
                                       const RacSetting& setting,
                                       const std::vector<Povm>* previous,
                                       int max_iters, double tol) {
    if (states.size() != setting.tuple_count()) {
        throw ValidationError("measurement_step: state count does not match d^n");
    }
    if (previous && previous->size() != static_cast<std::size_t>(setting.n())) {
        throw ValidationError("measurement_step: previous measurement count mismatch");
    }
    const int dim = setting.D();

    MeasurementStepResult result;
    result.measurements.reserve(setting.n());
    for (int y = 0; y < setting.n(); ++y) {
        std::vector<Matrix> ensemble(setting.d(), Matrix::Zero(dim, dim));
        InputTuple symbols(setting.n(), 0);
        for (std::uint64_t rank = 0; rank < setting.tuple_count(); ++rank) {
            ensemble[symbols[y]] += states[rank];
            for (int i = 0; i < setting.n(); ++i) {
                if (++symbols[i] < setting.d()) break;
                symbols[i] = 0;
            }
        }
        for (Matrix& op : ensemble) op = hermitize(op);

        const std::vector<Matrix>* init = previous ? &(*previous)[y].effects : nullptr;
        DiscriminationResult solved = discrimination_povm(ensemble, max_iters, tol, init);
        result.truncated = result.truncated || !solved.converged;

        if (previous) {
            const double previous_objective =
                ensemble_objective(ensemble, (*previous)[y].effects);
            if (previous_objective >= solved.objective) {
                result.measurements.push_back((*previous)[y]);
                continue;
            }
        }
        result.measurements.push_back(Povm{std::move(solved.effects)});
    }
    return result;
}

namespace {

SeesawTrace run_restart(const RacSetting& setting, const SeesawConfig& config,
                        int restart_index, Strategy* out_strategy) {
    SeesawTrace trace;
    trace.restart_index = restart_index;

    std::mt19937_64 rng = restart_engine(config.master_seed, restart_index);
    std::vector<Matrix> states = initial_states(setting, rng);

    // Baseline: with the flat identity/d decoding every strategy scores 1/d.
    double outer_asp = 1.0 / setting.d();
    trace.asp_per_iteration.push_back(outer_asp);

    std::vector<Povm> measurements;
    double previous_outer = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < config.max_outer_iters; ++iter) {
        MeasurementStepResult step =
            measurement_step(states, setting, measurements.empty() ? nullptr : &measurements,
                             config.inner_max_iters, config.inner_tol);
        measurements = std::move(step.measurements);
        trace.measurement_step_truncated |= step.truncated;
        trace.asp_per_iteration.push_back(evaluate_asp(states, measurements, setting));

        states = state_step(measurements);
        outer_asp = evaluate_asp(states, measurements, setting);
        trace.asp_per_iteration.push_back(outer_asp);

        if (outer_asp - previous_outer < config.outer_tol) {
            trace.converged = true;
            break;
        }
        previous_outer = outer_asp;
    }

    *out_strategy = finalize_strategy(setting, std::move(states), std::move(measurements));
    trace.final_asp = evaluate_asp(*out_strategy);
    return trace;
}

} // namespace

SeesawResult seesaw_run(const RacSetting& setting, const SeesawConfig& config) {
    validate_config(config);

    const int workers = config.threads > 0
                            ? config.threads
                            : std::max(1u, std::thread::hardware_concurrency());

    std::vector<SeesawTrace> traces(config.restarts);
    std::vector<Strategy> strategies(config.restarts,
                                     Strategy{setting, {}, {}});

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int r = next.fetch_add(1); r < config.restarts; r = next.fetch_add(1)) {
            try {
                traces[r] = run_restart(setting, config, r, &strategies[r]);
            } catch (const std::exception& e) {
                traces[r] = SeesawTrace{};
                traces[r].restart_index = r;
                traces[r].failed = true;
                traces[r].error = e.what();
            }
        }
    };

    if (workers == 1 || config.restarts == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int spawn = std::min(workers, config.restarts);
        pool.reserve(spawn);
        for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    SeesawResult result{.best_asp = -1.0, .best_strategy = Strategy{setting, {}, {}}};
    std::map<long long, int> histogram;
    for (int r = 0; r < config.restarts; ++r) {
        if (traces[r].failed) continue;
        histogram[std::llround(traces[r].final_asp * 1e5)] += 1;
        if (traces[r].final_asp > result.best_asp) {
            result.best_asp = traces[r].final_asp;
            result.best_restart = r;
        }
    }
    if (result.best_restart < 0) {
        throw NumericError("seesaw_run: every restart failed");
    }
    result.best_strategy = std::move(strategies[result.best_restart]);
    result.traces = std::move(traces);
    result.local_optima_histogram.reserve(histogram.size());
    for (const auto& [key, count] : histogram) {
        result.local_optima_histogram.push_back({static_cast<double>(key) / 1e5, count});
    }

    const double upper = bounds::corollary_bound(setting);
    if (result.best_asp > upper + 1e-7) {
        std::ostringstream msg;
        msg << "seesaw_run: best ASP " << result.best_asp
            << " exceeds the analytic upper bound " << upper;
        throw NumericError(msg.str());
    }
    return result;
}

} // namespace qrac::seesaw
