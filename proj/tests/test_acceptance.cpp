// Acceptance gate: exercises the full stack and prints one line per criterion.
// Exits nonzero if any criterion fails. All tolerances are pinned here.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qrac/bounds.hpp"
#include "qrac/linalg.hpp"
#include "qrac/rac.hpp"
#include "qrac/seesaw.hpp"
#include "qrac/strategies.hpp"

using json = nlohmann::json;
using qrac::Matrix;
using qrac::RacSetting;
using qrac::Strategy;
namespace bounds = qrac::bounds;
namespace linalg = qrac::linalg;
namespace seesaw = qrac::seesaw;
namespace strategies = qrac::strategies;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

CommandResult run_cli(const std::string& args) {
    const std::string command = std::string("'") + QRAC_CLI_PATH + "' " + args + " 2>&1";
    CommandResult result;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return result;
    std::array<char, 4096> buffer;
    while (std::size_t got = std::fread(buffer.data(), 1, buffer.size(), pipe)) {
        result.output.append(buffer.data(), got);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

bool g_all_pass = true;

void report(int id, bool pass, const std::string& description) {
    g_all_pass = g_all_pass && pass;
    std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << " — "
              << description << std::endl;
}

// 2x2 Hermitian eigenvalues in closed form, for the discrimination oracle.
double helstrom_value(const Matrix& r0, const Matrix& r1) {
    const Matrix m = r0 - r1;
    const double mid = 0.5 * (m(0, 0).real() + m(1, 1).real());
    const double rad =
        std::sqrt(0.25 * std::pow(m(0, 0).real() - m(1, 1).real(), 2) + std::norm(m(0, 1)));
    const double trace_norm = std::abs(mid + rad) + std::abs(mid - rad);
    return 0.5 * (r0.trace().real() + r1.trace().real()) + 0.5 * trace_norm;
}

// ---------------------------------------------------------------------------

void criterion_1_benchmark_table() {
    struct Expected {
        int d, big_d;
        double upper;
    };
    static constexpr Expected kExpected[] = {
        {2, 2, 0.78868}, {2, 3, 0.91068}, {2, 4, 1.00000}, {3, 2, 0.56904},
        {3, 3, 0.71823}, {3, 4, 0.77778}, {3, 5, 0.83024}, {4, 2, 0.45412},
        {4, 3, 0.58333}, {4, 4, 0.66667}, {4, 5, 0.70601},
    };
    constexpr double kTol = 5e-6; // agreement after rounding to 5 decimals
    constexpr double kBudgetSeconds = 1.0;

    const double start = now_seconds();
    const CommandResult run = run_cli("table2 --restarts 0 --format csv");
    const double elapsed = now_seconds() - start;

    bool pass = run.exit_code == 0 && elapsed < kBudgetSeconds;
    std::istringstream stream(run.output);
    std::string line;
    std::getline(stream, line); // header
    int row_count = 0;
    while (std::getline(stream, line) && row_count < 11) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream splitter(line);
        while (std::getline(splitter, field, ',')) fields.push_back(field);
        pass = pass && fields.size() >= 5 &&
               std::stoi(fields[1]) == kExpected[row_count].d &&
               std::stoi(fields[2]) == kExpected[row_count].big_d &&
               std::abs(std::stod(fields[4]) - kExpected[row_count].upper) < kTol;
        ++row_count;
    }
    pass = pass && row_count == 11;
    report(1, pass, "benchmark table upper bounds match all 11 reference values "
                    "to 5 decimals in under 1 s");
}

void criterion_2_two_symbol_closed_form() {
    constexpr double kTol = 1e-12;
    bool pass = true;
    for (int d = 2; d <= 8; ++d) {
        const double expected = 0.5 * (1.0 + 1.0 / std::sqrt(d));
        pass = pass &&
               std::abs(bounds::corollary_bound(RacSetting(2, d, d)) - expected) <= kTol;
    }
    const RacSetting s322(3, 2, 2);
    const double expected322 = 0.5 * (1.0 + 1.0 / std::sqrt(3.0));
    pass = pass && std::abs(bounds::corollary_bound(s322) - expected322) <= kTol;
    pass = pass &&
           std::abs(bounds::corollary_bound(s322) - bounds::result1_bound(s322)) <= kTol;
    report(2, pass, "closed-form bound collapses to (1 + 1/sqrt(d))/2 at n = 2 "
                    "(d = 2..8) and to the three-bit qubit value");
}

void criterion_3_optimal_strategies() {
    constexpr double kExactTol = 1e-10;
    constexpr double kMubTol = 5e-4;
    constexpr double kBudgetSeconds = 5.0;

    const double start = now_seconds();
    bool pass = true;
    for (int d = 2; d <= 8; ++d) {
        const double expected = 0.5 * (1.0 + 1.0 / std::sqrt(d));
        pass = pass &&
               std::abs(qrac::evaluate_asp(strategies::n2_optimal_strategy(d)) - expected) <
                   kExactTol;
    }
    pass = pass && std::abs(qrac::evaluate_asp(strategies::cube_strategy_322()) -
                            0.7886751346) < kExactTol;
    pass = pass &&
           std::abs(qrac::evaluate_asp(strategies::mub_strategy(3, 3)) - 0.6971) < kMubTol;
    pass = pass && (now_seconds() - start) < kBudgetSeconds;
    report(3, pass, "explicit strategies reach their published scores "
                    "(n = 2 exact, cube exact, qutrit MUB to 5e-4) in under 5 s");
}

void criterion_4_operator_norm_inequality() {
    constexpr double kViolationTol = 1e-10;
    constexpr double kBudgetSeconds = 30.0;
    constexpr int kTrials = 10000;

    const double start = now_seconds();
    std::mt19937_64 rng(20260814);
    int violations = 0;
    for (int t = 0; t < kTrials; ++t) {
        const int dim = 2 + t % 7; // cycles dimensions 2..8
        Matrix a(dim, dim);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) a(r, c) = linalg::complex_standard_normal(rng);
        }
        a = 0.5 * (a + a.adjoint()).eval();
        a -= (a.trace().real() / dim) * Matrix::Identity(dim, dim);
        const linalg::Lemma1Check check = linalg::lemma1_check(a);
        if (check.lhs > check.rhs + kViolationTol) ++violations;
    }

    // Rank-two trace-zero operators saturate the inequality exactly.
    double worst_saturation = 0.0;
    std::uniform_real_distribution<double> amp(0.5, 2.0);
    for (int t = 0; t < 200; ++t) {
        const int dim = 3 + t % 6;
        Eigen::MatrixXcd g(dim, 2);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < 2; ++c) g(r, c) = linalg::complex_standard_normal(rng);
        }
        const Matrix q = Eigen::HouseholderQR<Eigen::MatrixXcd>(g)
                             .householderQ() *
                         Eigen::MatrixXcd::Identity(dim, 2);
        const double a_scale = amp(rng);
        const Matrix rank2 = a_scale * (q.col(0) * q.col(0).adjoint() -
                                        q.col(1) * q.col(1).adjoint());
        const linalg::Lemma1Check check = linalg::lemma1_check(rank2);
        worst_saturation = std::max(worst_saturation, std::abs(check.lhs - check.rhs));
    }

    const bool pass = violations == 0 && worst_saturation < kViolationTol &&
                      (now_seconds() - start) < kBudgetSeconds;
    report(4, pass, "operator-norm inequality holds on 10000 random trace-zero "
                    "matrices (dims 2-8) and is saturated at rank two, in under 30 s");
}

std::optional<seesaw::SeesawResult> g_result_222;
std::optional<seesaw::SeesawResult> g_result_322;

void criterion_5_seesaw_recovers_optima() {
    constexpr double kTol222 = 1e-6;
    constexpr double kTol322 = 1e-5;
    constexpr double kBudgetSeconds = 60.0;

    const double start = now_seconds();
    seesaw::SeesawConfig config;
    config.restarts = 20;
    config.master_seed = 1;
    g_result_222 = seesaw::seesaw_run(RacSetting(2, 2, 2), config);
    g_result_322 = seesaw::seesaw_run(RacSetting(3, 2, 2), config);
    const double elapsed = now_seconds() - start;

    const bool pass =
        std::abs(g_result_222->best_asp - 0.8535533906) < kTol222 &&
        std::abs(g_result_322->best_asp - 0.7886751346) < kTol322 &&
        elapsed < kBudgetSeconds;
    report(5, pass, "20-restart search with seed 1 recovers both proven optima "
                    "(qubit pair to 1e-6, qubit triple to 1e-5) in under 1 min");
}

void criterion_6_table_lower_bounds() {
    struct Target {
        int d, big_d;
        double at_least;
    };
    // Starred table rows converge stochastically, so those floors sit 5e-3
    // below the published values; the unstarred floors are tighter.
    static constexpr Target kTargets[] = {
        {3, 3, 0.6961},
        {4, 4, 0.643},
        {2, 3, 0.80294},
        {4, 5, 0.65831},
    };
    seesaw::SeesawConfig config;
    config.restarts = 100;
    config.master_seed = 1;

    bool pass = true;
    std::string detail;
    for (const Target& target : kTargets) {
        const auto result = seesaw::seesaw_run(RacSetting(3, target.d, target.big_d), config);
        pass = pass && result.best_asp >= target.at_least;
        detail += " (" + std::to_string(target.d) + "," + std::to_string(target.big_d) +
                  ")=" + std::to_string(result.best_asp);
    }
    report(6, pass, "100-restart searches clear the published n = 3 floors:" + detail);
}

void criterion_7_measurement_step_oracles() {
    constexpr double kHelstromTol = 1e-6;
    constexpr double kDiagonalTol = 1e-9;
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    double worst_binary = 0.0;
    const RacSetting qubit_pair(1, 2, 2);
    for (int t = 0; t < 100; ++t) {
        Matrix rho0 = linalg::haar_random_pure_state(2, rng);
        Matrix rho1 = linalg::haar_random_pure_state(2, rng);
        if (t % 2 == 0) {
            const double w = unif(rng);
            rho0 = w * rho0 + (1.0 - w) * linalg::haar_random_pure_state(2, rng);
        }
        const std::vector<Matrix> states = {rho0, rho1};
        const auto step = seesaw::measurement_step(states, qubit_pair);
        const double asp = qrac::evaluate_asp(states, step.measurements, qubit_pair);
        worst_binary =
            std::max(worst_binary, std::abs(asp - helstrom_value(0.5 * rho0, 0.5 * rho1)));
    }

    double worst_diagonal = 0.0;
    for (int t = 0; t < 50; ++t) {
        const int d = 2 + t % 3;
        const int dim = 2 + t % 4;
        const RacSetting setting(1, d, dim);
        std::vector<Matrix> states;
        for (int x = 0; x < d; ++x) {
            Matrix rho = Matrix::Zero(dim, dim);
            double trace = 0.0;
            for (int i = 0; i < dim; ++i) {
                rho(i, i) = unif(rng) + 1e-3;
                trace += rho(i, i).real();
            }
            states.push_back(rho / trace);
        }
        const auto step = seesaw::measurement_step(states, setting);
        const double asp = qrac::evaluate_asp(states, step.measurements, setting);
        double brute = 0.0;
        for (int i = 0; i < dim; ++i) {
            double best = 0.0;
            for (int x = 0; x < d; ++x) best = std::max(best, states[x](i, i).real());
            brute += best / d;
        }
        worst_diagonal = std::max(worst_diagonal, std::abs(asp - brute));
    }

    const bool pass = worst_binary < kHelstromTol && worst_diagonal < kDiagonalTol;
    report(7, pass, "measurement updates match the closed-form binary discrimination "
                    "value to 1e-6 and diagonal brute force to 1e-9");
}

void criterion_8_traces_and_determinism() {
    constexpr double kMonotoneTol = 1e-10;
    constexpr double kUpperSlack = 1e-7;

    bool pass = g_result_222.has_value() && g_result_322.has_value();
    if (pass) {
        const struct {
            const seesaw::SeesawResult* result;
            RacSetting setting;
        } runs[] = {{&*g_result_222, RacSetting(2, 2, 2)},
                    {&*g_result_322, RacSetting(3, 2, 2)}};
        for (const auto& run : runs) {
            const double upper = bounds::bound_report(run.setting).best_upper;
            for (const auto& trace : run.result->traces) {
                if (trace.failed) continue;
                pass = pass && trace.final_asp <= upper + kUpperSlack;
                for (std::size_t i = 1; i < trace.asp_per_iteration.size(); ++i) {
                    pass = pass && trace.asp_per_iteration[i] >=
                                       trace.asp_per_iteration[i - 1] - kMonotoneTol;
                }
            }
        }
    }

    const std::string args =
        "seesaw --n 2 --d 3 --D 3 --restarts 5 --seed 17 --format json";
    const CommandResult first = run_cli(args);
    const CommandResult second = run_cli(args);
    pass = pass && first.exit_code == 0 && first.output == second.output &&
           !first.output.empty();

    report(8, pass, "progress traces are monotone within 1e-10, capped by the upper "
                    "bound, and repeated seeded runs emit byte-identical JSON");
}

void criterion_9_branch_ordering() {
    constexpr double kEqualityTol = 1e-12;
    bool pass = true;
    for (int n = 2; n <= 8; ++n) {
        for (int d = 2; d <= 8; ++d) {
            const RacSetting setting(n, d, d);
            const double r1 = bounds::result1_bound(setting);
            const double r2 = bounds::result2_bound(setting);
            const double minimum = bounds::corollary_bound(setting);
            pass = pass && minimum == std::min(r1, r2);
            if (n > d) pass = pass && r1 <= r2;
            if (n < d) pass = pass && r2 <= r1;
            if (n == d) pass = pass && std::abs(r1 - r2) <= kEqualityTol;
        }
    }
    report(9, pass, "at D = d the two bound branches order by n vs d over the "
                    "whole 2..8 grid, meeting at n = d");
}

void criterion_10_reference_value() {
    char text[32];
    std::snprintf(text, sizeof text, "%.4f",
                  bounds::corollary_bound(RacSetting(3, 3, 3)));
    const bool pass = std::string(text) == "0.7182";
    report(10, pass, "the qutrit triple bound rounds to 0.7182 at 4 decimals");
}

} // namespace

int main() {
    criterion_1_benchmark_table();
    criterion_2_two_symbol_closed_form();
    criterion_3_optimal_strategies();
    criterion_4_operator_norm_inequality();
    criterion_5_seesaw_recovers_optima();
    criterion_6_table_lower_bounds();
    criterion_7_measurement_step_oracles();
    criterion_8_traces_and_determinism();
    criterion_9_branch_ordering();
    criterion_10_reference_value();
    std::cout << (g_all_pass ? "all criteria passed" : "ACCEPTANCE FAILURE") << std::endl;
    return g_all_pass ? 0 : 1;
}
