#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrac/bounds.hpp"
#include "qrac/linalg.hpp"
#include "qrac/rac.hpp"
#include "qrac/seesaw.hpp"
#include "qrac/strategy_io.hpp"

namespace {

using nlohmann::json;
using namespace qrac;

std::string fixed(double v, int prec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

// CSV cells carry >= 10 significant digits.
std::string sig(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void emit_json(const json& doc) { std::cout << doc.dump(2) << '\n'; }

json bound_json(const bounds::BoundReport& rep) {
    json doc;
    doc["n"] = rep.setting.n();
    doc["d"] = rep.setting.d();
    doc["D"] = rep.setting.D();
    doc["result1"] = rep.result1;
    doc["result2"] = rep.result2;
    doc["corollary"] = rep.corollary;
    doc["vicente"] = rep.vicente;
    doc["best_upper"] = rep.best_upper;
    doc["exact"] = rep.exact ? json(*rep.exact) : json(nullptr);
    return doc;
}

// ---------------------------------------------------------------- bound ----

int cmd_bound(int n, int d, int big_d, const std::string& format) {
    const bounds::BoundReport rep = bounds::bound_report(RacSetting(n, d, big_d));
    if (format == "json") {
        emit_json(bound_json(rep));
    } else if (format == "csv") {
        std::cout << "n,d,D,result1,result2,corollary,vicente,best_upper,exact\n"
                  << n << ',' << d << ',' << big_d << ',' << sig(rep.result1) << ','
                  << sig(rep.result2) << ',' << sig(rep.corollary) << ','
                  << sig(rep.vicente) << ',' << sig(rep.best_upper) << ','
                  << (rep.exact ? sig(*rep.exact) : "") << '\n';
    } else {
        std::cout << "setting     n=" << n << " d=" << d << " D=" << big_d << '\n'
                  << "result1     " << fixed(rep.result1, 9) << '\n'
                  << "result2     " << fixed(rep.result2, 9) << '\n'
                  << "corollary   " << fixed(rep.corollary, 9) << '\n'
                  << "vicente     " << fixed(rep.vicente, 9) << '\n'
                  << "best_upper  " << fixed(rep.best_upper, 9) << '\n';
        if (rep.exact) std::cout << "exact       " << fixed(*rep.exact, 9) << '\n';
    }
    return 0;
}

// --------------------------------------------------------------- seesaw ----

struct SeesawSummary {
    int converged = 0;
    int truncated = 0;
    int failed = 0;
};

SeesawSummary summarize(const seesaw::SeesawResult& result) {
    SeesawSummary s;
    for (const seesaw::SeesawTrace& t : result.traces) {
        if (t.failed) {
            ++s.failed;
            continue;
        }
        if (t.converged) ++s.converged;
        if (t.measurement_step_truncated) ++s.truncated;
    }
    return s;
}

int cmd_seesaw(int n, int d, int big_d, int restarts, std::uint64_t seed, double tol,
               int threads, const std::string& out_file, const std::string& format) {
    const RacSetting setting(n, d, big_d);
    seesaw::SeesawConfig config;
    config.restarts = restarts;
    config.master_seed = seed;
    config.outer_tol = tol;
    config.threads = threads;

    const seesaw::SeesawResult result = seesaw::seesaw_run(setting, config);
    const bounds::BoundReport rep = bounds::bound_report(setting);
    const double gap = rep.best_upper - result.best_asp;
    const SeesawSummary stats = summarize(result);

    if (!out_file.empty()) io::save_strategy(result.best_strategy, out_file);

    if (format == "json") {
        json doc;
        doc["n"] = n;
        doc["d"] = d;
        doc["D"] = big_d;
        doc["restarts"] = restarts;
        doc["seed"] = seed;
        doc["best_asp"] = result.best_asp;
        doc["best_restart"] = result.best_restart;
        doc["best_upper"] = rep.best_upper;
        doc["gap"] = gap;
        doc["converged"] = stats.converged;
        doc["truncated"] = stats.truncated;
        doc["failed"] = stats.failed;
        json bins = json::array();
        for (const seesaw::HistogramBin& bin : result.local_optima_histogram) {
            bins.push_back({{"asp", bin.value}, {"count", bin.count}});
        }
        doc["histogram"] = std::move(bins);
        emit_json(doc);
    } else if (format == "csv") {
        std::cout << "n,d,D,restarts,seed,best_asp,best_restart,best_upper,gap\n"
                  << n << ',' << d << ',' << big_d << ',' << restarts << ',' << seed
                  << ',' << sig(result.best_asp) << ',' << result.best_restart << ','
                  << sig(rep.best_upper) << ',' << sig(gap) << '\n';
    } else {
        std::cout << "setting       n=" << n << " d=" << d << " D=" << big_d << '\n'
                  << "restarts      " << restarts << " (" << stats.converged
                  << " converged, " << stats.truncated << " truncated, " << stats.failed
                  << " failed)\n"
                  << "best_asp      " << fixed(result.best_asp, 9) << "  (restart "
                  << result.best_restart << ")\n"
                  << "best_upper    " << fixed(rep.best_upper, 9) << '\n'
                  << "gap           " << fixed(gap, 9) << '\n'
                  << "local optima:\n";
        for (const seesaw::HistogramBin& bin : result.local_optima_histogram) {
            std::cout << "  " << fixed(bin.value, 5) << "  x" << bin.count << '\n';
        }
        if (!out_file.empty()) std::cout << "strategy written to " << out_file << '\n';
    }
    return 0;
}

// ----------------------------------------------------------------- eval ----

int cmd_eval(const std::string& file, const std::string& format) {
    const Strategy strategy = io::load_strategy(file);
    const ValidationReport report = validate_strategy(strategy);
    const double asp = evaluate_asp(strategy);
    const RacSetting& s = strategy.setting;

    if (format == "json") {
        json doc;
        doc["file"] = file;
        doc["n"] = s.n();
        doc["d"] = s.d();
        doc["D"] = s.D();
        doc["asp"] = asp;
        doc["valid"] = report.valid();
        doc["residuals"] = {
            {"max_state_trace_residual", report.max_state_trace_residual},
            {"max_state_hermiticity", report.max_state_hermiticity},
            {"min_state_eigenvalue", report.min_state_eigenvalue},
            {"max_effect_hermiticity", report.max_effect_hermiticity},
            {"min_effect_eigenvalue", report.min_effect_eigenvalue},
            {"max_completeness_residual", report.max_completeness_residual},
        };
        json issues = json::array();
        for (const ValidationIssue& issue : report.issues) {
            issues.push_back({{"location", issue.location},
                              {"message", issue.message},
                              {"residual", issue.residual}});
        }
        doc["issues"] = std::move(issues);
        emit_json(doc);
    } else if (format == "csv") {
        std::cout << "n,d,D,asp,valid,max_state_trace_residual,max_state_hermiticity,"
                     "min_state_eigenvalue,max_effect_hermiticity,min_effect_eigenvalue,"
                     "max_completeness_residual\n"
                  << s.n() << ',' << s.d() << ',' << s.D() << ',' << sig(asp) << ','
                  << (report.valid() ? 1 : 0) << ',' << sig(report.max_state_trace_residual)
                  << ',' << sig(report.max_state_hermiticity) << ','
                  << sig(report.min_state_eigenvalue) << ','
                  << sig(report.max_effect_hermiticity) << ','
                  << sig(report.min_effect_eigenvalue) << ','
                  << sig(report.max_completeness_residual) << '\n';
    } else {
        std::cout << "file                       " << file << '\n'
                  << "setting                    n=" << s.n() << " d=" << s.d()
                  << " D=" << s.D() << '\n'
                  << "asp                        " << fixed(asp, 12) << '\n'
                  << "valid                      " << (report.valid() ? "yes" : "no") << '\n'
                  << "max_state_trace_residual   " << sig(report.max_state_trace_residual) << '\n'
                  << "max_state_hermiticity      " << sig(report.max_state_hermiticity) << '\n'
                  << "min_state_eigenvalue       " << sig(report.min_state_eigenvalue) << '\n'
                  << "max_effect_hermiticity     " << sig(report.max_effect_hermiticity) << '\n'
                  << "min_effect_eigenvalue      " << sig(report.min_effect_eigenvalue) << '\n'
                  << "max_completeness_residual  " << sig(report.max_completeness_residual) << '\n';
        for (const ValidationIssue& issue : report.issues) {
            std::cout << "issue: " << issue.location << ": " << issue.message
                      << " (residual " << sig(issue.residual) << ")\n";
        }
    }
    return report.valid() ? 0 : 1;
}

// --------------------------------------------------------------- table2 ----

// Reference seesaw maxima shipped for regression flagging of the n=3 table;
// the starred rows are known to land in other local minima frequently, so
// their reference value is itself a lucky draw.
struct Table2Row {
    int d;
    int big_d;
    double reference_lower;
    bool stochastic;
};

constexpr Table2Row kTable2Rows[] = {
    {2, 2, 0.78868, false}, {2, 3, 0.80794, true},  {2, 4, 0.90825, false},
    {3, 2, 0.56066, false}, {3, 3, 0.69715, false}, {3, 4, 0.72567, false},
    {3, 5, 0.76241, false}, {4, 2, 0.43697, false}, {4, 3, 0.47525, false},
    {4, 4, 0.64434, false}, {4, 5, 0.66331, true},
};

constexpr double kUnderConvergedTol = 1e-3;

int cmd_table2(int restarts, std::uint64_t seed, int threads, const std::string& format) {
    struct Row {
        Table2Row def;
        double upper = 0.0;
        std::optional<double> lower;
        bool under_converged = false;
    };
    std::vector<Row> rows;
    rows.reserve(std::size(kTable2Rows));
    for (const Table2Row& def : kTable2Rows) {
        Row row{def};
        const RacSetting setting(3, def.d, def.big_d);
        row.upper = bounds::corollary_bound(setting);
        if (restarts > 0) {
            seesaw::SeesawConfig config;
            config.restarts = restarts;
            config.master_seed = seed;
            config.threads = threads;
            row.lower = seesaw::seesaw_run(setting, config).best_asp;
            row.under_converged = *row.lower < def.reference_lower - kUnderConvergedTol;
        }
        rows.push_back(row);
    }

    if (format == "json") {
        json doc;
        doc["n"] = 3;
        doc["restarts"] = restarts;
        doc["seed"] = seed;
        json out_rows = json::array();
        for (const Row& row : rows) {
            out_rows.push_back(
                {{"d", row.def.d},
                 {"D", row.def.big_d},
                 {"upper", row.upper},
                 {"lower", row.lower ? json(*row.lower) : json(nullptr)},
                 {"reference_lower", row.def.reference_lower},
                 {"stochastic_reference", row.def.stochastic},
                 {"under_converged", row.lower ? json(row.under_converged) : json(nullptr)}});
        }
        doc["rows"] = std::move(out_rows);
        emit_json(doc);
    } else if (format == "csv") {
        std::cout << "n,d,D,seesaw_lower,upper,reference_lower,stochastic_reference,"
                     "under_converged\n";
        for (const Row& row : rows) {
            std::cout << 3 << ',' << row.def.d << ',' << row.def.big_d << ','
                      << (row.lower ? sig(*row.lower) : "") << ',' << sig(row.upper) << ','
                      << sig(row.def.reference_lower) << ',' << (row.def.stochastic ? 1 : 0)
                      << ',' << (row.lower ? (row.under_converged ? "1" : "0") : "") << '\n';
        }
    } else {
        std::cout << "(d,D)   seesaw lower   upper bound\n";
        for (const Row& row : rows) {
            std::cout << '(' << row.def.d << ',' << row.def.big_d << ")   ";
            if (row.lower) {
                std::cout << fixed(*row.lower, 5)
                          << (row.under_converged ? " [under-converged]" : "")
                          << (row.def.stochastic ? " [stochastic reference]" : "");
            } else {
                std::cout << "-";
            }
            std::cout << "        " << fixed(row.upper, 5) << '\n';
        }
    }
    return 0;
}

// ---------------------------------------------------------------- sweep ----

int cmd_sweep(const std::string& mode, int n, int fixed_d, int d_min, int d_max,
              int big_d_min, int big_d_max, int restarts, std::uint64_t seed, int threads,
              const std::string& format) {
    std::vector<RacSetting> grid;
    if (mode == "d-eq-D") {
        if (d_min < 2 || d_max < d_min) {
            throw ValidationError("sweep: need 2 <= d-min <= d-max");
        }
        for (int d = d_min; d <= d_max; ++d) grid.emplace_back(n, d, d);
    } else if (mode == "fixed-d") {
        if (big_d_min < 2 || big_d_max < big_d_min) {
            throw ValidationError("sweep: need 2 <= D-min <= D-max");
        }
        for (int big_d = big_d_min; big_d <= big_d_max; ++big_d) {
            grid.emplace_back(n, fixed_d, big_d);
        }
    } else {
        throw ValidationError("sweep: mode must be d-eq-D or fixed-d");
    }

    struct Row {
        bounds::BoundReport rep;
        std::optional<double> lower;
    };
    std::vector<Row> rows;
    rows.reserve(grid.size());
    for (const RacSetting& setting : grid) {
        Row row{bounds::bound_report(setting), std::nullopt};
        if (restarts > 0) {
            seesaw::SeesawConfig config;
            config.restarts = restarts;
            config.master_seed = seed;
            config.threads = threads;
            row.lower = seesaw::seesaw_run(setting, config).best_asp;
        }
        rows.push_back(row);
    }

    if (format == "json") {
        json doc;
        doc["mode"] = mode;
        doc["n"] = n;
        doc["restarts"] = restarts;
        doc["seed"] = seed;
        json out_rows = json::array();
        for (const Row& row : rows) {
            json entry = bound_json(row.rep);
            entry["seesaw_lower"] = row.lower ? json(*row.lower) : json(nullptr);
            entry["gap"] = row.lower ? json(row.rep.best_upper - *row.lower) : json(nullptr);
            out_rows.push_back(std::move(entry));
        }
        doc["rows"] = std::move(out_rows);
        emit_json(doc);
    } else if (format == "csv") {
        std::cout << "n,d,D,result1,result2,corollary,vicente,best_upper,seesaw_lower,gap\n";
        for (const Row& row : rows) {
            const RacSetting& s = row.rep.setting;
            std::cout << s.n() << ',' << s.d() << ',' << s.D() << ','
                      << sig(row.rep.result1) << ',' << sig(row.rep.result2) << ','
                      << sig(row.rep.corollary) << ',' << sig(row.rep.vicente) << ','
                      << sig(row.rep.best_upper) << ','
                      << (row.lower ? sig(*row.lower) : "") << ','
                      << (row.lower ? sig(row.rep.best_upper - *row.lower) : "") << '\n';
        }
    } else {
        std::cout << "n   d   D   corollary   vicente   best_upper   seesaw_lower   gap\n";
        for (const Row& row : rows) {
            const RacSetting& s = row.rep.setting;
            std::cout << s.n() << "   " << s.d() << "   " << s.D() << "   "
                      << fixed(row.rep.corollary, 5) << "     " << fixed(row.rep.vicente, 5)
                      << "   " << fixed(row.rep.best_upper, 5) << "      ";
            if (row.lower) {
                std::cout << fixed(*row.lower, 5) << "        "
                          << fixed(row.rep.best_upper - *row.lower, 5);
            } else {
                std::cout << "-              -";
            }
            std::cout << '\n';
        }
    }
    return 0;
}

// ---------------------------------------------------------- check-lemma ----

int cmd_check_lemma(int trials, int dim_max, std::uint64_t seed, const std::string& format) {
    if (trials < 1) throw ValidationError("check-lemma: trials must be >= 1");
    if (dim_max < 2) throw ValidationError("check-lemma: dim-max must be >= 2");
    if (format == "csv") throw ValidationError("check-lemma: csv output is not available");

    constexpr double kViolationTol = 1e-10;
    constexpr int kBins = 10;

    std::mt19937_64 rng(seed);
    double max_violation = -std::numeric_limits<double>::infinity();
    long saturated = 0;
    std::vector<long> histogram(kBins, 0);

    for (int t = 0; t < trials; ++t) {
        const int dim = 2 + t % (dim_max - 1);
        Matrix a(dim, dim);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) a(r, c) = linalg::complex_standard_normal(rng);
        }
        a = 0.5 * (a + a.adjoint()).eval();
        a -= (a.trace().real() / dim) * Matrix::Identity(dim, dim);

        const linalg::Lemma1Check check = linalg::lemma1_check(a);
        max_violation = std::max(max_violation, check.lhs - check.rhs);
        const double ratio = check.lhs / check.rhs;
        if (ratio >= 1.0 - 1e-9) ++saturated;
        const int bin = std::min(kBins - 1, static_cast<int>(ratio * kBins));
        ++histogram[bin];
    }

    const bool pass = max_violation <= kViolationTol;
    if (format == "json") {
        json doc;
        doc["trials"] = trials;
        doc["dim_max"] = dim_max;
        doc["seed"] = seed;
        doc["tolerance"] = kViolationTol;
        doc["max_violation"] = max_violation;
        doc["saturated"] = saturated;
        doc["ratio_histogram"] = histogram;
        doc["pass"] = pass;
        emit_json(doc);
    } else {
        std::cout << "trials         " << trials << '\n'
                  << "dims           2.." << dim_max << '\n'
                  << "seed           " << seed << '\n'
                  << "max violation  " << sig(max_violation) << " (tolerance "
                  << sig(kViolationTol) << ")\n"
                  << "saturated      " << saturated << '\n'
                  << "ratio histogram (operator norm / bound):\n";
        for (int b = 0; b < kBins; ++b) {
            std::cout << "  [" << fixed(0.1 * b, 1) << ", " << fixed(0.1 * (b + 1), 1)
                      << (b + 1 == kBins ? "]" : ")") << "  " << histogram[b] << '\n';
        }
        std::cout << "result         " << (pass ? "PASS" : "FAIL") << '\n';
    }
    if (!pass) throw NumericError("check-lemma: violation beyond tolerance");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum random access code bounds, strategies and seesaw optimization"};
    app.require_subcommand(1);

    int n = 3, d = 2, big_d = 2;
    int restarts = 100;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    int threads = 0;
    std::string format = "human";
    std::string out_file;
    std::string eval_file;
    std::string mode;
    int fixed_d = 3, d_min = 2, d_max = 6, big_d_min = 2, big_d_max = 10;
    int trials = 10000, dim_max = 8;

    const auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"human", "json", "csv"}))
            ->capture_default_str();
    };
    const auto add_setting = [&](CLI::App* cmd) {
        cmd->add_option("--n", n, "number of input symbols")->required();
        cmd->add_option("--d", d, "input alphabet size")->required();
        cmd->add_option("--D", big_d, "message dimension")->required();
    };
    const auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "master seed (env QRAC_SEED when absent)")
            ->envname("QRAC_SEED")
            ->capture_default_str();
    };
    const auto add_threads = [&](CLI::App* cmd) {
        cmd->add_option("--threads", threads,
                        "parallel restart workers (0 = hardware parallelism)")
            ->capture_default_str();
    };

    CLI::App* bound = app.add_subcommand("bound", "closed-form upper bounds for a setting");
    add_setting(bound);
    add_format(bound);

    CLI::App* seesaw_cmd =
        app.add_subcommand("seesaw", "multi-restart alternating-optimization lower bound");
    add_setting(seesaw_cmd);
    seesaw_cmd->add_option("--restarts", restarts, "independent random restarts")
        ->capture_default_str();
    add_seed(seesaw_cmd);
    seesaw_cmd->add_option("--tol", tol, "outer convergence tolerance")
        ->capture_default_str();
    add_threads(seesaw_cmd);
    seesaw_cmd->add_option("--out", out_file, "write the best strategy to this JSON file");
    add_format(seesaw_cmd);

    CLI::App* eval = app.add_subcommand("eval", "evaluate and validate a strategy file");
    eval->add_option("file", eval_file, "strategy JSON file")->required();
    add_format(eval);

    CLI::App* table2 = app.add_subcommand(
        "table2", "the n=3 benchmark table: seesaw lower bounds vs analytic upper bounds");
    table2->add_option("--restarts", restarts, "restarts per row (0 = bounds only)")
        ->capture_default_str();
    add_seed(table2);
    add_threads(table2);
    add_format(table2);

    CLI::App* sweep = app.add_subcommand("sweep", "bound/seesaw curves over a setting grid");
    sweep->add_option("--mode", mode, "d-eq-D (sweep d with D=d) or fixed-d (sweep D)")
        ->required()
        ->check(CLI::IsMember({"d-eq-D", "fixed-d"}));
    sweep->add_option("--n", n, "number of input symbols")->capture_default_str();
    sweep->add_option("--d", fixed_d, "alphabet size for fixed-d mode")->capture_default_str();
    sweep->add_option("--d-min", d_min, "first d for d-eq-D mode")->capture_default_str();
    sweep->add_option("--d-max", d_max, "last d for d-eq-D mode")->capture_default_str();
    sweep->add_option("--D-min", big_d_min, "first D for fixed-d mode")->capture_default_str();
    sweep->add_option("--D-max", big_d_max, "last D for fixed-d mode")->capture_default_str();
    sweep->add_option("--restarts", restarts, "restarts per grid point (0 = bounds only)")
        ->default_val(20);
    add_seed(sweep);
    add_threads(sweep);
    add_format(sweep);

    CLI::App* lemma = app.add_subcommand(
        "check-lemma", "property-test the trace-zero operator-norm inequality");
    lemma->add_option("--trials", trials, "number of random matrices")->capture_default_str();
    lemma->add_option("--dim-max", dim_max, "largest dimension sampled")->capture_default_str();
    add_seed(lemma);
    add_format(lemma);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*bound) return cmd_bound(n, d, big_d, format);
        if (*seesaw_cmd)
            return cmd_seesaw(n, d, big_d, restarts, seed, tol, threads, out_file, format);
        if (*eval) return cmd_eval(eval_file, format);
        if (*table2) return cmd_table2(restarts, seed, threads, format);
        if (*sweep)
            return cmd_sweep(mode, n, fixed_d, d_min, d_max, big_d_min, big_d_max, restarts,
                             seed, threads, format);
        if (*lemma) return cmd_check_lemma(trials, dim_max, seed, format);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
