#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string output; // stdout and stderr merged
};

// Runs the CLI under test (path injected at compile time) through a shell.
CommandResult run_cli(const std::string& args, const std::string& env = "") {
    std::string command;
    if (!env.empty()) command += "env " + env + " ";
    command += "'";
    command += QRAC_CLI_PATH;
    command += "' " + args + " 2>&1";

    CommandResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buffer;
    while (std::size_t got = std::fread(buffer.data(), 1, buffer.size(), pipe)) {
        result.output.append(buffer.data(), got);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::vector<std::string> data_rows(const std::string& csv) {
    std::vector<std::string> rows;
    std::istringstream stream(csv);
    std::string line;
    bool header = true;
    while (std::getline(stream, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (!line.empty()) rows.push_back(line);
    }
    return rows;
}

std::vector<std::string> split_fields(const std::string& row) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(row);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!row.empty() && row.back() == ',') fields.push_back("");
    return fields;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("bound prints the documented values") {
    const auto r333 = run_cli("bound --n 3 --d 3 --D 3");
    CHECK(r333.exit_code == 0);
    CHECK(r333.output.find("corollary   0.718233") != std::string::npos);
    CHECK(r333.output.find("exact") == std::string::npos);

    const auto r222 = run_cli("bound --n 2 --d 2 --D 2");
    CHECK(r222.exit_code == 0);
    CHECK(r222.output.find("exact       0.853553391") != std::string::npos);
    CHECK(r222.output.find("best_upper  0.853553391") != std::string::npos);

    // Every closed-form expression exceeds one here, so the report clamps.
    const auto clamped = run_cli("bound --n 3 --d 2 --D 4");
    CHECK(clamped.exit_code == 0);
    CHECK(clamped.output.find("best_upper  1.000000000") != std::string::npos);
}

TEST_CASE("bound csv carries full precision") {
    const auto r = run_cli("bound --n 3 --d 3 --D 3 --format csv");
    CHECK(r.exit_code == 0);
    const auto rows = data_rows(r.output);
    REQUIRE(rows.size() == 1);
    CHECK(r.output.find("n,d,D,result1,result2,corollary,vicente,best_upper,exact") == 0);
    const auto fields = split_fields(rows[0]);
    REQUIRE(fields.size() == 9);
    CHECK(std::abs(std::stod(fields[5]) - 0.71823351279) < 1e-9);
    CHECK(fields[8].empty()); // no exact value is known at (3, 3, 3)
}

TEST_CASE("argument failures exit with code 1 and help with 0") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("bound --help").exit_code == 0);
    CHECK(run_cli("").exit_code == 1);                        // missing subcommand
    CHECK(run_cli("frobnicate").exit_code == 1);              // unknown subcommand
    CHECK(run_cli("bound --n 3 --d 2").exit_code == 1);       // missing --D
    CHECK(run_cli("bound --n 3 --d 1 --D 2").exit_code == 1); // invalid alphabet
    CHECK(run_cli("bound --n 3 --d 2 --D 2 --format yaml").exit_code == 1);
}

TEST_CASE("seesaw reaches the known qubit optimum and reports the gap") {
    const auto r = run_cli(
        "seesaw --n 2 --d 2 --D 2 --restarts 6 --seed 1 --format json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.output);
    CHECK(std::abs(doc["best_asp"].get<double>() - 0.85355339059) < 1e-6);
    CHECK(doc["best_upper"].get<double>() ==
          doctest::Approx(0.85355339059).epsilon(1e-9));
    CHECK(doc["gap"].get<double>() < 1e-6);
    CHECK(doc["failed"].get<int>() == 0);
    int histogram_total = 0;
    for (const auto& bin : doc["histogram"]) histogram_total += bin["count"].get<int>();
    CHECK(histogram_total == 6);
}

TEST_CASE("seesaw output is reproducible byte for byte") {
    const std::string args =
        "seesaw --n 2 --d 2 --D 3 --restarts 5 --seed 42 --format json";
    const auto first = run_cli(args);
    const auto second = run_cli(args);
    const auto serial = run_cli(args + " --threads 1");
    REQUIRE(first.exit_code == 0);
    CHECK(first.output == second.output);
    CHECK(first.output == serial.output);

    // The seed can come from the environment instead of the flag.
    const auto via_env = run_cli(
        "seesaw --n 2 --d 2 --D 3 --restarts 5 --format json", "QRAC_SEED=42");
    CHECK(via_env.output == first.output);
}

TEST_CASE("a saved strategy evaluates to the score the search reported") {
    const auto path = temp_file("qrac_cli_best_strategy.json");
    const auto run = run_cli("seesaw --n 3 --d 2 --D 2 --restarts 4 --seed 2 "
                             "--format json --out '" + path.string() + "'");
    REQUIRE(run.exit_code == 0);
    const double best_asp = json::parse(run.output)["best_asp"].get<double>();

    const auto eval = run_cli("eval '" + path.string() + "' --format json");
    CHECK(eval.exit_code == 0);
    const json doc = json::parse(eval.output);
    CHECK(doc["asp"].get<double>() == best_asp);
    CHECK(doc["valid"].get<bool>());
    CHECK(doc["issues"].empty());
    std::filesystem::remove(path);
}

TEST_CASE("eval distinguishes unparseable, invalid, and numerically bad input") {
    SUBCASE("missing file") {
        CHECK(run_cli("eval /nonexistent/strategy.json").exit_code == 1);
    }
    SUBCASE("truncated state row names the index") {
        const auto path = temp_file("qrac_cli_truncated.json");
        {
            std::ofstream out(path);
            out << R"({"n":1,"d":2,"D":2,
                       "states":[[[[1,0],[0,0]],[[0,0],[0,0]]],
                                 [[[0,0],[0,0]]]],
                       "measurements":[[[[[1,0],[0,0]],[[0,0],[0,0]]],
                                        [[[0,0],[0,0]],[[0,0],[1,0]]]]]})";
        }
        const auto r = run_cli("eval '" + path.string() + "'");
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("states[1]") != std::string::npos);
        std::filesystem::remove(path);
    }
    SUBCASE("valid JSON with a non-physical strategy still evaluates, exit 1") {
        const auto path = temp_file("qrac_cli_trace2.json");
        {
            std::ofstream out(path);
            out << R"({"n":1,"d":2,"D":2,
                       "states":[[[[2,0],[0,0]],[[0,0],[0,0]]],
                                 [[[0,0],[0,0]],[[0,0],[1,0]]]],
                       "measurements":[[[[[1,0],[0,0]],[[0,0],[0,0]]],
                                        [[[0,0],[0,0]],[[0,0],[1,0]]]]]})";
        }
        const auto r = run_cli("eval '" + path.string() + "'");
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("state 0") != std::string::npos);
        std::filesystem::remove(path);
    }
    SUBCASE("non-Hermitian states make the score complex, exit 2") {
        const auto path = temp_file("qrac_cli_complex.json");
        {
            std::ofstream out(path);
            out << R"({"n":1,"d":2,"D":2,
                       "states":[[[[1,0],[0,1]],[[0,1],[0,0]]],
                                 [[[1,0],[0,0]],[[0,0],[0,0]]]],
                       "measurements":[[[[[0.5,0],[0.5,0]],[[0.5,0],[0.5,0]]],
                                        [[[0.5,0],[-0.5,0]],[[-0.5,0],[0.5,0]]]]]})";
        }
        const auto r = run_cli("eval '" + path.string() + "'");
        CHECK(r.exit_code == 2);
        std::filesystem::remove(path);
    }
}

TEST_CASE("the benchmark table reproduces all eleven upper bounds quickly") {
    struct Expected {
        int d, big_d;
        double upper;
    };
    static constexpr Expected kExpected[] = {
        {2, 2, 0.78868}, {2, 3, 0.91068}, {2, 4, 1.00000}, {3, 2, 0.56904},
        {3, 3, 0.71823}, {3, 4, 0.77778}, {3, 5, 0.83024}, {4, 2, 0.45412},
        {4, 3, 0.58333}, {4, 4, 0.66667}, {4, 5, 0.70601},
    };

    const auto start = std::chrono::steady_clock::now();
    const auto r = run_cli("table2 --restarts 0 --format csv");
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    REQUIRE(r.exit_code == 0);
    CHECK(elapsed < 1.0);

    const auto rows = data_rows(r.output);
    REQUIRE(rows.size() == 11);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto fields = split_fields(rows[i]);
        REQUIRE(fields.size() >= 5);
        CHECK(std::stoi(fields[1]) == kExpected[i].d);
        CHECK(std::stoi(fields[2]) == kExpected[i].big_d);
        CHECK(fields[3].empty()); // bounds-only mode leaves the lower column blank
        CHECK(std::abs(std::stod(fields[4]) - kExpected[i].upper) < 5e-6);
    }
}

TEST_CASE("sweep emits the requested grid") {
    const auto diag = run_cli(
        "sweep --mode d-eq-D --n 2 --d-min 2 --d-max 6 --restarts 0 --format csv");
    REQUIRE(diag.exit_code == 0);
    CHECK(diag.output.find(
              "n,d,D,result1,result2,corollary,vicente,best_upper,seesaw_lower,gap") == 0);
    CHECK(data_rows(diag.output).size() == 5);

    const auto fixed = run_cli(
        "sweep --mode fixed-d --n 3 --d 2 --D-min 2 --D-max 10 --restarts 0 --format csv");
    REQUIRE(fixed.exit_code == 0);
    CHECK(data_rows(fixed.output).size() == 9);

    CHECK(run_cli("sweep --mode sideways --n 2").exit_code == 1);
    CHECK(run_cli("sweep --mode d-eq-D --n 2 --d-min 5 --d-max 3").exit_code == 1);
}

TEST_CASE("sweep with restarts recovers the known optimum at d = 2") {
    const auto r = run_cli(
        "sweep --mode d-eq-D --n 2 --d-min 2 --d-max 2 --restarts 5 --seed 1 --format csv");
    REQUIRE(r.exit_code == 0);
    const auto rows = data_rows(r.output);
    REQUIRE(rows.size() == 1);
    const auto fields = split_fields(rows[0]);
    REQUIRE(fields.size() == 10);
    CHECK(std::abs(std::stod(fields[9])) < 1e-6); // gap closes at the proven point
}

TEST_CASE("the operator-norm property check passes and rejects csv") {
    const auto r = run_cli("check-lemma --trials 500 --dim-max 5 --seed 9");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("PASS") != std::string::npos);

    CHECK(run_cli("check-lemma --trials 10 --format csv").exit_code == 1);
    CHECK(run_cli("check-lemma --trials 0").exit_code == 1);
}
