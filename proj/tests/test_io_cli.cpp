/**
 * Copyright 2026 lopsim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cmath>
#include <string>

#include "lopsim/fock_oracle.hpp"
#include "lopsim/linalg.hpp"
#include "lopsim/scenario_io.hpp"

using namespace lopsim;
using nlohmann::json;

namespace {

std::string data_path(const std::string& name) {
    return std::string(LOPSIM_TEST_DATA) + "/" + name;
}

struct CliResult {
    int exit_code;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(LOPSIM_CLI_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    std::array<char, 4096> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) output.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

}  // namespace

TEST_CASE("network presets are unitary") {
    CHECK(check_unitary(network_from_json(json{{"preset", "hadamard-bs"}}), 1e-12));
    CHECK(check_unitary(network_from_json(json{{"preset", "identity"}, {"size", 4}}), 1e-12));
    CHECK(check_unitary(network_from_json(json{{"preset", "dft"}, {"size", 5}}), 1e-10));
    CHECK(check_unitary(
        network_from_json(json{{"preset", "beamsplitter"}, {"theta", 0.3}, {"phi", 1.1}}),
        1e-12));

    // The balanced beamsplitter preset is theta = pi/4, phi = 0.
    const auto bs = network_from_json(json{{"preset", "beamsplitter"}});
    CHECK(std::abs(bs(0, 0).real() - std::sqrt(0.5)) < 1e-12);
    CHECK(std::abs(bs(1, 0).real() + std::sqrt(0.5)) < 1e-12);

    // DFT convention: U_{kl} = exp(2 pi i k l / M) / sqrt(M), zero-based.
    const auto dft = network_from_json(json{{"preset", "dft"}, {"size", 3}});
    CHECK(std::abs(dft(1, 1) - std::exp(cdouble{0.0, 2.0 * std::numbers::pi / 3.0}) /
                                   std::sqrt(3.0)) < 1e-12);
}

TEST_CASE("scenario files parse and validate") {
    const auto hom = scenario_from_json(load_json_file(data_path("hom.json")));
    CHECK(hom.port_count() == 2);
    CHECK(std::abs(hom.gram(0, 1) - cdouble{0.5}) < 1e-9);

    CHECK_THROWS_AS(scenario_from_json(load_json_file(data_path("bad_unitary.json"))), SimError);
    CHECK_THROWS_AS(scenario_from_json(load_json_file(data_path("bad_gram.json"))), SimError);
}

TEST_CASE("gram and mode vectors are mutually exclusive") {
    auto j = load_json_file(data_path("hom.json"));
    j["gram"] = json::parse(R"([[[1.0,0.0],[0.5,0.0]],[[0.5,0.0],[1.0,0.0]]])");
    try {
        scenario_from_json(j);
        FAIL("exclusivity not enforced");
    } catch (const SimError& e) {
        CHECK(e.kind() == ErrorKind::Parse);
    }
    // Dropping the vectors makes the explicit gram valid.
    j["sources"][0].erase("mode_vector");
    j["sources"][1].erase("mode_vector");
    CHECK_NOTHROW(scenario_from_json(j));
}

TEST_CASE("multimode section requires an explicit seed") {
    auto j = load_json_file(data_path("multimode.json"));
    CHECK(has_multimode_section(j));
    const auto ms = multimode_from_json(j);
    CHECK(ms.rng_seed == 424242);
    j["multimode"].erase("rng_seed");
    CHECK_THROWS_AS(multimode_from_json(j), SimError);
}

TEST_CASE("digest is stable under formatting and tracks semantics") {
    const auto a = scenario_from_json(load_json_file(data_path("hom.json")));
    auto j = load_json_file(data_path("hom.json"));
    j["comment"] = "irrelevant free-text key";  // unknown keys are ignored
    const auto b = scenario_from_json(j);
    CHECK(scenario_digest(a) == scenario_digest(b));

    j["detectors"][0] = 0.99;
    const auto c = scenario_from_json(j);
    CHECK(scenario_digest(a) != scenario_digest(c));
}

TEST_CASE("cli validate") {
    CHECK(run_cli("validate " + data_path("hom.json")).exit_code == 0);
    CHECK(run_cli("validate " + data_path("multimode.json")).exit_code == 0);

    const auto bad = run_cli("validate " + data_path("bad_unitary.json"));
    CHECK(bad.exit_code == 2);
    CHECK(bad.output.find("unitary") != std::string::npos);

    const auto gram = run_cli("validate " + data_path("bad_gram.json"));
    CHECK(gram.exit_code == 2);
    CHECK(gram.output.find("Cauchy-Schwarz") != std::string::npos);

    CHECK(run_cli("validate /nonexistent.json").exit_code == 2);
}

TEST_CASE("cli simulate json output round-trips bit for bit") {
    const auto run = run_cli("simulate " + data_path("hom.json") + " --format json");
    REQUIRE(run.exit_code == 0);
    const json out = json::parse(run.output);

    const auto s = scenario_from_json(load_json_file(data_path("hom.json")));
    const auto table = distribution(s, s.p_max);
    REQUIRE(out["entries"].size() == table.entries.size());
    for (std::size_t i = 0; i < table.entries.size(); ++i) {
        const double reparsed = out["entries"][i]["probability"].get<double>();
        CHECK(reparsed == table.entries[i].probability);  // bitwise
    }
    CHECK(out["metadata"]["digest"] == table.metadata.digest);
}

TEST_CASE("cli simulate csv matches the geometric closed form") {
    const auto run = run_cli("simulate " + data_path("thermal_single.json") + " --max-total 3");
    REQUIRE(run.exit_code == 0);
    CHECK(run.output.find("pattern,probability,path") != std::string::npos);
    CHECK(run.output.find("0,0.5,series") != std::string::npos);
    CHECK(run.output.find("1,0.25,series") != std::string::npos);
    CHECK(run.output.find("2,0.125,series") != std::string::npos);
    CHECK(run.output.find("3,0.0625,series") != std::string::npos);
}

TEST_CASE("cli hom-scan sweeps the overlap") {
    const auto run =
        run_cli("hom-scan " + data_path("hom.json") + " --param overlap --from 0 --to 1 --steps 5");
    REQUIRE(run.exit_code == 0);
    // P(1,1) = (1 - v^2)/2 at v = 0, 0.25, 0.5, 0.75, 1.
    CHECK(run.output.find("0,0.5,0.25,0.25") != std::string::npos);
    CHECK(run.output.find("0.25,0.46875,") != std::string::npos);
    CHECK(run.output.find("0.5,0.375,") != std::string::npos);
    CHECK(run.output.find("0.75,0.21875,") != std::string::npos);
    CHECK(run.output.find("1,0,0.5,0.5") != std::string::npos);

    // The dip survives loss at v = 1.
    const auto lossy = run_cli("hom-scan " + data_path("hom.json") +
                               " --param eta --from 0.2 --to 1 --steps 3");
    REQUIRE(lossy.exit_code == 0);

    const auto single = run_cli("hom-scan " + data_path("hom.json") +
                                " --param overlap --from 0.5 --to 0.9 --steps 1");
    REQUIRE(single.exit_code == 0);
    CHECK(single.output.find("0.5,0.375") != std::string::npos);

    CHECK(run_cli("hom-scan " + data_path("thermal_single.json") + " --param overlap").exit_code ==
          2);
}

TEST_CASE("cli oracle-compare") {
    const auto hom = run_cli("oracle-compare " + data_path("hom.json") + " --d 2");
    CHECK(hom.exit_code == 0);
    CHECK(hom.output.find("max_abs_dev") != std::string::npos);

    const auto mixed =
        run_cli("oracle-compare " + data_path("mixed.json") + " --d 2 --max-total 3 --format json");
    CHECK(mixed.exit_code == 0);
    const json out = json::parse(mixed.output);
    CHECK(out["pass"].get<bool>());
    CHECK(out["max_abs_dev"].get<double>() <= 1e-8);
}

TEST_CASE("table comparison flags a corrupted engine result") {
    // Negative control for the oracle gate: a wrong probability must trip
    // the 1e-8 threshold the CLI exits on.
    const auto s = scenario_from_json(load_json_file(data_path("hom.json")));
    auto engine = distribution(s, 2);
    const auto oracle = oracle_distribution(s, 2, 2);
    engine.entries[1].probability += 1e-6;
    double max_dev = 0.0;
    for (std::size_t i = 0; i < engine.entries.size(); ++i)
        max_dev = std::max(max_dev, std::abs(engine.entries[i].probability -
                                             oracle.entries[i].probability));
    CHECK(max_dev > 1e-8);
}

TEST_CASE("cli bench-permanent") {
    const auto run = run_cli("bench-permanent --sizes 2..6 --algo both --repeats 1");
    REQUIRE(run.exit_code == 0);
    CHECK(run.output.find("size,algo,median_ms") != std::string::npos);
    CHECK(run.output.find("naive") != std::string::npos);
    CHECK(run.output.find("ryser-serial") != std::string::npos);
    CHECK(run.output.find("ryser-omp") != std::string::npos);

    CHECK(run_cli("bench-permanent --sizes 30 --algo ryser").exit_code == 3);
}

TEST_CASE("cli multimode-p0 is seed-reproducible") {
    const auto a = run_cli("multimode-p0 " + data_path("multimode.json") + " --format json");
    REQUIRE(a.exit_code == 0);
    const auto b = run_cli("multimode-p0 " + data_path("multimode.json") + " --format json");
    CHECK(json::parse(a.output)["estimate"].get<double>() ==
          json::parse(b.output)["estimate"].get<double>());
}

TEST_CASE("cli exit codes are stable") {
    CHECK(run_cli("simulate " + data_path("bad_unitary.json")).exit_code == 2);
    // Oversized pattern request trips the cutoff domain check.
    CHECK(run_cli("simulate " + data_path("hom.json") + " --max-total 9").exit_code == 2);
}
