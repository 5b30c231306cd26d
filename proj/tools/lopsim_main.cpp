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

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "lopsim/counting_engine.hpp"
#include "lopsim/fock_oracle.hpp"
#include "lopsim/linalg.hpp"
#include "lopsim/multimode.hpp"
#include "lopsim/scenario_io.hpp"

namespace {

using namespace lopsim;
using nlohmann::json;

// Stable exit codes, documented in the README:
//   0 success, 1 comparison failure, 2 validation, 3 size guard, 4 numeric.
int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::SizeGuard: return 3;
        case ErrorKind::Numeric: return 4;
        default: return 2;
    }
}

std::string format_sig(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int cmd_validate(const std::string& path) {
    const json j = load_json_file(path);
    if (has_multimode_section(j)) {
        const MultimodeScenario ms = multimode_from_json(j);
        std::cout << "ok: multimode scenario, " << ms.network.rows() << " ports, d = "
                  << ms.internal_dim << ", " << ms.sample_count << " samples\n";
        return 0;
    }
    const Scenario s = scenario_from_json(j);
    std::string diag;
    check_unitary(s.unitary, 1e-10, &diag);
    std::cout << "ok: network " << s.port_count() << "x" << s.port_count() << " (" << diag << ")\n";
    std::cout << "ok: " << s.source_count() << " sources, truncation budget "
              << format_sig(s.truncation_budget()) << "\n";
    std::cout << "ok: gram matrix Hermitian PSD with unit diagonal\n";
    std::cout << "ok: detectors within [0, 1]\n";
    std::cout << "ok: cutoff p_max = " << s.p_max << "\n";
    std::cout << "digest: " << scenario_digest(s) << "\n";
    return 0;
}

int cmd_simulate(const std::string& path, int max_total, const std::string& format) {
    const Scenario s = scenario_from_json(load_json_file(path));
    const int top = (max_total < 0) ? s.p_max : max_total;
    const ProbabilityTable table = distribution(s, top);
    if (format == "json")
        std::cout << table_to_json(table).dump(2) << "\n";
    else
        std::cout << table_to_csv(table);
    return 0;
}

int cmd_hom_scan(const std::string& path, const std::string& param, double from, double to,
                 int steps, const std::string& format) {
    if (steps < 1) raise(ErrorKind::Domain, "hom-scan: steps must be >= 1");
    const json j = load_json_file(path);
    const Scenario base = scenario_from_json(j);
    if (base.port_count() != 2)
        raise(ErrorKind::Domain, "hom-scan: requires a 2-port scenario");

    const OutcomePattern p11{1, 1}, p20{2, 0}, p02{0, 2};
    json rows = json::array();
    std::ostringstream csv;
    csv << "param,p11,p20,p02\n";
    for (int i = 0; i < steps; ++i) {
        const double value =
            (steps == 1) ? from : from + (to - from) * static_cast<double>(i) / (steps - 1);
        Scenario swept = base;
        if (param == "overlap") {
            swept.gram = model_uniform_overlap(2, value);
            swept.mode_vectors.clear();  // the gram is now the authority
        } else if (param == "eta") {
            swept.detectors = DetectorBank({value, value});
        } else {
            raise(ErrorKind::Domain, "hom-scan: --param must be 'overlap' or 'eta'");
        }
        const ProbabilityTable table = distribution(swept, 2);
        const double v11 = table.find(p11)->probability;
        const double v20 = table.find(p20)->probability;
        const double v02 = table.find(p02)->probability;
        csv << format_sig(value) << ',' << format_sig(v11) << ',' << format_sig(v20) << ','
            << format_sig(v02) << '\n';
        rows.push_back({{"param", value}, {"p11", v11}, {"p20", v20}, {"p02", v02}});
    }
    if (format == "json")
        std::cout << rows.dump(2) << "\n";
    else
        std::cout << csv.str();
    return 0;
}

int cmd_oracle_compare(const std::string& path, std::size_t d, int max_total,
                       const std::string& format) {
    const Scenario s = scenario_from_json(load_json_file(path));
    std::size_t d_eff = d;
    if (d_eff == 0) {
        if (!s.mode_vectors.empty()) {
            for (const auto& v : s.mode_vectors) d_eff = std::max(d_eff, v.dim());
        } else {
            d_eff = s.port_count();
        }
    }
    int cut_sum = 0;
    for (const auto& src : s.sources) cut_sum += src.n_cut();
    const int top = (max_total < 0) ? std::min(s.p_max, cut_sum) : max_total;

    const ProbabilityTable engine = distribution(s, top);
    const ProbabilityTable oracle = oracle_distribution(s, d_eff, top);

    double max_dev = 0.0;
    json rows = json::array();
    std::ostringstream csv;
    csv << "pattern,engine,oracle,abs_dev\n";
    for (std::size_t i = 0; i < engine.entries.size(); ++i) {
        const auto& e = engine.entries[i];
        const auto& o = oracle.entries[i];
        const double dev = std::abs(e.probability - o.probability);
        max_dev = std::max(max_dev, dev);
        for (std::size_t k = 0; k < e.pattern.size(); ++k) {
            if (k) csv << ' ';
            csv << e.pattern[k];
        }
        csv << ',' << format_sig(e.probability) << ',' << format_sig(o.probability) << ','
            << format_sig(dev) << '\n';
        rows.push_back({{"pattern", e.pattern.counts},
                        {"engine", e.probability},
                        {"oracle", o.probability},
                        {"abs_dev", dev}});
    }
    const bool pass = max_dev <= 1e-8;
    if (format == "json") {
        json out{{"digest", engine.metadata.digest},
                 {"internal_dim", d_eff},
                 {"max_total", top},
                 {"max_abs_dev", max_dev},
                 {"pass", pass},
                 {"rows", rows}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << csv.str();
        std::cout << "max_abs_dev," << format_sig(max_dev) << ",,\n";
    }
    return pass ? 0 : 1;
}

std::vector<std::size_t> parse_sizes(const std::string& spec) {
    std::vector<std::size_t> sizes;
    const auto dots = spec.find("..");
    if (dots != std::string::npos) {
        const std::size_t a = std::stoul(spec.substr(0, dots));
        const std::size_t b = std::stoul(spec.substr(dots + 2));
        for (std::size_t n = a; n <= b; ++n) sizes.push_back(n);
        return sizes;
    }
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ',')) sizes.push_back(std::stoul(tok));
    if (sizes.empty()) raise(ErrorKind::Domain, "bench-permanent: empty size list");
    return sizes;
}

int cmd_bench_permanent(const std::string& sizes_spec, const std::string& algo, int repeats) {
    const auto sizes = parse_sizes(sizes_spec);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::cout << "size,algo,median_ms,value_re\n";
    for (const std::size_t n : sizes) {
        if (n > kPermanentRyserMaxN)
            raise(ErrorKind::SizeGuard,
                  "bench-permanent: size " + std::to_string(n) + " exceeds the Ryser guard " +
                      std::to_string(kPermanentRyserMaxN));
        ComplexMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = cdouble{unit(rng), unit(rng)};

        auto time_median = [&](auto&& fn) {
            std::vector<double> ms;
            cdouble value{};
            for (int r = 0; r < repeats; ++r) {
                const auto t0 = std::chrono::steady_clock::now();
                value = fn(a);
                const auto t1 = std::chrono::steady_clock::now();
                ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
            }
            std::sort(ms.begin(), ms.end());
            return std::pair{ms[ms.size() / 2], value};
        };

        cdouble naive_value{}, ryser_value{};
        if ((algo == "naive" || algo == "both") && n <= kPermanentNaiveMaxN) {
            const auto [ms, value] = time_median([](const ComplexMatrix& x) {
                return permanent_naive(x);
            });
            naive_value = value;
            std::cout << n << ",naive," << format_sig(ms) << ',' << format_sig(value.real())
                      << "\n";
        }
        if (algo == "ryser" || algo == "both") {
            const auto [ms_s, value_s] = time_median([](const ComplexMatrix& x) {
                return permanent_ryser_serial(x);
            });
            std::cout << n << ",ryser-serial," << format_sig(ms_s) << ','
                      << format_sig(value_s.real()) << "\n";
            const auto [ms_p, value_p] = time_median([](const ComplexMatrix& x) {
                return permanent_ryser(x);
            });
            ryser_value = value_p;
            std::cout << n << ",ryser-omp," << format_sig(ms_p) << ','
                      << format_sig(value_p.real()) << "\n";
        }
        if (algo == "both" && n <= kPermanentNaiveMaxN) {
            const double rel = std::abs(naive_value - ryser_value) /
                               std::max(1e-300, std::abs(naive_value));
            if (rel > 1e-10)
                raise(ErrorKind::Numeric, "bench-permanent: naive/Ryser cross-check failed at n = " +
                                              std::to_string(n));
        }
    }
    return 0;
}

int cmd_multimode_p0(const std::string& path, const std::string& format) {
    const json j = load_json_file(path);
    const MultimodeScenario ms = multimode_from_json(j);
    const McEstimate est = estimate_vacuum_probability(ms);
    if (format == "json") {
        json out{{"estimate", est.estimate},
                 {"std_error", est.std_error},
                 {"samples", est.samples},
                 {"rng_seed", ms.rng_seed},
                 {"d", ms.internal_dim}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "estimate,std_error,samples,rng_seed,d\n";
        std::cout << format_sig(est.estimate) << ',' << format_sig(est.std_error) << ','
                  << est.samples << ',' << ms.rng_seed << ',' << ms.internal_dim << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photon-counting statistics of lossy linear optical multiports"};
    app.require_subcommand(1);

    std::string path, format = "csv", param = "overlap", algo = "both", sizes = "2..8";
    int max_total = -1, steps = 5, repeats = 5;
    double from = 0.0, to = 1.0;
    std::size_t internal_dim = 0;

    auto* validate = app.add_subcommand("validate", "check every scenario-file invariant");
    validate->add_option("path", path)->required();

    auto* simulate = app.add_subcommand("simulate", "photon-count probability table");
    simulate->add_option("path", path)->required();
    simulate->add_option("--max-total", max_total, "largest total count (default: cutoff)");
    simulate->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    auto* scan = app.add_subcommand("hom-scan", "sweep overlap or efficiency on a 2-port scenario");
    scan->add_option("path", path)->required();
    scan->add_option("--param", param)->check(CLI::IsMember({"overlap", "eta"}));
    scan->add_option("--from", from);
    scan->add_option("--to", to);
    scan->add_option("--steps", steps);
    scan->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    auto* compare = app.add_subcommand("oracle-compare", "engine vs brute-force Fock oracle");
    compare->add_option("path", path)->required();
    compare->add_option("--d", internal_dim, "internal dimension (default: from the scenario)");
    compare->add_option("--max-total", max_total);
    compare->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    auto* bench = app.add_subcommand("bench-permanent", "time the permanent kernels");
    bench->add_option("--sizes", sizes, "comma list or a..b range");
    bench->add_option("--algo", algo)->check(CLI::IsMember({"naive", "ryser", "both"}));
    bench->add_option("--repeats", repeats);

    auto* mm = app.add_subcommand("multimode-p0", "Monte-Carlo vacuum probability");
    mm->add_option("path", path)->required();
    mm->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(path);
        if (simulate->parsed()) return cmd_simulate(path, max_total, format);
        if (scan->parsed()) return cmd_hom_scan(path, param, from, to, steps, format);
        if (compare->parsed()) return cmd_oracle_compare(path, internal_dim, max_total, format);
        if (bench->parsed()) return cmd_bench_permanent(sizes, algo, repeats);
        if (mm->parsed()) return cmd_multimode_p0(path, format);
    } catch (const SimError& e) {
        std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
