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

#include "lopsim/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace lopsim {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
    raise(ErrorKind::Parse, "scenario file, field '" + where + "': " + what);
}

cdouble parse_complex(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        parse_fail(where, "expected a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

ComplexMatrix parse_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) parse_fail(where, "expected a non-empty array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    ComplexMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            parse_fail(where, "row " + std::to_string(r) + " has inconsistent length");
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = parse_complex(j[r][c], where + "[" + std::to_string(r) + "][" +
                                                  std::to_string(c) + "]");
    }
    return m;
}

std::vector<cdouble> parse_complex_vector(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) parse_fail(where, "expected a non-empty array");
    std::vector<cdouble> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(parse_complex(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

SingleModeSource source_from_json(const json& j, std::size_t index) {
    const std::string where = "sources[" + std::to_string(index) + "]";
    if (!j.is_object() || !j.contains("type")) parse_fail(where, "expected an object with 'type'");
    const std::string type = j["type"].get<std::string>();
    if (type == "vacuum") return fock(0, j.value("n_cut", 0));
    if (type == "fock") {
        if (!j.contains("n")) parse_fail(where, "fock source needs 'n'");
        const int n = j["n"].get<int>();
        return fock(n, j.value("n_cut", n));
    }
    if (type == "coherent") {
        if (!j.contains("alpha") || !j.contains("n_cut"))
            parse_fail(where, "coherent source needs 'alpha' and 'n_cut'");
        return coherent(parse_complex(j["alpha"], where + ".alpha"), j["n_cut"].get<int>());
    }
    if (type == "thermal") {
        if (!j.contains("nbar") || !j.contains("n_cut"))
            parse_fail(where, "thermal source needs 'nbar' and 'n_cut'");
        return thermal(j["nbar"].get<double>(), j["n_cut"].get<int>());
    }
    if (type == "custom") {
        if (!j.contains("rho")) parse_fail(where, "custom source needs 'rho'");
        return custom(parse_matrix(j["rho"], where + ".rho"));
    }
    parse_fail(where, "unknown source type '" + type + "'");
}

}  // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorKind::Parse, "cannot open scenario file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        raise(ErrorKind::Parse, "scenario file '" + path + "': " + e.what());
    }
}

ComplexMatrix network_from_json(const json& j) {
    if (!j.is_object()) parse_fail("network", "expected an object");
    if (j.contains("matrix")) return parse_matrix(j["matrix"], "network.matrix");
    if (!j.contains("preset")) parse_fail("network", "needs 'preset' or 'matrix'");
    const std::string preset = j["preset"].get<std::string>();
    if (preset == "identity") {
        if (!j.contains("size")) parse_fail("network", "identity preset needs 'size'");
        return ComplexMatrix::identity(j["size"].get<std::size_t>());
    }
    if (preset == "beamsplitter") {
        const double theta = j.value("theta", std::numbers::pi / 4.0);
        const double phi = j.value("phi", 0.0);
        const cdouble eip{std::cos(phi), std::sin(phi)};
        return ComplexMatrix{{std::cos(theta), eip * std::sin(theta)},
                             {-std::conj(eip) * std::sin(theta), std::cos(theta)}};
    }
    if (preset == "hadamard-bs") {
        const double s = std::numbers::sqrt2 / 2.0;
        return ComplexMatrix{{s, s}, {s, -s}};
    }
    if (preset == "dft") {
        if (!j.contains("size")) parse_fail("network", "dft preset needs 'size'");
        const std::size_t m = j["size"].get<std::size_t>();
        ComplexMatrix u(m, m);
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t l = 0; l < m; ++l) {
                const double arg = 2.0 * std::numbers::pi * static_cast<double>(k * l) /
                                   static_cast<double>(m);
                u(k, l) = cdouble{std::cos(arg), std::sin(arg)} / std::sqrt(static_cast<double>(m));
            }
        return u;
    }
    parse_fail("network.preset", "unknown preset '" + preset + "'");
}

Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) raise(ErrorKind::Parse, "scenario file: top level must be an object");
    for (const char* key : {"network", "sources", "detectors"})
        if (!j.contains(key)) parse_fail(key, "missing required section");

    ComplexMatrix network = network_from_json(j["network"]);

    if (!j["sources"].is_array() || j["sources"].empty())
        parse_fail("sources", "expected a non-empty array");
    std::vector<SingleModeSource> sources;
    std::vector<ModeVector> vectors;
    bool any_vector = false, all_vectors = true;
    for (std::size_t k = 0; k < j["sources"].size(); ++k) {
        const auto& src = j["sources"][k];
        sources.push_back(source_from_json(src, k));
        if (src.is_object() && src.contains("mode_vector") && !src["mode_vector"].is_null()) {
            any_vector = true;
            vectors.emplace_back(
                parse_complex_vector(src["mode_vector"], "sources[" + std::to_string(k) +
                                                             "].mode_vector"));
        } else {
            all_vectors = false;
        }
    }

    const bool has_gram = j.contains("gram") && !j["gram"].is_null();
    if (has_gram && any_vector)
        parse_fail("gram", "give either per-source mode_vectors or an explicit gram, not both");
    if (!has_gram && !all_vectors)
        parse_fail("gram", "either every source needs a mode_vector or a gram matrix is required");
    if (any_vector) {
        std::size_t dmax = 0;
        for (const auto& v : vectors) dmax = std::max(dmax, v.dim());
        // Pad to a common internal dimension; padding zeros do not change
        // the overlaps.
        std::vector<ModeVector> padded;
        for (const auto& v : vectors) {
            auto amps = v.amplitudes();
            amps.resize(dmax, cdouble{});
            padded.emplace_back(std::move(amps));
        }
        vectors = std::move(padded);
    }
    GramMatrix gram = has_gram ? GramMatrix(parse_matrix(j["gram"], "gram")) : gram_matrix(vectors);

    if (!j["detectors"].is_array()) parse_fail("detectors", "expected an array of efficiencies");
    std::vector<double> eta;
    for (const auto& e : j["detectors"]) {
        if (!e.is_number()) parse_fail("detectors", "efficiencies must be numbers");
        eta.push_back(e.get<double>());
    }

    int default_cutoff = 0;
    for (const auto& s : sources) default_cutoff += s.n_cut();
    const int p_max = j.value("cutoff", default_cutoff);

    return make_scenario(std::move(network), std::move(sources), std::move(gram),
                         DetectorBank(std::move(eta)), p_max, std::move(vectors));
}

bool has_multimode_section(const json& j) {
    return j.is_object() && j.contains("multimode") && j["multimode"].is_object();
}

MultimodeScenario multimode_from_json(const json& j) {
    if (!has_multimode_section(j)) parse_fail("multimode", "missing section");
    const auto& mm = j["multimode"];
    for (const char* key : {"d", "sample_count", "rng_seed"})
        if (!mm.contains(key))
            parse_fail(std::string("multimode.") + key,
                       "required (rng_seed has no entropy default)");
    if (!mm["rng_seed"].is_number_integer())
        parse_fail("multimode.rng_seed", "must be a 64-bit integer");
    const auto d = mm["d"].get<std::size_t>();

    if (!mm.contains("sources") || !mm["sources"].is_array())
        parse_fail("multimode.sources", "expected an array of {modes: [...]} objects");
    std::vector<SamplableHusimiSource> sources;
    for (std::size_t k = 0; k < mm["sources"].size(); ++k) {
        const std::string where = "multimode.sources[" + std::to_string(k) + "]";
        const auto& js = mm["sources"][k];
        SamplableHusimiSource src;
        if (!js.is_object() || !js.contains("modes") || !js["modes"].is_array())
            parse_fail(where, "expected {\"modes\": [...]}");
        for (std::size_t s = 0; s < js["modes"].size(); ++s) {
            const auto& jm = js["modes"][s];
            const std::string mwhere = where + ".modes[" + std::to_string(s) + "]";
            if (!jm.is_object() || !jm.contains("kind")) parse_fail(mwhere, "needs 'kind'");
            const std::string kind = jm["kind"].get<std::string>();
            HusimiMode mode;
            if (kind == "vacuum") {
                mode.kind = HusimiMode::Kind::Vacuum;
            } else if (kind == "coherent") {
                if (!jm.contains("alpha")) parse_fail(mwhere, "coherent mode needs 'alpha'");
                mode.kind = HusimiMode::Kind::Coherent;
                mode.alpha = parse_complex(jm["alpha"], mwhere + ".alpha");
            } else if (kind == "thermal") {
                if (!jm.contains("nbar")) parse_fail(mwhere, "thermal mode needs 'nbar'");
                mode.kind = HusimiMode::Kind::Thermal;
                mode.nbar = jm["nbar"].get<double>();
            } else {
                parse_fail(mwhere, "unknown kind '" + kind + "'");
            }
            src.modes.push_back(mode);
        }
        sources.push_back(std::move(src));
    }

    ComplexMatrix network = network_from_json(j.contains("network") ? j["network"] : json{});
    if (!j.contains("detectors") || !j["detectors"].is_array())
        parse_fail("detectors", "expected an array of efficiencies");
    std::vector<double> eta;
    for (const auto& e : j["detectors"]) eta.push_back(e.get<double>());

    return make_multimode_scenario(std::move(network), std::move(sources),
                                   DetectorBank(std::move(eta)), d,
                                   mm["sample_count"].get<long long>(),
                                   mm["rng_seed"].get<std::uint64_t>());
}

json table_to_json(const ProbabilityTable& table) {
    json out;
    out["metadata"] = {{"digest", table.metadata.digest},
                       {"cutoff", table.metadata.p_max},
                       {"max_total", table.metadata.max_total},
                       {"truncation_budget", table.metadata.truncation_budget},
                       {"series_truncated", table.metadata.series_truncated}};
    json entries = json::array();
    for (const auto& e : table.entries) {
        entries.push_back(
            {{"pattern", e.pattern.counts}, {"probability", e.probability}, {"path", e.path}});
    }
    out["entries"] = std::move(entries);
    return out;
}

std::string table_to_csv(const ProbabilityTable& table) {
    std::ostringstream out;
    out << "pattern,probability,path\n";
    char buf[40];
    for (const auto& e : table.entries) {
        for (std::size_t i = 0; i < e.pattern.size(); ++i) {
            if (i) out << ' ';
            out << e.pattern[i];
        }
        std::snprintf(buf, sizeof buf, "%.12g", e.probability);
        out << ',' << buf << ',' << e.path << '\n';
    }
    return out.str();
}

}  // namespace lopsim
