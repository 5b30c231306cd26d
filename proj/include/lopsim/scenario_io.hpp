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

#ifndef LOPSIM_SCENARIO_IO_HPP
#define LOPSIM_SCENARIO_IO_HPP

#include <string>

#include <json.hpp>

#include "lopsim/counting_engine.hpp"
#include "lopsim/multimode.hpp"

// Scenario files are JSON. Complex entries are [re, im] pairs; matrices are
// nested row arrays of such pairs. Exactly one of {per-source mode_vector
// fields, a top-level "gram" matrix} describes the internal-mode overlaps.
// See README.md for the full schema.

namespace lopsim {

nlohmann::json load_json_file(const std::string& path);

/// Builds and validates the single-mode scenario a file describes.
Scenario scenario_from_json(const nlohmann::json& j);

/// True when the file carries a "multimode" section.
bool has_multimode_section(const nlohmann::json& j);

/// Builds the Monte-Carlo scenario from the "multimode" section (d,
/// sample_count and rng_seed are required there; rng_seed has no default).
MultimodeScenario multimode_from_json(const nlohmann::json& j);

/// Network preset or explicit matrix from the "network" section.
ComplexMatrix network_from_json(const nlohmann::json& j);

nlohmann::json table_to_json(const ProbabilityTable& table);
std::string table_to_csv(const ProbabilityTable& table);

}  // namespace lopsim

#endif
