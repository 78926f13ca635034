// SPDX-License-Identifier: MIT
/**
 * @file spec_io.hpp
 * @brief JSON manifold specs and the built-in example corpus.
 *
 * A spec file looks like
 *
 *     {
 *       "name": "sphere2",                        (optional)
 *       "dimension": 2,
 *       "coordinates": ["theta", "phi"],
 *       "metric": {"components": [["1", "0"], ["0", "sin(theta)^2"]]},
 *       "connection": {"kind": "levi-civita"},
 *       "sample_box": [[0.5, 2.6], [-1.5, 1.5]]
 *     }
 *
 * "metric" may instead be {"potential": "<expr>"}. An explicit connection
 * gives "gamma" as gamma[k][i][j] = Gamma^k_ij.
 */
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "hessborn/manifold.hpp"

namespace hessborn {

/// Parses a spec from JSON text. `name` is used when the document has none.
ManifoldSpec parse_spec(const std::string& text, const std::string& name);

ManifoldSpec parse_spec(const nlohmann::json& doc, const std::string& name);

/// A built-in example name, or a path to a spec file.
ManifoldSpec load_spec(const std::string& source);

/// Every *.json file in `dir`, ordered by file name.
std::vector<ManifoldSpec> load_corpus(const std::filesystem::path& dir);

std::vector<std::string> list_examples();
ManifoldSpec builtin_example(const std::string& name);
std::vector<ManifoldSpec> builtin_corpus();

/// The spec in the file format, with expressions as written (after
/// symmetrization).
nlohmann::json spec_to_json(const ManifoldSpec& spec);

}  // namespace hessborn
