// SPDX-License-Identifier: MIT
/**
 * @file report.hpp
 * @brief Runs every check on one spec (or a corpus) and assembles the JSON
 *        report written by the command-line tool.
 *
 * Reports are deterministic: object keys are sorted, all tables are in
 * sample order, and doubles are printed with round-trip precision.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hessborn/integrability.hpp"
#include "hessborn/sampling.hpp"

namespace hessborn {

enum ExitCode : int { kExitOk = 0, kExitSpecError = 1, kExitInternalFailure = 2 };

struct RunConfig {
  std::string spec_source;
  int base_points = kDefaultBasePoints;
  int fiber_points = kDefaultFiberPoints;
  double fiber_radius = kDefaultFiberRadius;
  double tol = kDefaultTol;
  double cross_tol = kDefaultCrossTol;
  std::uint64_t seed = kDefaultSeed;
  /// Number of bundle points used for the frame-identity sign fits.
  int identity_points = 10;
  /// Base point of the affine-chart witness; the box centre when unset.
  std::optional<std::vector<double>> chart_at;
  std::optional<std::string> report_path;

  /// Throws SpecError on counts < 1, radius <= 0 or tolerances <= 0.
  void validate() const;
};

struct RunResult {
  nlohmann::json report;
  int exit_code = kExitOk;
};

/// The full report for a loaded spec. Spec errors propagate as SpecError.
nlohmann::json check_report(const ManifoldSpec& spec, const RunConfig& config);

/// load_spec + check_report, with errors turned into a JSON error object and
/// the matching exit code.
RunResult run(const RunConfig& config);

/// Crosscheck table over a corpus.
RunResult run_theorem(const std::vector<ManifoldSpec>& corpus, const RunConfig& config);

/// Affine-chart witness for one spec at `config.chart_at`.
RunResult run_affine_chart(const RunConfig& config);

nlohmann::json error_object(const std::string& kind, const std::string& message);

/// Pretty-printed report text, newline terminated.
std::string render(const nlohmann::json& report);

}  // namespace hessborn
