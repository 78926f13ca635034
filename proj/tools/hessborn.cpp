// SPDX-License-Identifier: MIT
// hessborn: check Hessian structures against the integrability of the Born
// structure they induce on the tangent bundle.

#include <cctype>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hessborn/report.hpp"
#include "hessborn/spec_io.hpp"

namespace {

using hessborn::RunConfig;
using hessborn::RunResult;

void add_sampling_options(CLI::App* cmd, RunConfig& config, std::string& report) {
  cmd->add_option("--points", config.base_points, "base sample points")->capture_default_str();
  cmd->add_option("--fiber-points", config.fiber_points, "fiber samples per base point")->capture_default_str();
  cmd->add_option("--fiber-radius", config.fiber_radius, "radius of the fiber sampling ball")->capture_default_str();
  cmd->add_option("--tol", config.tol, "threshold for vanishing residuals")->capture_default_str();
  cmd->add_option("--cross-tol", config.cross_tol, "threshold for cross-implications")->capture_default_str();
  cmd->add_option("--seed", config.seed, "sampling seed")->capture_default_str();
  cmd->add_option("--report", report, "also write the report to this file");
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used == 0 || used != item.size()) throw hessborn::SpecError("--at: cannot parse \"" + item + "\"");
    out.push_back(v);
  }
  if (out.empty()) throw hessborn::SpecError("--at: no coordinates given");
  return out;
}

int emit(const RunResult& result) {
  std::cout << hessborn::render(result.report);
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hessian structures and integrable Born structures on tangent bundles"};
  app.require_subcommand(1);

  RunConfig config;
  std::string corpus = "builtin";
  std::string at;
  std::string report;

  auto* list = app.add_subcommand("list-examples", "print the built-in spec names");

  auto* check = app.add_subcommand("check", "run every check on one spec and print the JSON report");
  check->add_option("spec", config.spec_source, "built-in example name or spec file")->required();
  add_sampling_options(check, config, report);

  auto* theorem = app.add_subcommand("theorem", "Hessian vs integrability crosscheck over a corpus");
  theorem->add_option("--corpus", corpus, "\"builtin\" or a directory of spec files")->capture_default_str();
  add_sampling_options(theorem, config, report);

  auto* chart = app.add_subcommand("affine-chart", "build the exponential chart and check Gamma vanishes in it");
  chart->add_option("spec", config.spec_source, "built-in example name or spec file")->required();
  chart->add_option("--at", at, "base point, comma separated")->required();
  add_sampling_options(chart, config, report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hessborn::kExitSpecError;
  }

  if (!report.empty()) config.report_path = report;

  if (*list) {
    for (const auto& name : hessborn::list_examples()) std::cout << name << "\n";
    return hessborn::kExitOk;
  }
  if (*check) return emit(hessborn::run(config));
  if (*theorem) {
    RunResult result;
    try {
      const auto specs = corpus == "builtin" ? hessborn::builtin_corpus() : hessborn::load_corpus(corpus);
      result = hessborn::run_theorem(specs, config);
    } catch (const hessborn::SpecError& e) {
      result = {hessborn::error_object("spec_error", e.what()), hessborn::kExitSpecError};
    }
    return emit(result);
  }
  if (*chart) {
    try {
      config.chart_at = parse_point(at);
    } catch (const hessborn::SpecError& e) {
      return emit({hessborn::error_object("spec_error", e.what()), hessborn::kExitSpecError});
    }
    return emit(hessborn::run_affine_chart(config));
  }
  return hessborn::kExitOk;
}
