// SPDX-License-Identifier: MIT
#include "hessborn/report.hpp"

#include <algorithm>
#include <fstream>

#include "hessborn/affine_chart.hpp"
#include "hessborn/spec_io.hpp"

namespace hessborn {

using nlohmann::json;

namespace {

// Frame identities are compared between two independent pipelines.
constexpr double kIdentityTol = 1e-8;
// Born identities hold by construction; anything above this is a bug.
constexpr double kBornTol = 1e-10;

json config_json(const RunConfig& c) {
  return {{"points", c.base_points},      {"fiber_points", c.fiber_points}, {"fiber_radius", c.fiber_radius},
          {"tol", c.tol},                 {"cross_tol", c.cross_tol},       {"seed", c.seed},
          {"identity_points", c.identity_points}};
}

json hessian_json(const HessianVerdict& h) {
  return {{"is_hessian", h.is_hessian},
          {"max_curvature", h.max_curvature},
          {"max_torsion", h.max_torsion},
          {"max_nabla_g_asymmetry", h.max_nabla_g_asymmetry},
          {"scope", "sampled points of a single chart"}};
}

json two_of_four_json(const TwoOfFour& t) {
  return {{"torsion", t.torsion},
          {"dual_torsion", t.dual_torsion},
          {"nabla_g_asymmetry", t.nabla_g_asymmetry},
          {"mean_minus_levi_civita", t.mean_minus_levi_civita},
          {"holds", t.holds},
          {"count_holding", t.count_holding()},
          {"violation", t.violation}};
}

struct BornSummary {
  BornResiduals worst;
  double min_h_eigenvalue = 0.0;
  double min_omega_singular_value = 0.0;
  bool signature_ok = true;
  bool holds = true;
};

BornSummary born_summary(const ManifoldSpec& spec, const std::vector<BundlePoint>& points) {
  BornSummary s;
  bool first = true;
  const int n = spec.dimension();
  for (const auto& p : points) {
    const auto r = born_compatibility_residuals(born_at(spec, p, Frame::BundleCoordinate));
    auto& w = s.worst;
    w.I_squared = std::max(w.I_squared, r.I_squared);
    w.J_squared = std::max(w.J_squared, r.J_squared);
    w.K_squared = std::max(w.K_squared, r.K_squared);
    w.IJK = std::max(w.IJK, r.IJK);
    w.I_from_h_omega = std::max(w.I_from_h_omega, r.I_from_h_omega);
    w.J_from_k_h = std::max(w.J_from_k_h, r.J_from_k_h);
    w.K_from_omega_k = std::max(w.K_from_omega_k, r.K_from_omega_k);
    w.anticommutation = std::max(w.anticommutation, r.anticommutation);
    w.h_symmetry = std::max(w.h_symmetry, r.h_symmetry);
    w.k_symmetry = std::max(w.k_symmetry, r.k_symmetry);
    w.omega_antisymmetry = std::max(w.omega_antisymmetry, r.omega_antisymmetry);
    s.min_h_eigenvalue = first ? r.h_min_eigenvalue : std::min(s.min_h_eigenvalue, r.h_min_eigenvalue);
    s.min_omega_singular_value =
        first ? r.omega_min_singular_value : std::min(s.min_omega_singular_value, r.omega_min_singular_value);
    s.signature_ok = s.signature_ok && r.k_positive == n && r.k_negative == n;
    s.holds = s.holds && r.holds(kBornTol, n);
    first = false;
  }
  return s;
}

json born_json(const BornSummary& s, int n, std::size_t count) {
  const auto& w = s.worst;
  return {{"points", count},
          {"I_squared", w.I_squared},
          {"J_squared", w.J_squared},
          {"K_squared", w.K_squared},
          {"IJK", w.IJK},
          {"I_from_h_omega", w.I_from_h_omega},
          {"J_from_k_h", w.J_from_k_h},
          {"K_from_omega_k", w.K_from_omega_k},
          {"anticommutation", w.anticommutation},
          {"h_symmetry", w.h_symmetry},
          {"k_symmetry", w.k_symmetry},
          {"omega_antisymmetry", w.omega_antisymmetry},
          {"min_h_eigenvalue", s.min_h_eigenvalue},
          {"min_omega_singular_value", s.min_omega_singular_value},
          {"k_signature", s.signature_ok ? json::array({n, n}) : json(nullptr)},
          {"holds", s.holds}};
}

json integrability_json(const IntegrabilityReport& r, double dual_torsion) {
  json points = json::array();
  for (const auto& p : r.points)
    points.push_back({{"x", p.point.x}, {"y", p.point.y}, {"N_I", p.N_I}, {"N_J", p.N_J}, {"N_K", p.N_K},
                      {"d_omega", p.d_omega}});
  return {{"maxN_I", r.maxN_I},
          {"maxN_J", r.maxN_J},
          {"maxN_K", r.maxN_K},
          {"max_d_omega", r.max_d_omega},
          {"dual_torsion", dual_torsion},
          {"verdict_integrable", r.verdict_integrable},
          {"verdict_strong", r.verdict_strong},
          {"hessian_agreement", r.hessian_agreement},
          {"normalization", "divided by 1 + |y|"},
          {"points", points}};
}

struct SignAccum {
  double plus = 0, minus = 0, rhs = 0;
  void add(const SignFit& f) {
    plus = std::max(plus, f.residual_plus);
    minus = std::max(minus, f.residual_minus);
    rhs = std::max(rhs, f.rhs_magnitude);
  }
  json to_json() const {
    const bool determined = rhs > 1e-6;
    const int sign = minus < plus ? -1 : +1;
    return {{"residual_plus", plus},
            {"residual_minus", minus},
            {"rhs_magnitude", rhs},
            {"sign", determined ? json(sign) : json(nullptr)},
            {"residual", std::min(plus, minus)}};
  }
};

struct NJAccum {
  std::array<double, 4> res{};
  bool torsion = false, curvature = false;
  void add(const NJIdentityFit& f) {
    for (int i = 0; i < 4; ++i) res[i] = std::max(res[i], f.residuals[i]);
    torsion = torsion || f.torsion_determined;
    curvature = curvature || f.curvature_determined;
  }
  double best() const { return *std::min_element(res.begin(), res.end()); }
  json to_json() const {
    static const int signs[4][2] = {{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}};
    const auto idx = std::min_element(res.begin(), res.end()) - res.begin();
    return {{"residuals", {{"++", res[0]}, {"+-", res[1]}, {"-+", res[2]}, {"--", res[3]}}},
            {"torsion_sign", torsion ? json(signs[idx][0]) : json(nullptr)},
            {"curvature_sign", curvature ? json(signs[idx][1]) : json(nullptr)},
            {"residual", best()}};
  }
};

struct SignSummary {
  json doc;
  double worst = 0.0;
};

SignSummary sign_conventions(const ManifoldSpec& spec, const std::vector<BundlePoint>& points) {
  SignAccum hh, vv, hv;
  NJAccum nhh, nvv, nhv;
  for (const auto& p : points) {
    const auto b = frame_bracket_residuals(spec, p);
    hh.add(b.HH);
    vv.add(b.VV);
    hv.add(b.HV);
    const auto nj = nijenhuis_J_identity_residuals(spec, p);
    nhh.add(nj.HH);
    nvv.add(nj.VV);
    nhv.add(nj.HV);
  }
  SignSummary s;
  s.doc = {{"curvature_convention", "R(d_i, d_j) d_k = R^l_ijk d_l"},
           {"points", points.size()},
           {"bracket_HH", hh.to_json()},
           {"bracket_VV", vv.to_json()},
           {"bracket_HV", hv.to_json()},
           {"N_J_HH", nhh.to_json()},
           {"N_J_VV", nvv.to_json()},
           {"N_J_HV", nhv.to_json()}};
  s.worst = std::max({std::min(hh.plus, hh.minus), vv.plus, std::min(hv.plus, hv.minus), nhh.best(), nvv.best(),
                      nhv.best()});
  return s;
}

std::vector<double> box_centre(const ManifoldSpec& spec) {
  std::vector<double> c;
  for (const auto& [lo, hi] : spec.sample_box) c.push_back(0.5 * (lo + hi));
  return c;
}

json witness_json(const AffineWitness& w) {
  return {{"base_point", w.base_point},
          {"radius", w.radius},
          {"steps", w.steps},
          {"probes", w.probe_count},
          {"pushforward_residual", w.pushforward_residual},
          {"born_block_residual", w.born_block_residual},
          {"threshold", kChartTol},
          {"success", w.success}};
}

void write_report(const json& report, const RunConfig& config) {
  if (!config.report_path) return;
  std::ofstream out(*config.report_path);
  if (!out) throw SpecError("cannot write report to " + *config.report_path);
  out << render(report);
}

template <class F>
RunResult guarded(F&& body) {
  RunResult r;
  try {
    r = body();
  } catch (const SpecError& e) {
    r.report = error_object("spec_error", e.what());
    r.exit_code = kExitSpecError;
  } catch (const ParseError& e) {
    r.report = error_object("spec_error", e.what());
    r.exit_code = kExitSpecError;
  } catch (const std::domain_error& e) {
    r.report = error_object("spec_error", e.what());
    r.exit_code = kExitSpecError;
  } catch (const std::exception& e) {
    r.report = error_object("internal_error", e.what());
    r.exit_code = kExitInternalFailure;
  }
  return r;
}

}  // namespace

void RunConfig::validate() const {
  if (base_points < 1) throw SpecError("--points must be at least 1");
  if (fiber_points < 1) throw SpecError("--fiber-points must be at least 1");
  if (!(fiber_radius > 0.0)) throw SpecError("--fiber-radius must be positive");
  if (!(tol > 0.0) || !(cross_tol > 0.0)) throw SpecError("tolerances must be positive");
  if (identity_points < 1) throw SpecError("identity point count must be at least 1");
}

json error_object(const std::string& kind, const std::string& message) {
  return {{"status", "error"}, {"error", {{"kind", kind}, {"message", message}}}};
}

std::string render(const json& report) { return report.dump(2) + "\n"; }

json check_report(const ManifoldSpec& spec, const RunConfig& config) {
  config.validate();
  const auto base = sample_points(spec, config.base_points, config.seed);
  const auto fibers = sample_fibers(spec.dimension(), config.fiber_points, config.fiber_radius, config.seed);
  std::vector<BundlePoint> bundle;
  for (const auto& x : base)
    for (const auto& y : fibers) bundle.push_back({x, y});

  const auto integrability = integrability_verdict(spec, base, fibers, config.tol);
  const auto& hessian = integrability.hessian;
  const auto two = two_of_four_residuals(spec, base, config.tol, config.cross_tol);
  const auto born = born_summary(spec, bundle);
  const std::vector<BundlePoint> identity_points(
      bundle.begin(), bundle.begin() + std::min<std::size_t>(bundle.size(), config.identity_points));
  const auto signs = sign_conventions(spec, identity_points);

  json report;
  report["spec"] = spec_to_json(spec);
  report["config"] = config_json(config);
  report["hessian"] = hessian_json(hessian);
  report["two_of_four"] = two_of_four_json(two);
  report["born_compat"] = born_json(born, spec.dimension(), bundle.size());
  report["integrability"] = integrability_json(integrability, two.dual_torsion);
  report["agreement"] = integrability.hessian_agreement;
  report["sign_conventions"] = signs.doc;

  std::vector<std::string> failures;
  if (!integrability.hessian_agreement) failures.push_back("Hessian verdict and integrability verdict disagree");
  if (two.violation) failures.push_back("two of the four dual-connection conditions hold but not all four");
  if (!born.holds) failures.push_back("Born compatibility identities fail");
  if (signs.worst > kIdentityTol) failures.push_back("frame bracket or N_J identity residual above 1e-8");

  if (hessian.max_curvature <= config.cross_tol && hessian.max_torsion <= config.cross_tol) {
    const auto x0 = config.chart_at ? *config.chart_at : box_centre(spec);
    try {
      const auto w = affine_chart_witness(spec, x0, base);
      report["affine_chart"] = witness_json(w);
      if (!w.success) failures.push_back("affine-chart witness residual above threshold");
    } catch (const GeodesicExitError& e) {
      report["affine_chart"] = {{"success", false}, {"skipped", e.what()}};
    }
  }

  report["status"] = failures.empty() ? json("ok") : json("invariant_failure");
  if (!failures.empty()) report["failures"] = failures;
  return report;
}

RunResult run(const RunConfig& config) {
  return guarded([&] {
    config.validate();
    const auto spec = load_spec(config.spec_source);
    RunResult r;
    r.report = check_report(spec, config);
    r.exit_code = r.report["status"] == "ok" ? kExitOk : kExitInternalFailure;
    write_report(r.report, config);
    return r;
  });
}

RunResult run_theorem(const std::vector<ManifoldSpec>& corpus, const RunConfig& config) {
  return guarded([&] {
    config.validate();
    if (corpus.empty()) throw SpecError("corpus is empty");
    CrosscheckOptions options;
    options.base_points = config.base_points;
    options.fiber_points = config.fiber_points;
    options.fiber_radius = config.fiber_radius;
    options.seed = config.seed;
    options.tol = config.tol;
    const auto rows = theorem_crosscheck(corpus, options);
    json table = json::array();
    int agree = 0;
    for (const auto& row : rows) {
      table.push_back(
          {{"spec", row.name}, {"hessian", row.hessian}, {"integrable", row.integrable}, {"agreement", row.agreement}});
      agree += row.agreement ? 1 : 0;
    }
    RunResult r;
    r.report = {{"config", config_json(config)},
                {"rows", table},
                {"agreement", std::to_string(agree) + "/" + std::to_string(rows.size())},
                {"status", agree == static_cast<int>(rows.size()) ? "ok" : "invariant_failure"}};
    r.exit_code = agree == static_cast<int>(rows.size()) ? kExitOk : kExitInternalFailure;
    write_report(r.report, config);
    return r;
  });
}

RunResult run_affine_chart(const RunConfig& config) {
  return guarded([&] {
    config.validate();
    const auto spec = load_spec(config.spec_source);
    const auto x0 = config.chart_at ? *config.chart_at : box_centre(spec);
    if (static_cast<int>(x0.size()) != spec.dimension())
      throw SpecError("--at needs " + std::to_string(spec.dimension()) + " coordinates");
    const auto gate = sample_points(spec, config.base_points, config.seed);
    const auto w = affine_chart_witness(spec, x0, gate, 8, kDefaultGeodesicSteps, config.seed);
    RunResult r;
    r.report = {{"spec", spec.name}, {"affine_chart", witness_json(w)}, {"status", w.success ? "ok" : "invariant_failure"}};
    r.exit_code = w.success ? kExitOk : kExitInternalFailure;
    write_report(r.report, config);
    return r;
  });
}

}  // namespace hessborn
