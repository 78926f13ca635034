// SPDX-License-Identifier: MIT
#include "hessborn/integrability.hpp"

#include <algorithm>
#include <cmath>

#include "hessborn/sampling.hpp"

namespace hessborn {

namespace {

// Below this the right-hand side is treated as zero and its sign as unknown.
constexpr double kSignThreshold = 1e-6;

const Mat<Jet>& pick(const BornTensors<Jet>& born, Structure which) {
  switch (which) {
    case Structure::I: return born.I;
    case Structure::J: return born.J;
    case Structure::K: return born.K;
  }
  return born.I;
}

double normalizer(const BundlePoint& p) { return 1.0 + p.fiber_norm(); }

Vec<Jet> column(const Mat<Jet>& m, int c) { return m.col(c); }

SignFit fit_sign(double plus, double minus, double rhs) {
  SignFit f;
  f.residual_plus = plus;
  f.residual_minus = minus;
  f.rhs_magnitude = rhs;
  f.determined = rhs > kSignThreshold;
  f.best_sign = minus < plus ? -1 : +1;
  return f;
}

}  // namespace

std::string to_string(Structure s) {
  switch (s) {
    case Structure::I: return "I";
    case Structure::J: return "J";
    case Structure::K: return "K";
  }
  return "?";
}

DenseArray<double> nijenhuis_formula(const Mat<Jet>& A) {
  const int d = static_cast<int>(A.rows());
  auto dA = [&](int m, int row, int col) { return A(row, col).partial({m}); };
  DenseArray<double> N({d, d, d});
  for (int l = 0; l < d; ++l)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        double acc = 0.0;
        for (int m = 0; m < d; ++m) {
          acc += A(m, a).value() * dA(m, l, b) - A(m, b).value() * dA(m, l, a);
          acc -= A(l, m).value() * (dA(a, m, b) - dA(b, m, a));
        }
        N(l, a, b) = acc;
      }
  return N;
}

Eigen::VectorXd lie_bracket(const Vec<Jet>& U, const Vec<Jet>& W) {
  const Eigen::Index d = U.size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      out(a) += U(b).value() * W(a).partial({static_cast<int>(b)}) -
                W(b).value() * U(a).partial({static_cast<int>(b)});
  return out;
}

TensorValue nijenhuis_at(const ManifoldSpec& spec, Structure which, const BundlePoint& point) {
  const auto jets = bundle_jets(spec, point, 1);
  return {nijenhuis_formula(pick(jets.born, which)), "ull", Frame::BundleCoordinate, point.coordinates()};
}

DenseArray<double> exterior_derivative(const Mat<Jet>& w) {
  const int d = static_cast<int>(w.rows());
  DenseArray<double> out({d, d, d});
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        out(a, b, c) = w(b, c).partial({a}) + w(c, a).partial({b}) + w(a, b).partial({c});
  return out;
}

TensorValue d_omega_at(const ManifoldSpec& spec, const BundlePoint& point) {
  const auto jets = bundle_jets(spec, point, 1);
  return {exterior_derivative(jets.born.omega), "lll", Frame::BundleCoordinate, point.coordinates()};
}

// ---------------------------------------------------------------------------

FrameBracketResiduals frame_bracket_residuals(const ManifoldSpec& spec, const BundlePoint& point) {
  const int n = spec.dimension();
  const auto jets = bundle_jets(spec, point, 1);
  const auto R = curvature_at(spec, point.x);
  const auto gamma = values(jets.gamma);
  const double scale = normalizer(point);

  double hh_plus = 0, hh_minus = 0, hh_rhs = 0;
  double vv = 0;
  double hv_plus = 0, hv_minus = 0, hv_rhs = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto Hi = column(jets.E, i), Hj = column(jets.E, j);
      const auto Vi = column(jets.E, n + i), Vj = column(jets.E, n + j);

      // Printed right-hand sides in bundle coordinates (V_l = d/dy^l).
      Eigen::VectorXd hh_printed = Eigen::VectorXd::Zero(2 * n);
      Eigen::VectorXd hv_printed = Eigen::VectorXd::Zero(2 * n);
      for (int l = 0; l < n; ++l) {
        double ry = 0.0;
        for (int k = 0; k < n; ++k) ry += R(l, i, j, k) * point.y[k];
        hh_printed(n + l) = -ry;
        hv_printed(n + l) = -gamma(l, i, j);
      }
      const Eigen::VectorXd hh = lie_bracket(Hi, Hj);
      const Eigen::VectorXd hv = lie_bracket(Hi, Vj);
      hh_plus = std::max(hh_plus, (hh - hh_printed).cwiseAbs().maxCoeff() / scale);
      hh_minus = std::max(hh_minus, (hh + hh_printed).cwiseAbs().maxCoeff() / scale);
      hh_rhs = std::max(hh_rhs, hh_printed.cwiseAbs().maxCoeff() / scale);
      hv_plus = std::max(hv_plus, (hv - hv_printed).cwiseAbs().maxCoeff() / scale);
      hv_minus = std::max(hv_minus, (hv + hv_printed).cwiseAbs().maxCoeff() / scale);
      hv_rhs = std::max(hv_rhs, hv_printed.cwiseAbs().maxCoeff() / scale);
      vv = std::max(vv, lie_bracket(Vi, Vj).cwiseAbs().maxCoeff() / scale);
    }
  FrameBracketResiduals out;
  out.HH = fit_sign(hh_plus, hh_minus, hh_rhs);
  out.VV = fit_sign(vv, vv, 0.0);
  out.HV = fit_sign(hv_plus, hv_minus, hv_rhs);
  return out;
}

double NJIdentityFit::best_residual() const {
  const int idx = (torsion_sign > 0 ? 0 : 2) + (curvature_sign > 0 ? 0 : 1);
  return residuals[idx];
}

NJIdentityResiduals nijenhuis_J_identity_residuals(const ManifoldSpec& spec, const BundlePoint& point) {
  const int n = spec.dimension();
  const auto jets = bundle_jets(spec, point, 1);
  const auto N = nijenhuis_formula(jets.born.J);
  const Eigen::MatrixXd E = values(jets.E);
  const Eigen::MatrixXd E_inv = values(jets.E_inv);
  const auto R = curvature_at(spec, point.x);
  const auto T = torsion_at(spec, point.x);
  const double scale = normalizer(point);

  // N(X, Y) in adapted-frame components.
  auto apply = [&](const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * n);
    for (int l = 0; l < 2 * n; ++l)
      for (int a = 0; a < 2 * n; ++a)
        for (int b = 0; b < 2 * n; ++b) v(l) += N(l, a, b) * X(a) * Y(b);
    return Eigen::VectorXd(E_inv * v);
  };

  struct Accum {
    std::array<double, 4> res{};
    double torsion = 0, curvature = 0;
  } hh, vv, hv;

  const int signs[4][2] = {{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd t(n), ry(n);
      for (int k = 0; k < n; ++k) t(k) = T(k, i, j);
      for (int l = 0; l < n; ++l) {
        ry(l) = 0.0;
        for (int k = 0; k < n; ++k) ry(l) += R(l, i, j, k) * point.y[k];
      }
      const Eigen::VectorXd nhh = apply(E.col(i), E.col(j));
      const Eigen::VectorXd nvv = apply(E.col(n + i), E.col(n + j));
      const Eigen::VectorXd nhv = apply(E.col(i), E.col(n + j));
      for (int s = 0; s < 4; ++s) {
        const double st = signs[s][0], sr = signs[s][1];
        Eigen::VectorXd rhs_hh(2 * n), rhs_hv(2 * n);
        rhs_hh << st * t, -sr * ry;
        rhs_hv << sr * ry, -st * t;
        hh.res[s] = std::max(hh.res[s], (nhh - rhs_hh).cwiseAbs().maxCoeff() / scale);
        vv.res[s] = std::max(vv.res[s], (nvv - rhs_hh).cwiseAbs().maxCoeff() / scale);
        hv.res[s] = std::max(hv.res[s], (nhv - rhs_hv).cwiseAbs().maxCoeff() / scale);
      }
      for (auto* acc : {&hh, &vv, &hv}) {
        acc->torsion = std::max(acc->torsion, t.cwiseAbs().maxCoeff() / scale);
        acc->curvature = std::max(acc->curvature, ry.cwiseAbs().maxCoeff() / scale);
      }
    }

  auto finish = [&](const Accum& a) {
    NJIdentityFit f;
    f.residuals = a.res;
    const auto best = std::min_element(a.res.begin(), a.res.end()) - a.res.begin();
    f.torsion_sign = signs[best][0];
    f.curvature_sign = signs[best][1];
    f.torsion_determined = a.torsion > kSignThreshold;
    f.curvature_determined = a.curvature > kSignThreshold;
    return f;
  };
  return {finish(hh), finish(vv), finish(hv)};
}

// ---------------------------------------------------------------------------

IntegrabilityReport integrability_verdict(const ManifoldSpec& spec, const std::vector<std::vector<double>>& base,
                                          const std::vector<std::vector<double>>& fibers, double tol) {
  if (base.empty() || fibers.empty()) throw std::invalid_argument("integrability_verdict: empty sample set");
  IntegrabilityReport r;
  r.hessian = hessian_verdict(spec, base, tol);
  for (const auto& x : base)
    for (const auto& y : fibers) {
      const BundlePoint p{x, y};
      const auto jets = bundle_jets(spec, p, 1);
      const double scale = normalizer(p);
      PointDetail d;
      d.point = p;
      d.N_I = max_abs(nijenhuis_formula(jets.born.I)) / scale;
      d.N_J = max_abs(nijenhuis_formula(jets.born.J)) / scale;
      d.N_K = max_abs(nijenhuis_formula(jets.born.K)) / scale;
      d.d_omega = max_abs(exterior_derivative(jets.born.omega)) / scale;
      r.maxN_I = std::max(r.maxN_I, d.N_I);
      r.maxN_J = std::max(r.maxN_J, d.N_J);
      r.maxN_K = std::max(r.maxN_K, d.N_K);
      r.max_d_omega = std::max(r.max_d_omega, d.d_omega);
      r.points.push_back(std::move(d));
    }
  r.verdict_integrable = r.maxN_I <= tol && r.maxN_J <= tol && r.maxN_K <= tol && r.max_d_omega <= tol;
  r.verdict_strong = r.verdict_integrable;
  r.hessian_agreement = r.verdict_integrable == r.hessian.is_hessian;
  return r;
}

std::vector<CrosscheckRow> theorem_crosscheck(const std::vector<ManifoldSpec>& corpus,
                                              const CrosscheckOptions& options) {
  if (corpus.empty()) throw std::invalid_argument("theorem_crosscheck: empty corpus");
  std::vector<CrosscheckRow> rows;
  for (const auto& spec : corpus) {
    const auto base = sample_points(spec, options.base_points, options.seed);
    const auto fibers = sample_fibers(spec.dimension(), options.fiber_points, options.fiber_radius, options.seed);
    const auto report = integrability_verdict(spec, base, fibers, options.tol);
    rows.push_back({spec.name, report.hessian.is_hessian, report.verdict_integrable, report.hessian_agreement});
  }
  return rows;
}

}  // namespace hessborn
