// SPDX-License-Identifier: MIT
#include "hessborn/manifold.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace hessborn {

namespace {

std::vector<Jet> base_seeds(std::span<const double> p, int order) {
  const int n = static_cast<int>(p.size());
  std::vector<Jet> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(Jet::variable(n, order, i, p[i]));
  return out;
}

void require_inside(const ManifoldSpec& spec, std::span<const double> p) {
  if (static_cast<int>(p.size()) != spec.dimension())
    throw SpecError("point has " + std::to_string(p.size()) + " coordinates, spec '" + spec.name + "' has " +
                    std::to_string(spec.dimension()));
  if (!spec.contains(p)) {
    std::ostringstream os;
    os << "point (";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ") lies outside the sample box of '" << spec.name << "'";
    throw SpecError(os.str());
  }
}

std::vector<Mat<Jet>> partials(const Mat<Jet>& m, int n) {
  std::vector<Mat<Jet>> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(derivative(m, i));
  return out;
}

std::vector<Eigen::MatrixXd> partial_values(const Mat<Jet>& m, int n) {
  std::vector<Eigen::MatrixXd> out;
  for (int i = 0; i < n; ++i) out.push_back(values(derivative(m, i)));
  return out;
}

Christoffel<Jet> zero_connection(int n, int order) { return Christoffel<Jet>::cube(n, 3, Jet::zero(n, order)); }

std::vector<double> to_vector(std::span<const double> p) { return {p.begin(), p.end()}; }

}  // namespace

std::string to_string(ConnectionKind kind) {
  switch (kind) {
    case ConnectionKind::Flat: return "flat";
    case ConnectionKind::LeviCivita: return "levi-civita";
    case ConnectionKind::HessianDual: return "hessian-dual";
    case ConnectionKind::Explicit: return "explicit";
  }
  return "unknown";
}

ConnectionKind connection_kind_from_string(const std::string& s) {
  if (s == "flat") return ConnectionKind::Flat;
  if (s == "levi-civita") return ConnectionKind::LeviCivita;
  if (s == "hessian-dual") return ConnectionKind::HessianDual;
  if (s == "explicit") return ConnectionKind::Explicit;
  throw SpecError("unknown connection kind \"" + s + "\"");
}

bool ManifoldSpec::contains(std::span<const double> p) const {
  if (p.size() != sample_box.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto [lo, hi] = sample_box[i];
    const double slack = 1e-9 * std::max(1.0, hi - lo);
    if (!(p[i] >= lo - slack && p[i] <= hi + slack)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Mat<Jet> metric_jets(const ManifoldSpec& spec, std::span<const double> p, int order) {
  require_inside(spec, p);
  const int n = spec.dimension();
  Mat<Jet> g(n, n);
  if (spec.potential) {
    const Jet phi = spec.potential->evaluate(std::span<const Jet>(base_seeds(p, order + 2)));
    for (int i = 0; i < n; ++i) {
      const Jet di = phi.derivative(i);
      for (int j = 0; j < n; ++j) g(i, j) = di.derivative(j);
    }
  } else {
    const auto xs = base_seeds(p, order);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = spec.metric_components[i * n + j].evaluate(std::span<const Jet>(xs));
  }
  const double pivot = smallest_cholesky_pivot(values(g));
  if (!(pivot > 0.0)) {
    std::ostringstream os;
    os << "metric of '" << spec.name << "' is not positive definite at (";
    for (int i = 0; i < n; ++i) os << (i ? ", " : "") << p[i];
    os << "): smallest Cholesky pivot " << pivot;
    throw NonSpdMetricError(os.str(), pivot);
  }
  return g;
}

Christoffel<Jet> levi_civita_jets(const ManifoldSpec& spec, std::span<const double> p, int order) {
  const int n = spec.dimension();
  const Mat<Jet> g = metric_jets(spec, p, order + 1);
  const Mat<Jet> g_inv = inverse(truncated(g, order));
  return levi_civita_formula(g_inv, partials(g, n));
}

Christoffel<Jet> connection_jets(const ManifoldSpec& spec, std::span<const double> p, int order) {
  require_inside(spec, p);
  const int n = spec.dimension();
  switch (spec.connection) {
    case ConnectionKind::Flat: return zero_connection(n, order);
    case ConnectionKind::LeviCivita: return levi_civita_jets(spec, p, order);
    case ConnectionKind::HessianDual: {
      const Mat<Jet> g = metric_jets(spec, p, order + 1);
      const Mat<Jet> g_q = truncated(g, order);
      return dual_formula(g_q, inverse(g_q), partials(g, n), zero_connection(n, order));
    }
    case ConnectionKind::Explicit: {
      const auto xs = base_seeds(p, order);
      auto out = Christoffel<Jet>::cube(n, 3);
      for (std::size_t idx = 0; idx < out.size(); ++idx)
        out.flat(idx) = spec.gamma[idx].evaluate(std::span<const Jet>(xs));
      return out;
    }
  }
  throw SpecError("unhandled connection kind");
}

Christoffel<Jet> dual_connection_jets(const ManifoldSpec& spec, std::span<const double> p, int order) {
  const int n = spec.dimension();
  const Mat<Jet> g = metric_jets(spec, p, order + 1);
  const Mat<Jet> g_q = truncated(g, order);
  return dual_formula(g_q, inverse(g_q), partials(g, n), connection_jets(spec, p, order));
}

// ---------------------------------------------------------------------------

double total_asymmetry(const DenseArray<double>& a) {
  const int n = a.dim(0);
  constexpr std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  double out = 0.0;
  std::array<int, 3> idx{};
  for (idx[0] = 0; idx[0] < n; ++idx[0])
    for (idx[1] = 0; idx[1] < n; ++idx[1])
      for (idx[2] = 0; idx[2] < n; ++idx[2])
        for (const auto& s : perms)
          out = std::max(out, std::abs(a(idx[0], idx[1], idx[2]) - a(idx[s[0]], idx[s[1]], idx[s[2]])));
  return out;
}

MetricField metric_at(const ManifoldSpec& spec, std::span<const double> p, int order) {
  if (order < 0 || order > kMaxJetOrder - 2) throw std::invalid_argument("metric_at: unsupported jet order");
  MetricField out;
  out.jets = metric_jets(spec, p, order);
  const int n = spec.dimension();
  DenseArray<double> c({n, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c(i, j) = out.jets(i, j).value();
  out.g = TensorValue(std::move(c), "ll", Frame::BaseCoordinate, to_vector(p));
  return out;
}

TensorValue connection_at(const ManifoldSpec& spec, std::span<const double> p) {
  return {values(connection_jets(spec, p, 0)), "ull", Frame::BaseCoordinate, to_vector(p)};
}

TensorValue levi_civita_at(const ManifoldSpec& spec, std::span<const double> p) {
  return {values(levi_civita_jets(spec, p, 0)), "ull", Frame::BaseCoordinate, to_vector(p)};
}

TensorValue torsion_at(const ManifoldSpec& spec, std::span<const double> p) {
  return {torsion_formula(values(connection_jets(spec, p, 0))), "ull", Frame::BaseCoordinate, to_vector(p)};
}

TensorValue curvature_at(const ManifoldSpec& spec, std::span<const double> p) {
  const int n = spec.dimension();
  const Christoffel<Jet> gamma = connection_jets(spec, p, 1);
  std::vector<Christoffel<double>> dgamma;
  for (int m = 0; m < n; ++m) {
    Christoffel<double> d({n, n, n});
    for (std::size_t idx = 0; idx < d.size(); ++idx) d.flat(idx) = gamma.flat(idx).partial({m});
    dgamma.push_back(std::move(d));
  }
  return {curvature_formula(values(gamma), dgamma), "ulll", Frame::BaseCoordinate, to_vector(p)};
}

TensorValue dual_connection_at(const ManifoldSpec& spec, std::span<const double> p) {
  return {values(dual_connection_jets(spec, p, 0)), "ull", Frame::BaseCoordinate, to_vector(p)};
}

NablaG nabla_g_at(const ManifoldSpec& spec, std::span<const double> p) {
  const int n = spec.dimension();
  const Mat<Jet> g = metric_jets(spec, p, 1);
  auto t = nabla_g_formula<double>(values(g), partial_values(g, n), values(connection_jets(spec, p, 0)));
  NablaG out;
  out.asymmetry = total_asymmetry(t);
  out.tensor = TensorValue(std::move(t), "lll", Frame::BaseCoordinate, to_vector(p));
  return out;
}

double dual_identity_residual(const ManifoldSpec& spec, std::span<const double> p) {
  const int n = spec.dimension();
  const Mat<Jet> gj = metric_jets(spec, p, 1);
  const Eigen::MatrixXd g = values(gj);
  const auto dg = partial_values(gj, n);
  const auto gamma = values(connection_jets(spec, p, 0));
  const auto dual = values(dual_connection_jets(spec, p, 0));
  double out = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double r = dg[i](j, k);
        for (int l = 0; l < n; ++l) r -= gamma(l, i, j) * g(l, k) + g(j, l) * dual(l, i, k);
        out = std::max(out, std::abs(r));
      }
  return out;
}

// ---------------------------------------------------------------------------

HessianVerdict hessian_verdict(const ManifoldSpec& spec, const std::vector<std::vector<double>>& points,
                               double tol) {
  if (points.empty()) throw std::invalid_argument("hessian_verdict: no sample points");
  HessianVerdict v;
  for (const auto& p : points) {
    v.max_curvature = std::max(v.max_curvature, curvature_at(spec, p).max_abs());
    v.max_torsion = std::max(v.max_torsion, torsion_at(spec, p).max_abs());
    v.max_nabla_g_asymmetry = std::max(v.max_nabla_g_asymmetry, nabla_g_at(spec, p).asymmetry);
  }
  v.is_hessian = v.max_curvature <= tol && v.max_torsion <= tol && v.max_nabla_g_asymmetry <= tol;
  return v;
}

int TwoOfFour::count_holding() const {
  return static_cast<int>(std::count(holds.begin(), holds.end(), true));
}

TwoOfFour two_of_four_residuals(const ManifoldSpec& spec, const std::vector<std::vector<double>>& points,
                                double tol, double cross_tol) {
  if (points.empty()) throw std::invalid_argument("two_of_four_residuals: no sample points");
  TwoOfFour r;
  for (const auto& p : points) {
    const auto gamma = values(connection_jets(spec, p, 0));
    const auto dual = values(dual_connection_jets(spec, p, 0));
    const auto lc = values(levi_civita_jets(spec, p, 0));
    r.torsion = std::max(r.torsion, max_abs(torsion_formula(gamma)));
    r.dual_torsion = std::max(r.dual_torsion, max_abs(torsion_formula(dual)));
    r.nabla_g_asymmetry = std::max(r.nabla_g_asymmetry, nabla_g_at(spec, p).asymmetry);
    double d = 0.0;
    for (std::size_t idx = 0; idx < gamma.size(); ++idx)
      d = std::max(d, std::abs(0.5 * (gamma.flat(idx) + dual.flat(idx)) - lc.flat(idx)));
    r.mean_minus_levi_civita = std::max(r.mean_minus_levi_civita, d);
  }
  const auto res = r.residuals();
  for (int i = 0; i < 4; ++i) r.holds[i] = res[i] <= tol;
  r.violation = r.count_holding() >= 2 && std::any_of(res.begin(), res.end(), [&](double x) { return x > cross_tol; });
  return r;
}

}  // namespace hessborn
