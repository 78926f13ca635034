// SPDX-License-Identifier: MIT
#include "hessborn/affine_chart.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hessborn/sampling.hpp"

namespace hessborn {

namespace {

/// Gamma at a point given as plain values.
std::vector<double> acceleration(const ManifoldSpec& spec, const std::vector<double>& x, const std::vector<double>& v) {
  const int n = spec.dimension();
  const auto gamma = values(connection_jets(spec, x, 0));
  std::vector<double> out(n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[k] -= gamma(k, i, j) * v[i] * v[j];
  return out;
}

/// Gamma at a jet-valued point: expand in the chart coordinates at the value
/// point, then compose with the jets.
std::vector<Jet> acceleration(const ManifoldSpec& spec, const std::vector<Jet>& x, const std::vector<Jet>& v) {
  const int n = spec.dimension();
  int order = 0;
  for (const auto& xi : x) order = std::max(order, xi.order());
  for (const auto& vi : v) order = std::max(order, vi.order());
  std::vector<double> centre(n);
  for (int i = 0; i < n; ++i) centre[i] = x[i].value();
  const auto base = connection_jets(spec, centre, order);
  std::vector<Jet> out(n, Jet(0.0));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Jet& b = base(k, i, j);
        if (b.is_constant() && b.value() == 0.0) continue;
        out[k] -= compose(b, centre, x) * v[i] * v[j];
      }
  return out;
}

template <class S>
std::vector<double> value_vector(const std::vector<S>& xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(value_of(x));
  return out;
}

template <class S>
std::vector<S> axpy(const std::vector<S>& x, double a, const std::vector<S>& y) {
  std::vector<S> out = x;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += S(a) * y[i];
  return out;
}

template <class S>
std::vector<S> integrate(const ManifoldSpec& spec, std::vector<S> x, std::vector<S> v, int steps) {
  if (steps < 1) throw SpecError("geodesic step count must be at least 1");
  const double h = 1.0 / steps;
  auto guard = [&](const std::vector<S>& p, int step) {
    const auto pv = value_vector(p);
    if (!spec.contains(pv)) {
      std::ostringstream os;
      os << "geodesic left the sample box of '" << spec.name << "' during step " << step << " at (";
      for (std::size_t i = 0; i < pv.size(); ++i) os << (i ? ", " : "") << pv[i];
      os << ")";
      throw GeodesicExitError(os.str(), step);
    }
  };
  guard(x, 0);
  for (int step = 1; step <= steps; ++step) {
    const auto k1x = v;
    const auto k1v = acceleration(spec, x, v);
    const auto x2 = axpy(x, h / 2, k1x), v2 = axpy(v, h / 2, k1v);
    guard(x2, step);
    const auto k2x = v2;
    const auto k2v = acceleration(spec, x2, v2);
    const auto x3 = axpy(x, h / 2, k2x), v3 = axpy(v, h / 2, k2v);
    guard(x3, step);
    const auto k3x = v3;
    const auto k3v = acceleration(spec, x3, v3);
    const auto x4 = axpy(x, h, k3x), v4 = axpy(v, h, k3v);
    guard(x4, step);
    const auto k4x = v4;
    const auto k4v = acceleration(spec, x4, v4);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += S(h / 6) * (k1x[i] + S(2.0) * k2x[i] + S(2.0) * k3x[i] + k4x[i]);
      v[i] += S(h / 6) * (k1v[i] + S(2.0) * k2v[i] + S(2.0) * k3v[i] + k4v[i]);
    }
    guard(x, step);
  }
  return x;
}

}  // namespace

std::vector<double> geodesic_integrate(const ManifoldSpec& spec, std::span<const double> x0,
                                       std::span<const double> velocity, int steps) {
  if (static_cast<int>(x0.size()) != spec.dimension() || velocity.size() != x0.size())
    throw SpecError("geodesic_integrate: dimension mismatch");
  return integrate<double>(spec, {x0.begin(), x0.end()}, {velocity.begin(), velocity.end()}, steps);
}

std::vector<Jet> geodesic_integrate(const ManifoldSpec& spec, std::span<const double> x0,
                                    std::span<const Jet> velocity, int steps) {
  if (static_cast<int>(x0.size()) != spec.dimension() || velocity.size() != x0.size())
    throw SpecError("geodesic_integrate: dimension mismatch");
  std::vector<Jet> x;
  for (double xi : x0) x.emplace_back(xi);
  return integrate<Jet>(spec, std::move(x), {velocity.begin(), velocity.end()}, steps);
}

// ---------------------------------------------------------------------------

ChartMap::ChartMap(const ManifoldSpec& spec, std::vector<double> base_point, int steps, double radius)
    : spec_(&spec), x0_(std::move(base_point)), steps_(steps), radius_(radius) {}

std::vector<double> ChartMap::operator()(std::span<const double> a) const {
  return geodesic_integrate(*spec_, x0_, a, steps_);
}

ChartMap::Derivatives ChartMap::derivatives_at(std::span<const double> a) const {
  const int n = spec_->dimension();
  const auto seeds = seed(a, 2);
  const auto x = geodesic_integrate(*spec_, x0_, std::span<const Jet>(seeds), steps_);
  Derivatives d;
  d.x.resize(n);
  d.jacobian.resize(n, n);
  d.hessians.assign(n, Eigen::MatrixXd(n, n));
  for (int k = 0; k < n; ++k) {
    d.x(k) = x[k].value();
    for (int i = 0; i < n; ++i) {
      d.jacobian(k, i) = x[k].partial({i});
      for (int j = 0; j < n; ++j) d.hessians[k](i, j) = x[k].partial({i, j});
    }
  }
  return d;
}

double chart_validity_radius(const ManifoldSpec& spec, std::span<const double> x0) {
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x0.size(); ++i) {
    const auto [lo, hi] = spec.sample_box[i];
    r = std::min({r, x0[i] - lo, hi - x0[i]});
  }
  return 0.5 * std::max(r, 0.0);
}

ChartMap exponential_chart(const ManifoldSpec& spec, std::span<const double> x0,
                           const std::vector<std::vector<double>>& gate_points, int steps, double gate_tol) {
  if (!spec.contains(x0)) throw SpecError("chart base point lies outside the sample box");
  double curvature = 0.0, torsion = 0.0;
  for (const auto& p : gate_points) {
    curvature = std::max(curvature, curvature_at(spec, p).max_abs());
    torsion = std::max(torsion, torsion_at(spec, p).max_abs());
  }
  curvature = std::max(curvature, curvature_at(spec, x0).max_abs());
  torsion = std::max(torsion, torsion_at(spec, x0).max_abs());
  if (curvature > gate_tol || torsion > gate_tol) {
    std::ostringstream os;
    os << "connection of '" << spec.name << "' is not flat and torsion-free (max |R| = " << curvature
       << ", max |T| = " << torsion << "); no affine chart exists";
    throw FlatnessGateError(os.str(), curvature, torsion);
  }
  return ChartMap(spec, {x0.begin(), x0.end()}, steps, chart_validity_radius(spec, x0));
}

Christoffel<double> pushforward_connection(const ManifoldSpec& spec, const ChartMap& chart,
                                           std::span<const double> a) {
  const int n = spec.dimension();
  const auto d = chart.derivatives_at(a);
  Eigen::MatrixXd J_inv;
  try {
    J_inv = inverse<double>(d.jacobian);
  } catch (const SingularMatrixError& e) {
    throw SpecError(std::string("chart Jacobian is singular at probe: ") + e.what());
  }
  const std::vector<double> x(d.x.data(), d.x.data() + n);
  const auto gamma = values(connection_jets(spec, x, 0));
  Christoffel<double> out({n, n, n});
  for (int c = 0; c < n; ++c)
    for (int a1 = 0; a1 < n; ++a1)
      for (int b1 = 0; b1 < n; ++b1) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
          double inner = d.hessians[k](a1, b1);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) inner += d.jacobian(i, a1) * d.jacobian(j, b1) * gamma(k, i, j);
          acc += J_inv(c, k) * inner;
        }
        out(c, a1, b1) = acc;
      }
  return out;
}

double pushforward_connection_residual(const ManifoldSpec& spec, const ChartMap& chart,
                                       const std::vector<std::vector<double>>& probes) {
  double out = 0.0;
  for (const auto& a : probes) out = std::max(out, max_abs(pushforward_connection(spec, chart, a)));
  return out;
}

std::vector<std::vector<double>> chart_probes(const ChartMap& chart, int count, std::uint64_t seed) {
  const int n = static_cast<int>(chart.base_point().size());
  std::vector<std::vector<double>> out{std::vector<double>(n, 0.0)};
  if (count > 1 && chart.radius() > 0.0) {
    auto rest = sample_fibers(n, count - 1, chart.radius(), seed);
    out.insert(out.end(), rest.begin(), rest.end());
  }
  return out;
}

double chart_born_block_residual(const ManifoldSpec& spec, const ChartMap& chart,
                                 const std::vector<std::vector<double>>& probes,
                                 const std::vector<std::vector<double>>& fibers) {
  const int n = spec.dimension();
  const auto blocks = standard_born(n);
  double out = 0.0;
  for (const auto& a : probes) {
    const auto gamma = pushforward_connection(spec, chart, a);
    const auto d = chart.derivatives_at(a);
    const std::vector<double> x(d.x.data(), d.x.data() + n);
    const Eigen::MatrixXd G = d.jacobian.transpose() * values(metric_jets(spec, x, 0)) * d.jacobian;
    const auto adapted = adapted_born<double>(G);
    for (const auto& y : fibers) {
      Eigen::MatrixXd A(n, n);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
          A(k, i) = 0.0;
          for (int j = 0; j < n; ++j) A(k, i) += gamma(k, i, j) * y[j];
        }
      Eigen::MatrixXd E = Eigen::MatrixXd::Identity(2 * n, 2 * n), E_inv = E;
      E.bottomLeftCorner(n, n) = -A;
      E_inv.bottomLeftCorner(n, n) = A;
      const auto coord = to_coordinates(adapted, E, E_inv);
      out = std::max({out, max_abs(coord.I - blocks.I), max_abs(coord.J - blocks.J), max_abs(coord.K - blocks.K)});
    }
  }
  return out;
}

AffineWitness affine_chart_witness(const ManifoldSpec& spec, std::span<const double> x0,
                                   const std::vector<std::vector<double>>& gate_points, int probe_count, int steps,
                                   std::uint64_t seed) {
  const ChartMap chart = exponential_chart(spec, x0, gate_points, steps);
  const auto probes = chart_probes(chart, probe_count, seed);
  const auto fibers = sample_fibers(spec.dimension(), 4, 1.0, seed);
  AffineWitness w;
  w.base_point = chart.base_point();
  w.radius = chart.radius();
  w.steps = steps;
  w.probe_count = static_cast<int>(probes.size());
  w.pushforward_residual = pushforward_connection_residual(spec, chart, probes);
  w.born_block_residual = chart_born_block_residual(spec, chart, probes, fibers);
  w.success = w.pushforward_residual <= kChartTol && w.born_block_residual <= kChartTol;
  return w;
}

}  // namespace hessborn
