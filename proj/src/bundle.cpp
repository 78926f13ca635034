// SPDX-License-Identifier: MIT
#include "hessborn/bundle.hpp"

#include <algorithm>
#include <cmath>

#include "hessborn/sampling.hpp"

namespace hessborn {

std::vector<double> BundlePoint::coordinates() const {
  std::vector<double> out = x;
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

double BundlePoint::fiber_norm() const {
  double s = 0.0;
  for (double v : y) s += v * v;
  return std::sqrt(s);
}

BornTensors<double> standard_born(int n) { return adapted_born<double>(Eigen::MatrixXd::Identity(n, n)); }

namespace {

void check_point(const ManifoldSpec& spec, const BundlePoint& point) {
  if (point.dimension() != spec.dimension() || static_cast<int>(point.y.size()) != spec.dimension())
    throw SpecError("bundle point dimension does not match spec '" + spec.name + "'");
}

/// E = [[1, 0], [-A, 1]], E^{-1} = [[1, 0], [A, 1]] with A^k_i = Gamma^k_ij y^j.
template <class S>
std::pair<Mat<S>, Mat<S>> frame_matrices(const Christoffel<S>& gamma, std::span<const S> y) {
  const int n = gamma.dim(0);
  Mat<S> A(n, n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      S acc(0.0);
      for (int j = 0; j < n; ++j) acc += gamma(k, i, j) * y[j];
      A(k, i) = acc;
    }
  Mat<S> E = Mat<S>::Identity(2 * n, 2 * n);
  Mat<S> E_inv = Mat<S>::Identity(2 * n, 2 * n);
  E.bottomLeftCorner(n, n) = -A;
  E_inv.bottomLeftCorner(n, n) = A;
  return {E, E_inv};
}

}  // namespace

FramePair adapted_frame_at(const ManifoldSpec& spec, const BundlePoint& point) {
  check_point(spec, point);
  const auto gamma = values(connection_jets(spec, point.x, 0));
  auto [E, E_inv] = frame_matrices<double>(gamma, point.y);
  return {E, E_inv};
}

BornFrame born_at(const ManifoldSpec& spec, const BundlePoint& point, Frame frame) {
  check_point(spec, point);
  if (frame == Frame::BaseCoordinate) throw std::invalid_argument("born_at: base-coordinate frame is not a bundle frame");
  const Eigen::MatrixXd G = values(metric_jets(spec, point.x, 0));
  BornFrame out;
  const auto adapted = adapted_born<double>(G);
  if (frame == Frame::Adapted) {
    static_cast<BornTensors<double>&>(out) = adapted;
  } else {
    const auto [E, E_inv] = adapted_frame_at(spec, point);
    static_cast<BornTensors<double>&>(out) = to_coordinates(adapted, E, E_inv);
  }
  out.frame = frame;
  out.point = point;
  return out;
}

BundleJets bundle_jets(const ManifoldSpec& spec, const BundlePoint& point, int order) {
  check_point(spec, point);
  const int n = spec.dimension();
  const auto seeds = seed(point.coordinates(), order);
  const std::span<const Jet> xs(seeds.data(), n);
  const std::span<const Jet> ys(seeds.data() + n, n);

  BundleJets out;
  const auto gamma_base = connection_jets(spec, point.x, order);
  out.gamma = Christoffel<Jet>::cube(n, 3);
  for (std::size_t idx = 0; idx < gamma_base.size(); ++idx)
    out.gamma.flat(idx) = compose(gamma_base.flat(idx), point.x, xs);
  const Mat<Jet> g_base = metric_jets(spec, point.x, order);
  out.g = g_base.unaryExpr([&](const Jet& c) { return compose(c, point.x, xs); });

  std::tie(out.E, out.E_inv) = frame_matrices<Jet>(out.gamma, ys);
  out.born = to_coordinates(adapted_born<Jet>(out.g), out.E, out.E_inv);
  return out;
}

// ---------------------------------------------------------------------------

double BornResiduals::max_identity_defect() const {
  return std::max({I_squared, J_squared, K_squared, IJK, I_from_h_omega, J_from_k_h, K_from_omega_k, anticommutation,
                   h_symmetry, k_symmetry, omega_antisymmetry});
}

bool BornResiduals::holds(double tol, int n) const {
  return max_identity_defect() <= tol && h_min_eigenvalue > 0.0 && omega_min_singular_value > 0.0 &&
         k_positive == n && k_negative == n;
}

BornResiduals born_compatibility_residuals(const BornFrame& f) {
  using Eigen::MatrixXd;
  const Eigen::Index dim = f.I.rows();
  const MatrixXd id = MatrixXd::Identity(dim, dim);
  BornResiduals r;
  r.I_squared = max_abs(f.I * f.I + id);
  r.J_squared = max_abs(f.J * f.J - id);
  r.K_squared = max_abs(f.K * f.K - id);
  r.IJK = max_abs(f.I * f.J * f.K + id);

  const MatrixXd omega_map = f.omega.transpose();
  r.I_from_h_omega = max_abs(f.I - f.h.partialPivLu().solve(omega_map));
  r.J_from_k_h = max_abs(f.J - f.k.partialPivLu().solve(f.h));
  r.K_from_omega_k = max_abs(f.K - omega_map.partialPivLu().solve(f.k));

  r.anticommutation = std::max({max_abs(f.I - f.J * f.K), max_abs(f.I + f.K * f.J), max_abs(f.J + f.K * f.I),
                                max_abs(f.J - f.I * f.K), max_abs(f.K + f.I * f.J), max_abs(f.K - f.J * f.I)});

  r.h_symmetry = max_abs(f.h - f.h.transpose());
  r.k_symmetry = max_abs(f.k - f.k.transpose());
  r.omega_antisymmetry = max_abs(f.omega + f.omega.transpose());

  const MatrixXd h_sym = 0.5 * (f.h + f.h.transpose());
  r.h_min_eigenvalue = Eigen::SelfAdjointEigenSolver<MatrixXd>(h_sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();

  const MatrixXd k_sym = 0.5 * (f.k + f.k.transpose());
  const Eigen::VectorXd k_eigs = Eigen::SelfAdjointEigenSolver<MatrixXd>(k_sym, Eigen::EigenvaluesOnly).eigenvalues();
  const double cutoff = 1e-12 * std::max(1.0, k_eigs.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < k_eigs.size(); ++i) {
    if (k_eigs(i) > cutoff) ++r.k_positive;
    if (k_eigs(i) < -cutoff) ++r.k_negative;
  }
  r.omega_min_singular_value = Eigen::JacobiSVD<MatrixXd>(f.omega).singularValues().minCoeff();
  return r;
}

AffineFormResiduals affine_chart_form_check(const ManifoldSpec& spec, const BundlePoint& point) {
  bool zero = spec.connection == ConnectionKind::Flat;
  if (spec.connection == ConnectionKind::Explicit)
    zero = std::all_of(spec.gamma.begin(), spec.gamma.end(), [](const Expr& e) { return e.is_literal_zero(); });
  if (!zero)
    throw SpecError("affine chart form check needs connection coefficients identically zero in the chart; '" +
                    spec.name + "' has connection '" + to_string(spec.connection) + "'");
  const BornFrame f = born_at(spec, point, Frame::BundleCoordinate);
  const auto expected = adapted_born<double>(values(metric_jets(spec, point.x, 0)));
  AffineFormResiduals r;
  r.I = max_abs(f.I - expected.I);
  r.J = max_abs(f.J - expected.J);
  r.K = max_abs(f.K - expected.K);
  r.h = max_abs(f.h - expected.h);
  r.k = max_abs(f.k - expected.k);
  r.omega = max_abs(f.omega - expected.omega);
  return r;
}

std::vector<BundlePoint> bundle_samples(const ManifoldSpec& spec, int base_count, int fiber_count, double radius,
                                        std::uint64_t seed) {
  const auto base = sample_points(spec, base_count, seed);
  const auto fibers = sample_fibers(spec.dimension(), fiber_count, radius, seed);
  std::vector<BundlePoint> out;
  out.reserve(base.size() * fibers.size());
  for (const auto& x : base)
    for (const auto& y : fibers) out.push_back({x, y});
  return out;
}

}  // namespace hessborn
