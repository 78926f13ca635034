// SPDX-License-Identifier: MIT
/**
 * @file bundle.hpp
 * @brief The almost Born structure induced on TM by a pair (nabla, g).
 *
 * Bundle coordinates are (x^1..x^n, y^1..y^n). The adapted frame is
 * (H_1..H_n, V_1..V_n) with H_i = d/dx^i - Gamma^k_ij y^j d/dy^k and
 * V_i = d/dy^i. The change-of-basis matrix E has the frame vectors as its
 * columns, so E = [[1, 0], [-A, 1]] with A^k_i = Gamma^k_ij y^j.
 *
 * Matrix conventions: (1,1)-tensors are stored with the output index as the
 * row. Bilinear forms are stored with the first argument as the row, so a
 * form B acts as the map X -> B(X, .) through B^T. With these conventions
 * I = h^{-1} omega^T, J = k^{-1} h and K = (omega^T)^{-1} k.
 */
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hessborn/manifold.hpp"

namespace hessborn {

struct BundlePoint {
  std::vector<double> x;
  std::vector<double> y;

  int dimension() const { return static_cast<int>(x.size()); }
  /// (x, y) concatenated.
  std::vector<double> coordinates() const;
  double fiber_norm() const;
};

template <class S>
struct BornTensors {
  Mat<S> I, J, K, h, k, omega;
};

struct BornFrame : BornTensors<double> {
  Frame frame = Frame::BundleCoordinate;
  BundlePoint point;
};

/// The six tensors in the adapted frame, built from the metric block G.
template <class S>
BornTensors<S> adapted_born(const Mat<S>& G) {
  const Eigen::Index n = G.rows();
  const Mat<S> one = Mat<S>::Identity(n, n);
  const Mat<S> zero = Mat<S>::Zero(n, n);
  auto block = [n](const Mat<S>& a, const Mat<S>& b, const Mat<S>& c, const Mat<S>& d) {
    Mat<S> m(2 * n, 2 * n);
    m.topLeftCorner(n, n) = a;
    m.topRightCorner(n, n) = b;
    m.bottomLeftCorner(n, n) = c;
    m.bottomRightCorner(n, n) = d;
    return m;
  };
  BornTensors<S> t;
  t.I = block(zero, -one, one, zero);
  t.J = block(zero, one, one, zero);
  t.K = block(one, zero, zero, -one);
  t.h = block(G, zero, zero, G);
  t.k = block(zero, G, G, zero);
  t.omega = block(zero, G, -G, zero);
  return t;
}

/// Mixed tensors conjugate (E M E^{-1}); bilinear forms pull back
/// (E^{-T} B E^{-1}).
template <class S>
BornTensors<S> to_coordinates(const BornTensors<S>& adapted, const Mat<S>& E, const Mat<S>& E_inv) {
  BornTensors<S> t;
  const Mat<S> E_inv_t = E_inv.transpose();
  t.I = E * adapted.I * E_inv;
  t.J = E * adapted.J * E_inv;
  t.K = E * adapted.K * E_inv;
  t.h = E_inv_t * adapted.h * E_inv;
  t.k = E_inv_t * adapted.k * E_inv;
  t.omega = E_inv_t * adapted.omega * E_inv;
  return t;
}

/// The standard Born structure on C^n in coordinates (x, y).
BornTensors<double> standard_born(int n);

struct FramePair {
  Eigen::MatrixXd E;
  Eigen::MatrixXd E_inv;
};

FramePair adapted_frame_at(const ManifoldSpec& spec, const BundlePoint& point);

BornFrame born_at(const ManifoldSpec& spec, const BundlePoint& point, Frame frame = Frame::BundleCoordinate);

/// Everything upstairs as jets over the 2n bundle coordinates at a point.
struct BundleJets {
  Christoffel<Jet> gamma;  // Gamma o pi
  Mat<Jet> g;              // g o pi
  Mat<Jet> E, E_inv;
  BornTensors<Jet> born;   // bundle-coordinate frame
};

BundleJets bundle_jets(const ManifoldSpec& spec, const BundlePoint& point, int order);

struct BornResiduals {
  double I_squared = 0;        // |I^2 + 1|
  double J_squared = 0;        // |J^2 - 1|
  double K_squared = 0;        // |K^2 - 1|
  double IJK = 0;              // |IJK + 1|
  double I_from_h_omega = 0;   // |I - h^{-1} omega^T|
  double J_from_k_h = 0;       // |J - k^{-1} h|
  double K_from_omega_k = 0;   // |K - omega^{-T} k|
  double anticommutation = 0;  // max over I=JK=-KJ, J=-KI=IK, K=-IJ=JI
  double h_symmetry = 0;
  double k_symmetry = 0;
  double omega_antisymmetry = 0;
  double h_min_eigenvalue = 0;
  double omega_min_singular_value = 0;
  int k_positive = 0;
  int k_negative = 0;

  /// Largest identity defect (everything except the spectral quantities).
  double max_identity_defect() const;
  bool holds(double tol, int n) const;
};

BornResiduals born_compatibility_residuals(const BornFrame& frame);

struct AffineFormResiduals {
  double I = 0, J = 0, K = 0, h = 0, k = 0, omega = 0;
  double max_structure() const { return std::max({I, J, K}); }
  double max_all() const { return std::max({I, J, K, h, k, omega}); }
};

/// Distance of the bundle-coordinate Born frame from the constant-block /
/// G-block form. Requires Gamma to vanish identically in the chart.
AffineFormResiduals affine_chart_form_check(const ManifoldSpec& spec, const BundlePoint& point);

/// Cartesian product of base samples and fiber samples.
std::vector<BundlePoint> bundle_samples(const ManifoldSpec& spec, int base_count, int fiber_count, double radius,
                                        std::uint64_t seed);

}  // namespace hessborn
