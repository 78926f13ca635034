// SPDX-License-Identifier: MIT
/**
 * @file integrability.hpp
 * @brief Nijenhuis tensors and d(omega) of the induced Born structure, the
 *        frame identities behind them, and the Hessian <=> integrable check.
 *
 * Everything is computed in bundle coordinates, where coordinate brackets
 * vanish, and converted to the adapted frame only for identity comparisons.
 * Residuals that grow linearly with the fiber vector are divided by
 * (1 + |y|).
 */
#pragma once

#include <array>
#include <string>
#include <vector>

#include "hessborn/bundle.hpp"

namespace hessborn {

enum class Structure { I, J, K };
std::string to_string(Structure s);

/// N^l_ab = A^m_a d_m A^l_b - A^m_b d_m A^l_a - A^l_m (d_a A^m_b - d_b A^m_a)
/// for a (1,1)-tensor field given as order >= 1 jets over the coordinates.
DenseArray<double> nijenhuis_formula(const Mat<Jet>& A);

/// [U, W]^a = U^b d_b W^a - W^b d_b U^a for jet-valued vector fields.
Eigen::VectorXd lie_bracket(const Vec<Jet>& U, const Vec<Jet>& W);

TensorValue nijenhuis_at(const ManifoldSpec& spec, Structure which, const BundlePoint& point);

/// (dw)_abc = d_a w_bc + d_b w_ca + d_c w_ab for a 2-form given as jets.
DenseArray<double> exterior_derivative(const Mat<Jet>& w);

/// (d omega)_abc = d_a omega_bc + d_b omega_ca + d_c omega_ab.
TensorValue d_omega_at(const ManifoldSpec& spec, const BundlePoint& point);

/// Residual of a computed quantity against +RHS and -RHS.
struct SignFit {
  double residual_plus = 0.0;
  double residual_minus = 0.0;
  /// Max-norm of the right-hand side; the sign is meaningful only when this
  /// is clearly nonzero.
  double rhs_magnitude = 0.0;
  int best_sign = +1;
  bool determined = false;
  double best_residual() const { return best_sign > 0 ? residual_plus : residual_minus; }
};

/// [H_i,H_j] = -(R^l_ijk y^k) V_l, [V_i,V_j] = 0, [H_i,V_j] = -Gamma^k_ij V_k,
/// each tested against both signs of the printed right-hand side.
struct FrameBracketResiduals {
  SignFit HH, VV, HV;
};

FrameBracketResiduals frame_bracket_residuals(const ManifoldSpec& spec, const BundlePoint& point);

/// Fit of an N_J identity whose right-hand side has a torsion term and a
/// curvature term; each term carries its own sign.
struct NJIdentityFit {
  /// Indexed by (torsion sign, curvature sign): (+,+), (+,-), (-,+), (-,-).
  std::array<double, 4> residuals{};
  int torsion_sign = +1;
  int curvature_sign = +1;
  bool torsion_determined = false;
  bool curvature_determined = false;
  double best_residual() const;
};

/// N_J(H_i,H_j) = T^k_ij H_k - R^l_ijk y^k V_l,
/// N_J(V_i,V_j) = T^k_ij H_k - R^l_ijk y^k V_l,
/// N_J(H_i,V_j) = R^l_ijk y^k H_l - T^k_ij V_k.
struct NJIdentityResiduals {
  NJIdentityFit HH, VV, HV;
};

NJIdentityResiduals nijenhuis_J_identity_residuals(const ManifoldSpec& spec, const BundlePoint& point);

struct PointDetail {
  BundlePoint point;
  double N_I = 0, N_J = 0, N_K = 0, d_omega = 0;
};

struct IntegrabilityReport {
  double maxN_I = 0, maxN_J = 0, maxN_K = 0, max_d_omega = 0;
  bool verdict_integrable = false;
  /// Equal to verdict_integrable for induced structures: for the tangent
  /// bundle construction integrable, strongly integrable and Hessian coincide.
  bool verdict_strong = false;
  HessianVerdict hessian;
  bool hessian_agreement = false;
  std::vector<PointDetail> points;
};

IntegrabilityReport integrability_verdict(const ManifoldSpec& spec, const std::vector<std::vector<double>>& base,
                                          const std::vector<std::vector<double>>& fibers, double tol = kDefaultTol);

struct CrosscheckRow {
  std::string name;
  bool hessian = false;
  bool integrable = false;
  bool agreement = false;
};

struct CrosscheckOptions {
  int base_points = 32;
  int fiber_points = 8;
  double fiber_radius = 1.0;
  std::uint64_t seed = 42;
  double tol = kDefaultTol;
};

/// One row per spec; throws std::invalid_argument on an empty corpus.
std::vector<CrosscheckRow> theorem_crosscheck(const std::vector<ManifoldSpec>& corpus,
                                              const CrosscheckOptions& options = {});

}  // namespace hessborn
