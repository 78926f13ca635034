// SPDX-License-Identifier: MIT
/**
 * @file manifold.hpp
 * @brief Base-manifold tensor algebra for a single-chart (nabla, g) pair.
 *
 * Conventions used throughout:
 *  - Christoffel arrays are indexed (k, i, j) for Gamma^k_ij, with
 *    nabla_{d_i} d_j = Gamma^k_ij d_k.
 *  - Torsion T^k_ij = Gamma^k_ij - Gamma^k_ji.
 *  - Curvature R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik
 *                        + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik,
 *    i.e. R(d_i, d_j) d_k = R^l_ijk d_l, stored as (l, i, j, k).
 *  - (nabla g)_{i;jk} = (nabla_{d_i} g)(d_j, d_k), stored as (i, j, k).
 */
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hessborn/expr.hpp"
#include "hessborn/tensor.hpp"

namespace hessborn {

/// Problem with a manifold spec or run configuration (bad input, not a bug).
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Metric failed the positive-definiteness check at a point.
class NonSpdMetricError : public SpecError {
 public:
  NonSpdMetricError(const std::string& what, double pivot) : SpecError(what), pivot_(pivot) {}
  double smallest_pivot() const { return pivot_; }

 private:
  double pivot_;
};

enum class ConnectionKind { Flat, LeviCivita, HessianDual, Explicit };

std::string to_string(ConnectionKind kind);
ConnectionKind connection_kind_from_string(const std::string& s);

struct ManifoldSpec {
  std::string name;
  std::vector<std::string> coords;
  /// n*n row-major component grid; empty when the metric is a potential.
  std::vector<Expr> metric_components;
  std::optional<Expr> potential;
  ConnectionKind connection = ConnectionKind::Flat;
  /// n*n*n grid for Gamma^k_ij at offset (k*n + i)*n + j; explicit kind only.
  std::vector<Expr> gamma;
  std::vector<std::pair<double, double>> sample_box;

  int dimension() const { return static_cast<int>(coords.size()); }
  bool contains(std::span<const double> p) const;
};

/// Metric at a point: the value tensor and its jets over the n base
/// coordinates through the requested order.
struct MetricField {
  TensorValue g;
  Mat<Jet> jets;
};

// --- base jets ---------------------------------------------------------------
// Each returns jets over the n chart coordinates seeded at p, of order q.

Mat<Jet> metric_jets(const ManifoldSpec& spec, std::span<const double> p, int order);
Christoffel<Jet> connection_jets(const ManifoldSpec& spec, std::span<const double> p, int order);
Christoffel<Jet> levi_civita_jets(const ManifoldSpec& spec, std::span<const double> p, int order);
Christoffel<Jet> dual_connection_jets(const ManifoldSpec& spec, std::span<const double> p, int order);

// --- pointwise formulas ------------------------------------------------------

/// Gamma^k_ij = 1/2 g^kl (d_i g_lj + d_j g_li - d_l g_ij).
template <class S>
Christoffel<S> levi_civita_formula(const Mat<S>& g_inv, const std::vector<Mat<S>>& dg) {
  const int n = static_cast<int>(g_inv.rows());
  auto out = Christoffel<S>::cube(n, 3);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        S acc(0.0);
        for (int l = 0; l < n; ++l) acc += g_inv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        out(k, i, j) = S(0.5) * acc;
      }
  return out;
}

/// Gamma*^l_ik = g^lj (d_i g_jk - Gamma^m_ij g_mk).
template <class S>
Christoffel<S> dual_formula(const Mat<S>& g, const Mat<S>& g_inv, const std::vector<Mat<S>>& dg,
                            const Christoffel<S>& gamma) {
  const int n = static_cast<int>(g.rows());
  auto out = Christoffel<S>::cube(n, 3);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      std::vector<S> rhs(n, S(0.0));
      for (int j = 0; j < n; ++j) {
        S acc = dg[i](j, k);
        for (int m = 0; m < n; ++m) acc -= gamma(m, i, j) * g(m, k);
        rhs[j] = acc;
      }
      for (int l = 0; l < n; ++l) {
        S acc(0.0);
        for (int j = 0; j < n; ++j) acc += g_inv(l, j) * rhs[j];
        out(l, i, k) = acc;
      }
    }
  return out;
}

template <class S>
DenseArray<S> torsion_formula(const Christoffel<S>& gamma) {
  const int n = gamma.dim(0);
  auto out = DenseArray<S>::cube(n, 3);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(k, i, j) = gamma(k, i, j) - gamma(k, j, i);
  return out;
}

/// dgamma[m] holds d_m Gamma.
template <class S>
DenseArray<S> curvature_formula(const Christoffel<S>& gamma, const std::vector<Christoffel<S>>& dgamma) {
  const int n = gamma.dim(0);
  auto out = DenseArray<S>::cube(n, 4);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          S acc = dgamma[i](l, j, k) - dgamma[j](l, i, k);
          for (int m = 0; m < n; ++m) acc += gamma(l, i, m) * gamma(m, j, k) - gamma(l, j, m) * gamma(m, i, k);
          out(l, i, j, k) = acc;
        }
  return out;
}

/// (nabla g)_{i;jk} = d_i g_jk - Gamma^l_ij g_lk - Gamma^l_ik g_jl.
template <class S>
DenseArray<S> nabla_g_formula(const Mat<S>& g, const std::vector<Mat<S>>& dg, const Christoffel<S>& gamma) {
  const int n = static_cast<int>(g.rows());
  auto out = DenseArray<S>::cube(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        S acc = dg[i](j, k);
        for (int l = 0; l < n; ++l) acc -= gamma(l, i, j) * g(l, k) + gamma(l, i, k) * g(j, l);
        out(i, j, k) = acc;
      }
  return out;
}

/// max over index permutations sigma of max |A - sigma A| for a rank-3 array.
double total_asymmetry(const DenseArray<double>& a);

// --- tensor values at a point ------------------------------------------------

MetricField metric_at(const ManifoldSpec& spec, std::span<const double> p, int order = 1);
TensorValue connection_at(const ManifoldSpec& spec, std::span<const double> p);
TensorValue levi_civita_at(const ManifoldSpec& spec, std::span<const double> p);
TensorValue torsion_at(const ManifoldSpec& spec, std::span<const double> p);
TensorValue curvature_at(const ManifoldSpec& spec, std::span<const double> p);
TensorValue dual_connection_at(const ManifoldSpec& spec, std::span<const double> p);

struct NablaG {
  TensorValue tensor;
  double asymmetry = 0.0;
};
NablaG nabla_g_at(const ManifoldSpec& spec, std::span<const double> p);

/// max |d_i g_jk - Gamma^l_ij g_lk - g_jl Gamma*^l_ik| at p.
double dual_identity_residual(const ManifoldSpec& spec, std::span<const double> p);

// --- verdicts ----------------------------------------------------------------

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kDefaultCrossTol = 1e-7;

struct HessianVerdict {
  bool is_hessian = false;
  double max_curvature = 0.0;
  double max_torsion = 0.0;
  double max_nabla_g_asymmetry = 0.0;
};

HessianVerdict hessian_verdict(const ManifoldSpec& spec, const std::vector<std::vector<double>>& points,
                               double tol = kDefaultTol);

/// Residuals of the four conditions: (a) torsion of nabla, (b) torsion of the
/// dual, (c) asymmetry of nabla g, (d) |(Gamma + Gamma*)/2 - Gamma^LC|.
struct TwoOfFour {
  double torsion = 0.0;
  double dual_torsion = 0.0;
  double nabla_g_asymmetry = 0.0;
  double mean_minus_levi_civita = 0.0;
  std::array<bool, 4> holds{};
  /// At least two conditions hold at tol but one exceeds cross_tol.
  bool violation = false;

  std::array<double, 4> residuals() const {
    return {torsion, dual_torsion, nabla_g_asymmetry, mean_minus_levi_civita};
  }
  int count_holding() const;
};

TwoOfFour two_of_four_residuals(const ManifoldSpec& spec, const std::vector<std::vector<double>>& points,
                                double tol = kDefaultTol, double cross_tol = kDefaultCrossTol);

}  // namespace hessborn
