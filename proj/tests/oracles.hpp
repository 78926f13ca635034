// SPDX-License-Identifier: MIT
// Independent reference computations for the tests. Nothing here touches the
// jet machinery: derivatives are central differences of plain double
// evaluations, and the sphere quantities are closed forms.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "hessborn/bundle.hpp"
#include "hessborn/manifold.hpp"

namespace oracle {

using Field = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using MatField = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

inline constexpr double kStep = 1e-5;
/// Step for metrics given by a potential, where derivatives of the metric are
/// differences of differences.
inline constexpr double kPotentialStep = 1e-3;

/// Column j is d F / d x^j by central differences.
inline Eigen::MatrixXd fd_jacobian(const Field& F, const Eigen::VectorXd& x, double h = kStep) {
  const Eigen::VectorXd f0 = F(x);
  Eigen::MatrixXd out(f0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    out.col(j) = (F(xp) - F(xm)) / (2 * h);
  }
  return out;
}

/// d M / d x^j by central differences.
inline Eigen::MatrixXd fd_partial(const MatField& M, const Eigen::VectorXd& x, int j, double h = kStep) {
  Eigen::VectorXd xp = x, xm = x;
  xp(j) += h;
  xm(j) -= h;
  return (M(xp) - M(xm)) / (2 * h);
}

/// [U, W] = DW U - DU W.
inline Eigen::VectorXd lie_bracket(const Field& U, const Field& W, const Eigen::VectorXd& x) {
  return fd_jacobian(W, x) * U(x) - fd_jacobian(U, x) * W(x);
}

/// Metric of a spec evaluated with doubles only.
inline Eigen::MatrixXd metric(const hessborn::ManifoldSpec& spec, const Eigen::VectorXd& x) {
  const int n = spec.dimension();
  Eigen::MatrixXd g(n, n);
  std::vector<double> p(x.data(), x.data() + n);
  if (spec.potential) {
    // Second differences of the potential. The step is wide enough that the
    // result can itself be differenced again by levi_civita().
    const double h = kPotentialStep;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        auto at = [&](double si, double sj) {
          auto q = p;
          q[i] += si * h;
          q[j] += sj * h;
          return spec.potential->evaluate(q);
        };
        g(i, j) = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h);
      }
    return g;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = spec.metric_components[i * n + j].evaluate(p);
  return g;
}

/// Levi-Civita symbols from central differences of the metric, indexed
/// (k * n + i) * n + j.
inline std::vector<double> levi_civita(const hessborn::ManifoldSpec& spec, const Eigen::VectorXd& x) {
  const int n = spec.dimension();
  const Eigen::MatrixXd g_inv = metric(spec, x).inverse();
  std::vector<Eigen::MatrixXd> dg;
  const double h = spec.potential ? kPotentialStep : kStep;
  for (int m = 0; m < n; ++m)
    dg.push_back(fd_partial([&](const Eigen::VectorXd& y) { return metric(spec, y); }, x, m, h));
  std::vector<double> out(n * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          out[(k * n + i) * n + j] += 0.5 * g_inv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
  return out;
}

/// Unit round sphere in (theta, phi): the two nonzero Christoffel families.
inline double sphere_gamma_theta_phiphi(double theta) { return -std::sin(theta) * std::cos(theta); }
inline double sphere_gamma_phi_thetaphi(double theta) { return std::cos(theta) / std::sin(theta); }

/// Curvature R^l_ijk from a Christoffel callback, derivatives by central
/// differences; indexed ((l * n + i) * n + j) * n + k.
inline std::vector<double> curvature(const std::function<std::vector<double>(const Eigen::VectorXd&)>& gamma,
                                     const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size());
  auto G = [&](const std::vector<double>& g, int k, int i, int j) { return g[(k * n + i) * n + j]; };
  const auto g0 = gamma(x);
  std::vector<std::vector<double>> dg(n);
  for (int m = 0; m < n; ++m) {
    Eigen::VectorXd xp = x, xm = x;
    xp(m) += kStep;
    xm(m) -= kStep;
    const auto gp = gamma(xp), gm = gamma(xm);
    dg[m].resize(g0.size());
    for (std::size_t idx = 0; idx < g0.size(); ++idx) dg[m][idx] = (gp[idx] - gm[idx]) / (2 * kStep);
  }
  std::vector<double> R(n * n * n * n, 0.0);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = G(dg[i], l, j, k) - G(dg[j], l, i, k);
          for (int m = 0; m < n; ++m) acc += G(g0, l, i, m) * G(g0, m, j, k) - G(g0, l, j, m) * G(g0, m, i, k);
          R[((l * n + i) * n + j) * n + k] = acc;
        }
  return R;
}

/// Nijenhuis tensor of a (1,1)-tensor field straight from the definition
/// A^2[X,Y] - A([AX,Y] + [X,AY]) + [AX,AY], evaluated on the coordinate
/// fields X = d_a, Y = d_b with brackets by central differences.
inline Eigen::VectorXd nijenhuis(const MatField& A, const Eigen::VectorXd& p, int a, int b) {
  const Eigen::Index d = p.size();
  const Field X = [d, a](const Eigen::VectorXd&) { return Eigen::VectorXd(Eigen::VectorXd::Unit(d, a)); };
  const Field Y = [d, b](const Eigen::VectorXd&) { return Eigen::VectorXd(Eigen::VectorXd::Unit(d, b)); };
  const Field AX = [&](const Eigen::VectorXd& q) { return Eigen::VectorXd(A(q).col(a)); };
  const Field AY = [&](const Eigen::VectorXd& q) { return Eigen::VectorXd(A(q).col(b)); };
  const Eigen::MatrixXd Ap = A(p);
  // [X, Y] = 0 for coordinate fields.
  return -Ap * (lie_bracket(AX, Y, p) + lie_bracket(X, AY, p)) + lie_bracket(AX, AY, p);
}

/// Uniform point in the spec's box, shrunk by `inset` on each side.
inline std::vector<double> random_point(const hessborn::ManifoldSpec& spec, std::mt19937_64& rng,
                                        double inset = 0.05) {
  std::vector<double> p;
  for (const auto& [lo, hi] : spec.sample_box) {
    const double w = hi - lo;
    p.push_back(std::uniform_real_distribution<double>(lo + inset * w, hi - inset * w)(rng));
  }
  return p;
}

inline std::vector<double> random_vector(int n, double radius, std::mt19937_64& rng) {
  std::vector<double> v(n);
  for (auto& c : v) c = std::uniform_real_distribution<double>(-radius, radius)(rng);
  return v;
}

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace oracle
