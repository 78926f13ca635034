// SPDX-License-Identifier: MIT
/**
 * @file affine_chart.hpp
 * @brief Affine coordinates for a flat torsion-free connection, built from
 *        its exponential map, and the check that the connection vanishes in
 *        them.
 *
 * The chart sends affine coordinates a to x(a) = exp_{x0}(a): the endpoint at
 * t = 1 of the geodesic through x0 with initial velocity a. Derivatives of
 * x(a) come from pushing order-2 jets through the same RK4 steps, so they are
 * exact for the discrete map.
 */
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hessborn/bundle.hpp"

namespace hessborn {

inline constexpr int kDefaultGeodesicSteps = 64;

class GeodesicExitError : public SpecError {
 public:
  GeodesicExitError(const std::string& what, int step) : SpecError(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

class FlatnessGateError : public SpecError {
 public:
  FlatnessGateError(const std::string& what, double curvature, double torsion)
      : SpecError(what), curvature_(curvature), torsion_(torsion) {}
  double curvature() const { return curvature_; }
  double torsion() const { return torsion_; }

 private:
  double curvature_, torsion_;
};

/// RK4 for x'' + Gamma(x)(x', x') = 0 over t in [0, 1]. Throws
/// GeodesicExitError if any stage leaves the sample box.
std::vector<double> geodesic_integrate(const ManifoldSpec& spec, std::span<const double> x0,
                                       std::span<const double> velocity, int steps = kDefaultGeodesicSteps);

/// Jet-valued variant: velocity jets share one layout; the returned endpoint
/// carries their derivatives.
std::vector<Jet> geodesic_integrate(const ManifoldSpec& spec, std::span<const double> x0,
                                    std::span<const Jet> velocity, int steps = kDefaultGeodesicSteps);

class ChartMap {
 public:
  struct Derivatives {
    Eigen::VectorXd x;
    Eigen::MatrixXd jacobian;               // (k, a) = dx^k / da^a
    std::vector<Eigen::MatrixXd> hessians;  // [k](a, b) = d2 x^k / da^a da^b
  };

  ChartMap(const ManifoldSpec& spec, std::vector<double> base_point, int steps, double radius);

  const std::vector<double>& base_point() const { return x0_; }
  int steps() const { return steps_; }
  /// Geodesics are trusted for |a| <= radius.
  double radius() const { return radius_; }

  std::vector<double> operator()(std::span<const double> a) const;
  Derivatives derivatives_at(std::span<const double> a) const;

 private:
  const ManifoldSpec* spec_;
  std::vector<double> x0_;
  int steps_;
  double radius_;
};

/// Half the distance from x0 to the boundary of the sample box.
double chart_validity_radius(const ManifoldSpec& spec, std::span<const double> x0);

/// Exponential chart at x0. The flatness gate requires max |R| and max |T|
/// <= gate_tol over `gate_points`; otherwise FlatnessGateError.
ChartMap exponential_chart(const ManifoldSpec& spec, std::span<const double> x0,
                           const std::vector<std::vector<double>>& gate_points, int steps = kDefaultGeodesicSteps,
                           double gate_tol = kDefaultCrossTol);

/// Gamma'^c_ab = (da^c/dx^k) [ (dx^i/da^a)(dx^j/da^b) Gamma^k_ij + d2x^k/da^a da^b ].
Christoffel<double> pushforward_connection(const ManifoldSpec& spec, const ChartMap& chart,
                                           std::span<const double> a);

double pushforward_connection_residual(const ManifoldSpec& spec, const ChartMap& chart,
                                       const std::vector<std::vector<double>>& probes);

/// Deterministic probes: the origin plus points drawn from the validity ball.
std::vector<std::vector<double>> chart_probes(const ChartMap& chart, int count, std::uint64_t seed);

/// Max distance of I, J, K from the constant block form when the Born
/// structure is rebuilt in the constructed chart, over probes x fibers.
double chart_born_block_residual(const ManifoldSpec& spec, const ChartMap& chart,
                                 const std::vector<std::vector<double>>& probes,
                                 const std::vector<std::vector<double>>& fibers);

struct AffineWitness {
  std::vector<double> base_point;
  double radius = 0.0;
  int steps = 0;
  int probe_count = 0;
  double pushforward_residual = 0.0;
  double born_block_residual = 0.0;
  bool success = false;
};

inline constexpr double kChartTol = 1e-6;

AffineWitness affine_chart_witness(const ManifoldSpec& spec, std::span<const double> x0,
                                   const std::vector<std::vector<double>>& gate_points,
                                   int probe_count = 8, int steps = kDefaultGeodesicSteps, std::uint64_t seed = 42);

}  // namespace hessborn
