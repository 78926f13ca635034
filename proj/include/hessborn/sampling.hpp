// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <vector>

#include "hessborn/manifold.hpp"

namespace hessborn {

inline constexpr int kDefaultBasePoints = 32;
inline constexpr int kDefaultFiberPoints = 8;
inline constexpr double kDefaultFiberRadius = 1.0;
inline constexpr std::uint64_t kDefaultSeed = 42;

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::uint64_t bits);

/// Deterministic low-discrepancy points in the spec's sample box: a Halton
/// sequence with a seeded Cranley-Patterson rotation, inset by 1% of each
/// side so finite-difference stencils stay inside.
std::vector<std::vector<double>> sample_points(const ManifoldSpec& spec, int count, std::uint64_t seed);

/// Fiber vectors drawn uniformly from the closed ball of the given radius.
std::vector<std::vector<double>> sample_fibers(int dimension, int count, double radius, std::uint64_t seed);

}  // namespace hessborn
