// SPDX-License-Identifier: MIT
#include "hessborn/sampling.hpp"

#include <array>
#include <cmath>
#include <random>

namespace hessborn {

namespace {

constexpr std::array<int, 8> kPrimes{2, 3, 5, 7, 11, 13, 17, 19};

double radical_inverse(int index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * (index % base);
    index /= base;
    f /= base;
  }
  return result;
}

}  // namespace

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

std::vector<std::vector<double>> sample_points(const ManifoldSpec& spec, int count, std::uint64_t seed) {
  if (count < 1) throw SpecError("sample count must be at least 1");
  const int n = spec.dimension();
  std::mt19937_64 rng(seed);
  std::vector<double> shift(n);
  for (auto& s : shift) s = unit_uniform(rng());
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (int i = 1; i <= count; ++i) {
    std::vector<double> p(n);
    for (int d = 0; d < n; ++d) {
      double u = radical_inverse(i, kPrimes[d]) + shift[d];
      u -= std::floor(u);
      const auto [lo, hi] = spec.sample_box[d];
      const double inset = 0.01 * (hi - lo);
      p[d] = lo + inset + u * (hi - lo - 2 * inset);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::vector<double>> sample_fibers(int dimension, int count, double radius, std::uint64_t seed) {
  if (count < 1) throw SpecError("fiber sample count must be at least 1");
  if (!(radius > 0.0)) throw SpecError("fiber radius must be positive");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    std::vector<double> y(dimension);
    double norm2 = 0.0;
    for (auto& v : y) {
      v = 2.0 * unit_uniform(rng()) - 1.0;
      norm2 += v * v;
    }
    if (norm2 > 1.0) continue;
    for (auto& v : y) v *= radius;
    out.push_back(std::move(y));
  }
  return out;
}

}  // namespace hessborn
