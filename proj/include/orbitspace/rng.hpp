#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace orbitspace {

// Deterministic random source; every sampling routine takes one explicitly so
// identical seeds give identical artifacts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }

  Eigen::VectorXd unit_vector(int dim) {
    Eigen::VectorXd v(dim);
    do {
      for (int i = 0; i < dim; ++i) v(i) = gaussian();
    } while (v.norm() < 1e-12);
    return v / v.norm();
  }

  // Uniform in the unit ball.
  Eigen::VectorXd ball_vector(int dim) {
    Eigen::VectorXd v = unit_vector(dim);
    const double r = std::pow(uniform(0.0, 1.0), 1.0 / dim);
    return r * v;
  }

  // Independent stream derived from the base seed; keeps per-cell work
  // independent of execution order.
  Rng fork(std::uint64_t salt) const {
    std::uint64_t s = seed_ ^ (salt * 0x9e3779b97f4a7c15ULL + 0xbf58476d1ce4e5b9ULL);
    s ^= s >> 30;
    s *= 0x94d049bb133111ebULL;
    s ^= s >> 31;
    return Rng(s);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace orbitspace
