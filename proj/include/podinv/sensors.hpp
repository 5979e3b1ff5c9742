#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "podinv/mesh.hpp"

namespace podinv {

struct SensorSet {
  Points points;

  int count() const { return static_cast<int>(points.rows()); }
};

/// k×k cell-centered grid: ((i-1/2)/k, (j-1/2)/k), all strictly interior.
SensorSet make_sensor_grid(int k);

/// d_max/d_min with the fill distance d_max approximated on a
/// probe_resolution² grid over the closed square and d_min exact over pairs.
/// Coincident sensors (d_min = 0) yield +infinity.
double uniformity_ratio(const SensorSet& sensors, int probe_resolution = 256);

double empirical_inner(const Vector& u, const Vector& v);
double empirical_norm(const Vector& u);

enum class NoiseKind { gaussian, uniform };

struct Observation {
  Vector values;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// values = clean + e with e_i i.i.d. mean-zero variance σ² draws from a
/// seeded mt19937_64 stream. The Gaussian path uses Box–Muller on the raw
/// 64-bit words, so identical seeds give identical bytes on any platform.
Observation add_noise(const Vector& clean, double sigma, std::uint64_t seed,
                      NoiseKind kind = NoiseKind::gaussian);

void save_observation_csv(const Observation& obs, const SensorSet& sensors, const std::string& path);
Observation load_observation_csv(const std::string& path, SensorSet* sensors_out = nullptr);

/// Deterministic portable N(0,1) stream (mt19937_64 + Box–Muller).
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  double next_uniform01() {  // in (0,1]
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double next();

 private:
  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace podinv
