#include <cmath>
#include <random>

#include "doctest.h"
#include "podinv/sensors.hpp"

using namespace podinv;

namespace {

// straightforward double-loop oracle for d_max/d_min
double brute_force_ratio(const Points& pts, int probe) {
  double d_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < pts.rows(); ++i)
    for (int j = 0; j < pts.rows(); ++j)
      if (i != j)
        d_min = std::min(d_min, std::hypot(pts(i, 0) - pts(j, 0), pts(i, 1) - pts(j, 1)));
  double d_max = 0.0;
  for (int a = 0; a < probe; ++a) {
    for (int b = 0; b < probe; ++b) {
      const double x = static_cast<double>(a) / (probe - 1);
      const double y = static_cast<double>(b) / (probe - 1);
      double nearest = std::numeric_limits<double>::infinity();
      for (int i = 0; i < pts.rows(); ++i)
        nearest = std::min(nearest, std::hypot(x - pts(i, 0), y - pts(i, 1)));
      d_max = std::max(d_max, nearest);
    }
  }
  return d_max / d_min;
}

}  // namespace

TEST_SUITE("sensors") {
  TEST_CASE("cell-centered grids") {
    const SensorSet four = make_sensor_grid(2);
    REQUIRE(four.count() == 4);
    const double expected[4][2] = {{0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}, {0.75, 0.75}};
    for (int p = 0; p < 4; ++p) {
      CHECK(four.points(p, 0) == doctest::Approx(expected[p][0]).epsilon(1e-15));
      CHECK(four.points(p, 1) == doctest::Approx(expected[p][1]).epsilon(1e-15));
    }

    CHECK(make_sensor_grid(100).count() == 10000);
    CHECK_THROWS_AS(make_sensor_grid(1), error);

    const SensorSet nine = make_sensor_grid(3);
    double d_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 9; ++i)
      for (int j = i + 1; j < 9; ++j)
        d_min = std::min(d_min, std::hypot(nine.points(i, 0) - nine.points(j, 0),
                                           nine.points(i, 1) - nine.points(j, 1)));
    CHECK(d_min == doctest::Approx(1.0 / 3).epsilon(1e-12));
  }

  TEST_CASE("uniformity ratio of the cell-centered grid is sqrt(2)/2") {
    for (const int k : {2, 5, 8}) {
      const double ratio = uniformity_ratio(make_sensor_grid(k), 4 * k + 1);
      // probe grid contains the corners, so the supremum is exact here
      CHECK(ratio == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
    }
    // the grid also certifies the bounded-ratio assumption with B = 1
    CHECK(uniformity_ratio(make_sensor_grid(10)) <= 1.0);
  }

  TEST_CASE("coincident sensors give an infinite ratio") {
    SensorSet s;
    s.points.resize(2, 2);
    s.points << 0.5, 0.5, 0.5, 0.5;
    CHECK(std::isinf(uniformity_ratio(s)));
  }

  TEST_CASE("uniformity ratio matches the brute-force oracle on a random cloud") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    SensorSet s;
    s.points.resize(50, 2);
    for (int i = 0; i < 50; ++i) {
      s.points(i, 0) = uniform(rng);
      s.points(i, 1) = uniform(rng);
    }
    CHECK(uniformity_ratio(s, 101) == doctest::Approx(brute_force_ratio(s.points, 101)).epsilon(1e-9));
  }

  TEST_CASE("empirical inner product and norm") {
    CHECK(empirical_norm(Vector::Ones(7)) == doctest::Approx(1.0).epsilon(1e-15));
    Vector u(2);
    u << 3.0, 4.0;
    CHECK(empirical_norm(u) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-15));

    Vector mismatched(3);
    CHECK_THROWS_AS(empirical_inner(u, mismatched), error);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 100; ++trial) {
      Vector a(11), b(11);
      for (int i = 0; i < 11; ++i) {
        a[i] = normal(rng);
        b[i] = normal(rng);
      }
      CHECK(std::abs(empirical_inner(a, b)) <= empirical_norm(a) * empirical_norm(b) + 1e-14);
      const double scale = 2.5;
      CHECK(empirical_norm(scale * a) == doctest::Approx(scale * empirical_norm(a)).epsilon(1e-15));
    }
  }

  TEST_CASE("noise is reproducible and vanishes at sigma = 0") {
    const Vector clean = Vector::LinSpaced(64, 0.0, 1.0);
    const Observation silent = add_noise(clean, 0.0, 123);
    CHECK((silent.values - clean).cwiseAbs().maxCoeff() == 0.0);

    const Observation first = add_noise(clean, 1e-3, 99);
    const Observation second = add_noise(clean, 1e-3, 99);
    CHECK((first.values - second.values).cwiseAbs().maxCoeff() == 0.0);
    const Observation other_seed = add_noise(clean, 1e-3, 100);
    CHECK((first.values - other_seed.values).cwiseAbs().maxCoeff() > 0.0);
  }

  TEST_CASE("sample statistics of the gaussian stream") {
    const int n = 100000;
    const double sigma = 1e-3;
    const Observation obs = add_noise(Vector::Zero(n), sigma, 7);
    const double mean = obs.values.mean();
    const double std_dev = std::sqrt((obs.values.array() - mean).square().sum() / (n - 1));
    CHECK(std::abs(mean) < 4.0 * sigma / std::sqrt(static_cast<double>(n)));
    CHECK(std_dev == doctest::Approx(sigma).epsilon(0.02));
  }

  TEST_CASE("uniform noise kind has the requested variance") {
    const int n = 100000;
    const double sigma = 2e-3;
    const Observation obs = add_noise(Vector::Zero(n), sigma, 11, NoiseKind::uniform);
    const double std_dev = std::sqrt(obs.values.array().square().sum() / (n - 1));
    CHECK(std_dev == doctest::Approx(sigma).epsilon(0.02));
    CHECK(obs.values.cwiseAbs().maxCoeff() <= std::sqrt(3.0) * sigma);
  }

  TEST_CASE("noise is unbiased across 200 seeds") {
    const int n = 400;
    const double sigma = 1e-3;
    double sum = 0.0;
    for (int seed = 0; seed < 200; ++seed) sum += add_noise(Vector::Zero(n), sigma, seed).values.sum();
    const double grand_mean = sum / (200.0 * n);
    // 99% band for the mean of 200*400 iid N(0, sigma^2) draws
    CHECK(std::abs(grand_mean) < 2.576 * sigma / std::sqrt(200.0 * n));
  }

  TEST_CASE("observation csv round trip") {
    const SensorSet sensors = make_sensor_grid(3);
    const Observation obs = add_noise(Vector::LinSpaced(9, -1.0, 1.0), 5e-4, 21);
    const std::string path = "obs_roundtrip_test.csv";
    save_observation_csv(obs, sensors, path);
    SensorSet loaded_sensors;
    const Observation loaded = load_observation_csv(path, &loaded_sensors);
    CHECK(loaded.sigma == obs.sigma);
    CHECK(loaded.seed == obs.seed);
    CHECK((loaded.values - obs.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK((loaded_sensors.points - sensors.points).cwiseAbs().maxCoeff() == 0.0);
    std::remove(path.c_str());
  }
}
