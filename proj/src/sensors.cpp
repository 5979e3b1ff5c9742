#include "podinv/sensors.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace podinv {

SensorSet make_sensor_grid(int k) {
  require(k >= 2, errc::invalid_argument, "sensor grid requires k >= 2");
  SensorSet s;
  s.points.resize(k * k, 2);
  int p = 0;
  for (int j = 1; j <= k; ++j) {
    for (int i = 1; i <= k; ++i, ++p) {
      s.points(p, 0) = (i - 0.5) / k;
      s.points(p, 1) = (j - 0.5) / k;
    }
  }
  return s;
}

double uniformity_ratio(const SensorSet& sensors, int probe_resolution) {
  const int n = sensors.count();
  require(n >= 2, errc::invalid_argument, "uniformity ratio needs at least two sensors");
  require(probe_resolution >= 2, errc::invalid_argument, "probe resolution must be >= 2");

  double d_min_sq = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = sensors.points(i, 0) - sensors.points(j, 0);
      const double dy = sensors.points(i, 1) - sensors.points(j, 1);
      d_min_sq = std::min(d_min_sq, dx * dx + dy * dy);
    }
  }
  if (d_min_sq == 0.0) return std::numeric_limits<double>::infinity();

  double d_max_sq = 0.0;
  const int p = probe_resolution;
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < p; ++i) {
      const double x = static_cast<double>(i) / (p - 1);
      const double y = static_cast<double>(j) / (p - 1);
      double nearest = std::numeric_limits<double>::infinity();
      for (int s = 0; s < n; ++s) {
        const double dx = x - sensors.points(s, 0);
        const double dy = y - sensors.points(s, 1);
        nearest = std::min(nearest, dx * dx + dy * dy);
      }
      d_max_sq = std::max(d_max_sq, nearest);
    }
  }
  return std::sqrt(d_max_sq / d_min_sq);
}

double empirical_inner(const Vector& u, const Vector& v) {
  require(u.size() == v.size(), errc::incompatible_operands, "empirical inner product length mismatch");
  require(u.size() > 0, errc::invalid_argument, "empirical inner product of empty vectors");
  return u.dot(v) / static_cast<double>(u.size());
}

double empirical_norm(const Vector& u) {
  return std::sqrt(std::max(0.0, empirical_inner(u, u)));
}

double NormalSampler::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = next_uniform01();
  const double u2 = next_uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Observation add_noise(const Vector& clean, double sigma, std::uint64_t seed, NoiseKind kind) {
  require(sigma >= 0.0, errc::invalid_argument, "noise level must be nonnegative");
  Observation obs;
  obs.values = clean;
  obs.sigma = sigma;
  obs.seed = seed;
  if (sigma == 0.0) return obs;

  NormalSampler sampler(seed);
  if (kind == NoiseKind::gaussian) {
    for (int i = 0; i < clean.size(); ++i) obs.values[i] += sigma * sampler.next();
  } else {
    // uniform on [-√3σ, √3σ] has variance σ²
    const double half_width = std::sqrt(3.0) * sigma;
    for (int i = 0; i < clean.size(); ++i)
      obs.values[i] += half_width * (2.0 * sampler.next_uniform01() - 1.0);
  }
  return obs;
}

namespace {

void write_double(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

}  // namespace

void save_observation_csv(const Observation& obs, const SensorSet& sensors, const std::string& path) {
  require(obs.values.size() == sensors.count(), errc::incompatible_operands,
          "observation length does not match sensor count");
  std::ofstream out(path);
  require(out.good(), errc::io_error, "cannot open " + path + " for writing");
  out << "# n=" << sensors.count() << " sigma=";
  write_double(out, obs.sigma);
  out << " seed=" << obs.seed << "\n";
  out << "x1,x2,value\n";
  for (int i = 0; i < sensors.count(); ++i) {
    write_double(out, sensors.points(i, 0));
    out << ',';
    write_double(out, sensors.points(i, 1));
    out << ',';
    write_double(out, obs.values[i]);
    out << '\n';
  }
  require(out.good(), errc::io_error, "write to " + path + " failed");
}

Observation load_observation_csv(const std::string& path, SensorSet* sensors_out) {
  std::ifstream in(path);
  require(in.good(), errc::io_error, "cannot open " + path);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line.rfind("# n=", 0) == 0, errc::parse_error,
          path + ": missing observation header");

  Observation obs;
  int n = 0;
  {
    std::istringstream hs(line.substr(2));
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      require(eq != std::string::npos, errc::parse_error, path + ": malformed header token " + tok);
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      if (key == "n") n = std::stoi(val);
      else if (key == "sigma") obs.sigma = std::stod(val);
      else if (key == "seed") obs.seed = std::stoull(val);
    }
  }
  require(n > 0, errc::parse_error, path + ": bad sensor count in header");
  std::getline(in, line);  // column names

  Points pts(n, 2);
  obs.values.resize(n);
  for (int i = 0; i < n; ++i) {
    require(static_cast<bool>(std::getline(in, line)), errc::parse_error,
            path + ": truncated after " + std::to_string(i) + " rows");
    std::istringstream ls(line);
    std::string cell;
    double row[3];
    for (double& field : row) {
      require(static_cast<bool>(std::getline(ls, cell, ',')), errc::parse_error, path + ": short row");
      field = std::stod(cell);
    }
    pts(i, 0) = row[0];
    pts(i, 1) = row[1];
    obs.values[i] = row[2];
  }
  if (sensors_out) sensors_out->points = std::move(pts);
  return obs;
}

}  // namespace podinv
