#include "da2gc/geometry_channel.hpp"

#include <cmath>
#include <sstream>

#include "da2gc/scenario.hpp"

namespace da2gc {

namespace {

double wrap_2pi(double angle) {
  double a = std::fmod(angle, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  if (a >= 2.0 * kPi) a = 0.0;
  return a;
}

}  // namespace

std::vector<std::string> ScenarioConfig::violations() const {
  std::vector<std::string> out;
  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) out.push_back(msg);
  };
  require(carrier_frequency_hz > 0.0, "carrier_frequency must be > 0");
  require(bandwidth_hz > 0.0, "bandwidth must be > 0");
  require(std::isfinite(transmit_power_dbm), "transmit_power must be finite");
  require(std::isfinite(link_margin_db), "link_margin must be finite");
  require(std::isfinite(rician_factor_db), "rician_factor must be finite");
  require(aircraft_density_per_km2 >= 0.0, "aircraft_density must be >= 0");
  require(altitude_min_km > 0.0, "altitude_min must be > 0");
  require(altitude_min_km < altitude_max_km, "altitude_min must be < altitude_max");
  require(cell_range_km > 0.0, "cell_range must be > 0");
  require(alignment_sigma_deg >= 0.0, "alignment_sigma must be >= 0");
  require(aircraft_speed_kmh >= 0.0, "aircraft_speed must be >= 0");
  return out;
}

void ScenarioConfig::validate() const {
  const auto errors = violations();
  if (errors.empty()) return;
  std::ostringstream os;
  os << "invalid scenario:";
  for (const auto& e : errors) os << "\n  " << e;
  throw ConfigError(os.str());
}

int aircraft_count(const ScenarioConfig& scenario) {
  const double expected =
      scenario.aircraft_density_per_km2 * kPi * scenario.cell_range_km * scenario.cell_range_km;
  return std::max(1, static_cast<int>(std::lround(expected)));
}

LinkGeometry los_angles(const Point3& gs_km, const Point3& aircraft_km) {
  const Point3 rel = aircraft_km - gs_km;
  if (rel.norm() == 0.0) throw DegenerateGeometryError("GS and aircraft positions coincide");
  if (rel.z() <= 0.0) throw DegenerateGeometryError("aircraft must be above the ground station");
  LinkGeometry g;
  g.radial_km = std::hypot(rel.x(), rel.y());
  g.altitude_km = rel.z();
  g.slant_km = rel.norm();
  g.azimuth_rad = g.radial_km == 0.0 ? 0.0 : wrap_2pi(std::atan2(rel.y(), rel.x()));
  g.theta_tx = std::atan2(g.radial_km, g.altitude_km);
  g.phi_tx = g.azimuth_rad;
  // Nadir-pointing AS array sees the GS at the same off-axis angle, opposite azimuth.
  g.theta_rx = g.theta_tx;
  g.phi_rx = wrap_2pi(g.phi_tx + kPi);
  return g;
}

LinkGeometry link_geometry(double radial_km, double altitude_km, double azimuth_rad) {
  const Point3 ac(radial_km * std::cos(azimuth_rad), radial_km * std::sin(azimuth_rad), altitude_km);
  LinkGeometry g = los_angles(Point3::Zero(), ac);
  // Keep the exact inputs instead of values recovered through atan2/hypot.
  g.radial_km = radial_km;
  g.altitude_km = altitude_km;
  g.slant_km = std::hypot(radial_km, altitude_km);
  if (radial_km > 0.0) {
    g.azimuth_rad = wrap_2pi(azimuth_rad);
    g.phi_tx = g.azimuth_rad;
    g.phi_rx = wrap_2pi(g.phi_tx + kPi);
  }
  return g;
}

double free_space_pathloss(double radial_km, double altitude_km, double frequency_hz) {
  const double scale = wavelength_m(frequency_hz) / (4.0 * kPi);
  const double d2_m2 = (radial_km * radial_km + altitude_km * altitude_km) * 1e6;
  return scale * scale / d2_m2;
}

double noise_power_dbm(double bandwidth_hz) {
  return kThermalNoiseDbmPerHz + 10.0 * std::log10(bandwidth_hz);
}

double noise_power_watts(double bandwidth_hz) { return dbm_to_watts(noise_power_dbm(bandwidth_hz)); }

double doppler_shift(const Point3& aircraft_km, const Point3& velocity_kmh, const Point3& gs_km,
                     double frequency_hz) {
  const Point3 rel = aircraft_km - gs_km;
  const double d = rel.norm();
  if (d == 0.0) throw DegenerateGeometryError("zero slant distance in Doppler evaluation");
  const double range_rate_ms = rel.dot(velocity_kmh) / d / 3.6;
  return range_rate_ms / wavelength_m(frequency_hz);
}

double RicianFactor::los_weight() const {
  if (std::isinf(linear_)) return 1.0;
  return linear_ / (linear_ + 1.0);
}

double RicianFactor::nlos_weight() const {
  if (std::isinf(linear_)) return 0.0;
  return 1.0 / (linear_ + 1.0);
}

Eigen::MatrixXcd los_channel(const PlanarArray& tx, const PlanarArray& rx, const LinkGeometry& geom) {
  const auto a_t = steering_vector(tx, geom.theta_tx, geom.phi_tx);
  const auto a_r = steering_vector(rx, geom.theta_rx, geom.phi_rx);
  const double gain = std::sqrt(static_cast<double>(tx.elements()) * rx.elements());
  return gain * a_r * a_t.adjoint();
}

ChannelRealization rician_channel(const PlanarArray& tx, const PlanarArray& rx,
                                  const LinkGeometry& geom, RicianFactor k_factor, Rng& rng) {
  ChannelRealization c;
  c.rician_factor_linear = k_factor.linear();
  c.h_los = los_channel(tx, rx, geom);
  c.h_nlos.resize(rx.elements(), tx.elements());
  for (Eigen::Index col = 0; col < c.h_nlos.cols(); ++col) {
    for (Eigen::Index row = 0; row < c.h_nlos.rows(); ++row) c.h_nlos(row, col) = complex_normal(rng);
  }
  const double w_los = k_factor.los_weight();
  if (w_los == 0.0) {
    c.h = c.h_nlos;
  } else {
    c.h = std::sqrt(w_los) * c.h_los + std::sqrt(k_factor.nlos_weight()) * c.h_nlos;
  }
  return c;
}

}  // namespace da2gc
