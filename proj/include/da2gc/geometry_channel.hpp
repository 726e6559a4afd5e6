#pragma once

#include <Eigen/Dense>
#include <limits>

#include "da2gc/arrays.hpp"
#include "da2gc/random.hpp"

namespace da2gc {

using Point3 = Eigen::Vector3d;

/// Geometry of one GS-aircraft link. Distances in km, angles in radians.
/// theta_tx is measured from the GS array zenith, theta_rx from the
/// nadir-pointing AS array axis; phi angles are in [0, 2 pi).
struct LinkGeometry {
  double radial_km = 0.0;
  double altitude_km = 0.0;
  double azimuth_rad = 0.0;
  double slant_km = 0.0;
  double theta_tx = 0.0;
  double phi_tx = 0.0;
  double theta_rx = 0.0;
  double phi_rx = 0.0;
};

LinkGeometry los_angles(const Point3& gs_km, const Point3& aircraft_km);

/// Aircraft at radial distance r, altitude h and azimuth above a GS at the origin.
LinkGeometry link_geometry(double radial_km, double altitude_km, double azimuth_rad);

/// Free-space power gain (c / (4 pi f d))^2 for slant distance sqrt(r^2 + h^2).
double free_space_pathloss(double radial_km, double altitude_km, double frequency_hz);

/// Thermal noise power over `bandwidth_hz` at -174 dBm/Hz.
double noise_power_dbm(double bandwidth_hz);
double noise_power_watts(double bandwidth_hz);

/// Doppler shift (Hz) of the GS-aircraft path; positive when the path lengthens.
double doppler_shift(const Point3& aircraft_km, const Point3& velocity_kmh, const Point3& gs_km,
                     double frequency_hz);

/// Rician K-factor. Built from dB or linear values; -inf dB is the pure-NLOS channel.
class RicianFactor {
 public:
  static RicianFactor from_db(double db) {
    return RicianFactor(db == -std::numeric_limits<double>::infinity() ? 0.0 : db_to_linear(db));
  }
  static RicianFactor from_linear(double linear) { return RicianFactor(linear); }

  double linear() const { return linear_; }
  /// Power weights K/(K+1) and 1/(K+1); they sum to one.
  double los_weight() const;
  double nlos_weight() const;

 private:
  explicit RicianFactor(double linear) : linear_(linear) {}
  double linear_;
};

struct ChannelRealization {
  Eigen::MatrixXcd h;        // N_R x N_T
  Eigen::MatrixXcd h_los;    // sqrt(N_T N_R) a_R a_T^H
  Eigen::MatrixXcd h_nlos;   // i.i.d. CN(0, 1)
  double rician_factor_linear = 0.0;
};

/// LOS channel matrix sqrt(N_T N_R) a_R(theta_rx, phi_rx) a_T(theta_tx, phi_tx)^H.
Eigen::MatrixXcd los_channel(const PlanarArray& tx, const PlanarArray& rx, const LinkGeometry& geom);

/// One Rician draw H = sqrt(K/(K+1)) H_los + sqrt(1/(K+1)) H_nlos.
ChannelRealization rician_channel(const PlanarArray& tx, const PlanarArray& rx,
                                  const LinkGeometry& geom, RicianFactor k_factor, Rng& rng);

}  // namespace da2gc
