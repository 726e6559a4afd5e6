#pragma once

#include <string>
#include <vector>

namespace da2gc {

/// Physical and radio parameters of one DA2GC cell. Defaults are the
/// Monte Carlo reference scenario (18 GHz, 50 MHz, 45 dBm, 20 dB K-factor).
struct ScenarioConfig {
  double carrier_frequency_hz = 18e9;
  double bandwidth_hz = 50e6;
  double transmit_power_dbm = 45.0;
  double link_margin_db = 10.0;
  double rician_factor_db = 20.0;
  double aircraft_density_per_km2 = 30.0 / 18000.0;
  double altitude_min_km = 9.0;
  double altitude_max_km = 13.0;
  double cell_range_km = 75.0;
  double alignment_sigma_deg = 0.0;
  double aircraft_speed_kmh = 1000.0;

  /// Every violated invariant, one message per field (empty when valid).
  std::vector<std::string> violations() const;
  /// Throws ConfigError listing all violations.
  void validate() const;
};

/// Aircraft in one cell: round(density * pi * r_max^2), at least one.
int aircraft_count(const ScenarioConfig& scenario);

}  // namespace da2gc
