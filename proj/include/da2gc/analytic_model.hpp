#pragma once

#include "da2gc/scenario.hpp"

namespace da2gc {

/// E[1 / (r^2 + h^2)] in km^-2 for r ~ U(0, r_max), h ~ U(h_min, h_max),
/// by nested adaptive quadrature.
double expected_inverse_square_distance(double r_max_km, double h_min_km, double h_max_km,
                                        double rel_tol = 1e-8);

/// E[rho]: the free-space gain averaged over the same placement law.
double expected_pathloss(double r_max_km, double h_min_km, double h_max_km, double frequency_hz);

/// Expected number of distinct beams hit when `aircraft` selections are drawn
/// uniformly from `choices` beams: (1 - ((k - 1) / k)^K) k.
double expected_active(double aircraft, double choices);

struct BeamSlots {
  double choices = 1.0;     // k, floored, in [1, kMaxChoices]
  double beam_length_km = 0.0;
  double r0_km = 0.0;       // L_Cell, range whose beams fit inside r_max
  bool clipped = false;     // r0 shrunk away from a tan() singularity
};

inline constexpr double kMaxBeamChoices = 1e8;

/// Number of beam slots k = floor((r0 / L_Beam)^2) for beamwidth `beta_rad` and
/// aircraft altitude `altitude_km`.
BeamSlots beam_slot_count(double r_max_km, double altitude_km, double h_min_km, double beta_rad);

enum class SlotAltitude { kMinimum, kMean };
enum class SlotBeamwidth { kTransmitter, kReceiver, kNarrowest };

struct AnalyticOptions {
  SlotAltitude slot_altitude = SlotAltitude::kMinimum;
  SlotBeamwidth slot_beamwidth = SlotBeamwidth::kTransmitter;
};

/// Elements of the array whose beamwidth sets the slot count.
int slot_elements(const AnalyticOptions& options, int tx_elements, int rx_elements);

/// Altitude used in the slot count.
double slot_altitude_km(const AnalyticOptions& options, const ScenarioConfig& scenario);

/// Terms of the estimate that depend only on geometry and array sizes.
struct CellTerms {
  int aircraft = 1;
  BeamSlots slots;
  double expected_active = 1.0;
  double pathloss_expectation = 0.0;
};

CellTerms cell_terms(const ScenarioConfig& scenario, int tx_elements, int rx_elements,
                     const AnalyticOptions& options = {});

struct ThroughputEstimate {
  double total_rate_bps = 0.0;
  double mean_aircraft_rate_bps = 0.0;
  double expected_active = 0.0;
  int aircraft = 0;
  double bits_per_active = 0.0;  // log2(X E[rho]) - zeta before clamping
  double chi_squared = 1.0;
  bool low_snr = false;          // estimate clamped to zero
  CellTerms terms;
};

/// Closed-form cell throughput 2 B K_ac [log2(X E[rho]) - zeta] with
/// X = P_T N_T N_R chi^2 / (2 K_ac N_0 M).
ThroughputEstimate estimate_throughput(const ScenarioConfig& scenario, int tx_elements,
                                       int rx_elements, double zeta_bits,
                                       const AnalyticOptions& options = {});

ThroughputEstimate throughput_from_terms(const CellTerms& terms, const ScenarioConfig& scenario,
                                         int tx_elements, int rx_elements, double zeta_bits);

}  // namespace da2gc
