#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "da2gc/analytic_model.hpp"
#include "da2gc/scenario.hpp"

namespace da2gc {

enum class LeaseMode { kPerSite, kSingleSite };

/// How the flight-hours figure enters the transmit-time formula.
enum class FlightHoursBasis {
  kDailyTimesDays,      // 9,347,619 h scaled by 365
  kAnnualTimesHorizon,  // 18,695,238 h per year scaled by the horizon
};

inline constexpr double kDailyFlightHours = 9'347'619.0;
inline constexpr double kAnnualFlightHours = 18'695'238.0;

struct CostModel {
  double base_unit_eur = 10'000.0;
  double element_eur = 1.0;
  double spectrum_eur_per_mhz_pop = 0.01;
  double population = 1.006e9;
  double energy_eur_per_kwh = 0.12;
  double lease_eur_per_month = 1300.0;
  double maintenance_fraction = 0.9;  // over the whole horizon
  double idle_power_w = 118.7;
  double rf_chain_power_w = 1.0;
  double synthesizer_power_w = 2.0;
  double pa_efficiency = 0.22;
  double traffic_growth = 0.036;
  double flight_hours = kDailyFlightHours;
  FlightHoursBasis flight_hours_basis = FlightHoursBasis::kDailyTimesDays;
  double area_km2 = 10.18e6;
  int air_stations = 5000;
  int rf_chains = 60;
  int horizon_years = 10;
  int faces_per_station = 8;
  LeaseMode lease_mode = LeaseMode::kPerSite;

  std::vector<std::string> violations() const;
  void validate() const;
};

/// ceil(area / (pi r^2)).
std::int64_t gs_count(double cell_range_km, double area_km2);

struct Capex {
  double ground = 0.0;
  double air = 0.0;
  double total() const { return ground + air; }
};

/// (C_base + faces N_T C_el) N_GS + (C_base + faces N_R C_el) N_AS.
Capex capex(int tx_elements, int rx_elements, std::int64_t ground_stations, int air_stations,
            const CostModel& cost);

/// Average transmit-state hours of one GS over the horizon with K_average = K_ac / 2.
double transmit_time(double expected_active, std::int64_t ground_stations, const CostModel& cost);

/// Energy cost of all GSs: idle draw for the whole horizon plus the transmit-state
/// draw scaled by the traffic-growth series.
double power_cost(double transmit_power_w, double transmit_hours, std::int64_t ground_stations,
                  const CostModel& cost);

/// Sum over the horizon of (1 + growth)^i.
double growth_factor(const CostModel& cost);

struct DesignLimits {
  double max_power_dbm = 60.0;
  double tx_aperture_m = 0.5;
  double rx_aperture_m = 0.25;
};

struct Candidate {
  double cell_range_km = 75.0;
  int tx_elements = 625;
  int rx_elements = 400;
  double transmit_power_dbm = 60.0;
  double bandwidth_hz = 50e6;
};

struct CostBreakdown {
  double capex_ground = 0.0;
  double capex_air = 0.0;
  double lease = 0.0;
  double maintenance = 0.0;
  double power = 0.0;
  double spectrum = 0.0;
  double total() const;
};

struct ConstraintSlack {
  double rate_bps = 0.0;   // mean aircraft rate minus the threshold
  double power_db = 0.0;   // power limit minus P_T
  double tx_side = 0.0;    // 2 L_T / lambda - sqrt(N_T), must be > 0
  double rx_side = 0.0;    // 2 L_R / lambda - sqrt(N_R), must be > 0
};

struct DeploymentSolution {
  Candidate candidate;
  std::int64_t ground_stations = 0;
  CostBreakdown breakdown;
  double total_eur = 0.0;
  double mean_aircraft_rate_bps = 0.0;
  double expected_active = 0.0;
  double zeta_bits = 0.0;
  ConstraintSlack slack;
  bool feasible = false;
};

struct TcoOptions {
  DesignLimits limits;
  AnalyticOptions analytic;
};

/// Evaluates a candidate: cost breakdown, analytic rate with the 8-face steering
/// loss at ISD = 2 r_max, and constraint slacks. Infeasible candidates are flagged,
/// not rejected.
DeploymentSolution evaluate_tco(const Candidate& candidate, double rate_threshold_bps,
                                const ScenarioConfig& scenario, const CostModel& cost,
                                const TcoOptions& options = {});

struct SearchBounds {
  double range_min_km = 20.0;
  double range_max_km = 150.0;
  double range_grid_km = 1.0;
  double bandwidth_min_hz = 20e6;
  double bandwidth_max_hz = 200e6;
  double bandwidth_grid_hz = 1e6;
  int tx_side_min = 3;
  int tx_side_max = 60;
  int rx_side_min = 3;
  int rx_side_max = 30;
  bool free_power = false;           // also search P_T on a 1 dB grid
  double power_min_dbm = 30.0;
};

struct MinimalBandwidth {
  bool feasible = false;
  double bandwidth_hz = 0.0;
  bool monotone = true;  // rate non-decreasing over the scan grid
};

/// Smallest B in the bounds meeting the rate threshold (grid scan, then bisection
/// inside the first feasible grid step).
MinimalBandwidth minimal_bandwidth(const CellTerms& terms, const ScenarioConfig& scenario,
                                   int tx_elements, int rx_elements, double zeta_bits,
                                   double rate_threshold_bps, const SearchBounds& bounds);

/// Deterministic deployment search for one rate threshold. Cost-independent
/// terms are cached, so repeated optimize() calls over a cost sweep are cheap.
class DeploymentSearch {
 public:
  DeploymentSearch(double rate_threshold_bps, ScenarioConfig scenario, SearchBounds bounds = {},
                   TcoOptions options = {}, unsigned threads = 0);
  ~DeploymentSearch();
  DeploymentSearch(const DeploymentSearch&) = delete;
  DeploymentSearch& operator=(const DeploymentSearch&) = delete;

  /// Minimum-TCO feasible solution; ties go to fewer GSs. Throws InfeasibleError.
  DeploymentSolution optimize(const CostModel& cost) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

DeploymentSolution optimize_deployment(double rate_threshold_bps, const ScenarioConfig& scenario,
                                       const CostModel& cost, const SearchBounds& bounds = {},
                                       const TcoOptions& options = {}, unsigned threads = 0);

}  // namespace da2gc
