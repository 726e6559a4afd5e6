#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "da2gc/config.hpp"

namespace da2gc {

struct Column {
  std::string name;
  std::string unit;
  std::string description;
};

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
};

struct ExperimentResult {
  Table table;
  bool infeasible = false;  // at least one optimization had no feasible point
  std::vector<std::string> notes;
};

/// Runs one experiment over the cartesian product of its sweep axes (first axis
/// outermost). Output depends only on the spec, never on thread count.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Maximum |Doppler| along a straight track at `altitude_km`, passing the GS
/// with lateral `offset_km`, over positions whose ground range is within
/// `range_km`.
struct DopplerPeak {
  double max_abs_hz = 0.0;
  double position_km = 0.0;  // along-track coordinate of the maximum
  int samples = 0;
};
DopplerPeak doppler_peak(double altitude_km, double offset_km, double range_km, double step_km,
                         double speed_kmh, double frequency_hz);

/// Smallest N_T = ratio * N_R (both perfect squares) whose analytic mean aircraft
/// rate meets the threshold, with the 8-face steering loss at ISD = 2 r_max.
struct ArrayTradeoff {
  bool feasible = false;
  int tx_elements = 0;
  int rx_elements = 0;
  double mean_aircraft_rate_bps = 0.0;
  double zeta_bits = 0.0;
};
ArrayTradeoff minimal_arrays_for_rate(const ScenarioConfig& scenario, double rate_threshold_bps,
                                      int tx_rx_ratio, int max_rx_side,
                                      const AnalyticOptions& options = {});

}  // namespace da2gc
