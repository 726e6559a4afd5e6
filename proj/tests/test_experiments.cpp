#include <sstream>
#include <string>

#include "doctest.h"

#include "da2gc/config.hpp"
#include "da2gc/experiments.hpp"
#include "da2gc/report.hpp"

using namespace da2gc;
using doctest::Approx;

namespace {

std::string csv_of(const ExperimentSpec& spec) {
  std::ostringstream os;
  write_csv(run_experiment(spec).table, os);
  return os.str();
}

}  // namespace

TEST_CASE("facets experiment") {
  const auto r = run_experiment(default_spec(ExperimentKind::kFacets));
  CHECK(r.table.rows.size() == 5);
  CHECK_FALSE(r.infeasible);
  std::ostringstream os;
  write_csv(r.table, os);
  const std::string text = os.str();
  CHECK(text.rfind("# ", 0) == 0);
  CHECK(text.find("isd_km [km]") != std::string::npos);
}

TEST_CASE("doppler peak") {
  const auto p = doppler_peak(9.0, 0.0, 150.0, 0.5, 1000.0, 18e9);
  CHECK(p.max_abs_hz < 1000.0 / 3.6 * 18e9 / kSpeedOfLight);
  CHECK(p.max_abs_hz > 16000.0);
  CHECK(doppler_peak(13.0, 100.0, 150.0, 0.5, 1000.0, 18e9).max_abs_hz < p.max_abs_hz);
}

TEST_CASE("simulation output is byte identical across threads and reruns") {
  auto spec = default_spec(ExperimentKind::kSimulate);
  spec.trials = 20;
  spec.threads = 1;
  const std::string a = csv_of(spec);
  spec.threads = 4;
  const std::string b = csv_of(spec);
  const std::string c = csv_of(spec);
  CHECK(a == b);
  CHECK(b == c);
  spec.seed = 2;
  CHECK(csv_of(spec) != a);
}

TEST_CASE("cost sweep covers the grid") {
  auto spec = default_spec(ExperimentKind::kTcoSweep);
  spec.search.range_min_km = 60.0;
  spec.search.range_max_km = 100.0;
  spec.search.range_grid_km = 10.0;
  spec.search.tx_side_max = 8;
  spec.search.rx_side_max = 5;
  spec.rate_threshold_bps = 100e6;
  const auto r = run_experiment(spec);
  CHECK(r.table.rows.size() == 25);
  CHECK_FALSE(r.infeasible);
}

TEST_CASE("array tradeoff") {
  ScenarioConfig s;
  s.transmit_power_dbm = 58.0;
  s.cell_range_km = 60.0;
  s.bandwidth_hz = 100e6;
  const auto t = minimal_arrays_for_rate(s, 1.2e9, 4, 40);
  CHECK(t.feasible);
  CHECK(t.tx_elements == 4 * t.rx_elements);
  CHECK(t.mean_aircraft_rate_bps >= 1.2e9);
  const auto smaller = minimal_arrays_for_rate(s, 0.5e9, 4, 40);
  CHECK(smaller.tx_elements <= t.tx_elements);
  CHECK_FALSE(minimal_arrays_for_rate(s, 1e13, 4, 5).feasible);
}
