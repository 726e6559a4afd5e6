#include "da2gc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include "da2gc/analytic_model.hpp"
#include "da2gc/errors.hpp"
#include "da2gc/geometry_channel.hpp"
#include "da2gc/random.hpp"

namespace da2gc {

DopplerPeak doppler_peak(double altitude_km, double offset_km, double range_km, double step_km,
                         double speed_kmh, double frequency_hz) {
  DopplerPeak peak;
  if (std::abs(offset_km) > range_km) return peak;
  const double half = std::sqrt(range_km * range_km - offset_km * offset_km);
  const Point3 gs = Point3::Zero();
  const Point3 velocity(speed_kmh, 0.0, 0.0);
  const int steps = static_cast<int>(std::ceil(2.0 * half / step_km));
  for (int i = 0; i <= steps; ++i) {
    const double x = i == steps ? half : -half + i * step_km;
    const double f = doppler_shift(Point3(x, offset_km, altitude_km), velocity, gs, frequency_hz);
    ++peak.samples;
    if (std::abs(f) > peak.max_abs_hz) {
      peak.max_abs_hz = std::abs(f);
      peak.position_km = x;
    }
  }
  return peak;
}

ArrayTradeoff minimal_arrays_for_rate(const ScenarioConfig& scenario, double rate_threshold_bps,
                                      int tx_rx_ratio, int max_rx_side,
                                      const AnalyticOptions& options) {
  const int root = square_side(tx_rx_ratio);
  if (root < 1) throw ConfigError("tx/rx element ratio must be a perfect square");
  ArrayTradeoff out;
  out.zeta_bits = eight_face_design(2.0 * scenario.cell_range_km, scenario.altitude_min_km).zeta_bits;
  for (int v = 1; v <= max_rx_side; ++v) {
    const int nr = v * v;
    const int nt = root * root * nr;
    const auto est = estimate_throughput(scenario, nt, nr, out.zeta_bits, options);
    if (est.mean_aircraft_rate_bps >= rate_threshold_bps) {
      out.feasible = true;
      out.tx_elements = nt;
      out.rx_elements = nr;
      out.mean_aircraft_rate_bps = est.mean_aircraft_rate_bps;
      return out;
    }
  }
  return out;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string unit_of(const std::string& name) {
  static const std::vector<std::pair<std::string, std::string>> kSuffixes = {
      {"_ghz", "GHz"}, {"_mhz", "MHz"}, {"_mbps", "Mbit/s"}, {"_km2", "1/km^2"}, {"_km", "km"},
      {"_dbm", "dBm"}, {"_db", "dB"},   {"_deg", "deg"},     {"_kmh", "km/h"},  {"_eur_per_mhz_pop", "EUR/MHz/pop"},
      {"_eur_per_kwh", "EUR/kWh"},      {"_eur_per_month", "EUR/month"},      {"_eur", "EUR"},
      {"_w", "W"},     {"_hz", "Hz"},   {"_bits", "bit/use"}, {"_m", "m"}};
  if (name == "aircraft_density_per_km2" || name == "area_km2") return name == "area_km2" ? "km^2" : "1/km^2";
  for (const auto& [suffix, unit] : kSuffixes) {
    if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
      return unit;
  }
  return "1";
}

class Builder {
 public:
  explicit Builder(Table& table) : table_(table) {}

  void begin_row() {
    row_.clear();
    names_.clear();
  }
  // Columns already present in the row (e.g. a swept parameter) are not repeated.
  void add(const std::string& name, const std::string& unit, const std::string& description, Cell value) {
    if (std::find(names_.begin(), names_.end(), name) != names_.end()) return;
    names_.push_back(name);
    if (!frozen_) table_.columns.push_back({name, unit, description});
    row_.push_back(std::move(value));
  }
  void end_row() {
    frozen_ = true;
    table_.rows.push_back(row_);
  }

 private:
  Table& table_;
  std::vector<Cell> row_;
  std::vector<std::string> names_;
  bool frozen_ = false;
};

double axis_or(const std::vector<std::pair<std::string, double>>& point, const std::string& name, double fallback) {
  for (const auto& [n, v] : point) {
    if (n == name) return v;
  }
  return fallback;
}

std::string search_key(const ExperimentSpec& s) {
  auto j = to_json(s);
  for (const char* k : {"cost_model", "sweep", "seed", "output_dir", "threads", "format", "trials", "candidate"}) j.erase(k);
  return j.dump();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  ExperimentResult result;
  Builder b(result.table);

  // Cartesian product of the sweep axes, first axis outermost.
  std::vector<std::size_t> counter(spec.sweep.size(), 0);
  std::size_t total_points = 1;
  for (const auto& a : spec.sweep) total_points *= a.values.size();

  std::map<std::string, std::unique_ptr<DeploymentSearch>> searches;
  double doppler_max = 0.0;

  for (std::size_t point_index = 0; point_index < total_points; ++point_index) {
    std::size_t rem = point_index;
    for (std::size_t i = spec.sweep.size(); i-- > 0;) {
      counter[i] = rem % spec.sweep[i].values.size();
      rem /= spec.sweep[i].values.size();
    }
    ExperimentSpec s = spec;
    std::vector<std::pair<std::string, double>> point;
    for (std::size_t i = 0; i < spec.sweep.size(); ++i) {
      const double v = spec.sweep[i].values[counter[i]];
      apply_parameter(s, spec.sweep[i].parameter, v);
      point.emplace_back(spec.sweep[i].parameter, v);
    }
    s.scenario.validate();

    b.begin_row();
    for (const auto& [name, value] : point) b.add(name, unit_of(name), "sweep parameter", value);
    const std::uint64_t point_seed = derive_seed(spec.seed, point_index);
    const double wavelength = wavelength_m(s.scenario.carrier_frequency_hz);

    switch (spec.kind) {
      case ExperimentKind::kFacets: {
        const double isd = axis_or(point, "isd_km", 2.0 * s.scenario.cell_range_km);
        const FacetDesign d = optimize_facets(isd, s.scenario.altitude_min_km, s.facet_bounds);
        const FacetDesign eight = eight_face_design(isd, s.scenario.altitude_min_km);
        b.add("isd_km", "km", "inter-site distance", isd);
        b.add("rows_n", "1", "optimal rows (elevation scan)", std::int64_t{d.rows});
        b.add("columns_m", "1", "optimal columns (azimuth scan)", std::int64_t{d.columns});
        b.add("faces", "1", "faces of the optimal design", std::int64_t{d.faces});
        b.add("elevation_span_deg", "deg", "elevation span to the cell edge", d.elevation_span_deg);
        b.add("zeta_bits", "bit/use", "worst-case steering loss per face", d.zeta_bits);
        b.add("total_bits", "bit/use", "steering loss times faces", d.total_bits);
        b.add("eight_face_zeta_bits", "bit/use", "steering loss of the n=3, m=7 design", eight.zeta_bits);
        break;
      }
      case ExperimentKind::kDoppler: {
        const double h = axis_or(point, "altitude_km", s.scenario.altitude_min_km);
        const double offset = axis_or(point, "offset_km", 0.0);
        const DopplerPeak p = doppler_peak(h, offset, s.scenario.cell_range_km, s.doppler.track_step_km,
                                           s.scenario.aircraft_speed_kmh, s.scenario.carrier_frequency_hz);
        doppler_max = std::max(doppler_max, p.max_abs_hz);
        b.add("altitude_km", "km", "flight altitude", h);
        b.add("offset_km", "km", "lateral offset of the track from the GS", offset);
        b.add("max_abs_doppler_hz", "Hz", "largest |Doppler| along the track", p.max_abs_hz);
        b.add("position_km", "km", "along-track position of the maximum", p.position_km);
        b.add("samples", "1", "track positions within the cell range", std::int64_t{p.samples});
        b.add("ceiling_hz", "Hz", "v / lambda", kmh_to_ms(s.scenario.aircraft_speed_kmh) / wavelength);
        break;
      }
      case ExperimentKind::kAlignment: {
        const PlanarArray tx = PlanarArray::square(s.tx_elements, wavelength);
        const PlanarArray rx = PlanarArray::square(s.rx_elements, wavelength);
        const AlignmentModel m = alignment_loss(s.scenario.alignment_sigma_deg, s.tx_elements, s.rx_elements);
        const AlignmentSampler sampler{s.scenario.cell_range_km, s.scenario.altitude_min_km, s.alignment_range};
        const AlignmentStats st =
            alignment_monte_carlo(s.scenario.alignment_sigma_deg, tx, rx, sampler, s.trials, point_seed, s.threads);
        b.add("tx_elements", "1", "GS array elements", std::int64_t{s.tx_elements});
        b.add("rx_elements", "1", "AS array elements", std::int64_t{s.rx_elements});
        b.add("sigma_deg", "deg", "pointing error standard deviation", s.scenario.alignment_sigma_deg);
        b.add("draws", "1", "Monte Carlo draws", std::int64_t{st.draws});
        b.add("chi", "1", "analytic amplitude factor", m.chi);
        b.add("chi_squared", "1", "analytic power factor", m.chi_squared);
        b.add("sim_mean", "1", "mean simulated amplitude factor", st.mean);
        b.add("sim_std", "1", "std of simulated amplitude factor", st.stddev);
        b.add("sim_power_mean", "1", "mean simulated power factor", st.power_mean);
        b.add("rel_diff_chi_squared", "1", "|sim_mean / chi_squared - 1|", std::abs(st.mean / m.chi_squared - 1.0));
        b.add("rel_diff_chi", "1", "|sim_mean / chi - 1|", std::abs(st.mean / m.chi - 1.0));
        break;
      }
      case ExperimentKind::kSimulate:
      case ExperimentKind::kRateCurve: {
        const PlanarArray tx = PlanarArray::square(s.tx_elements, wavelength);
        const PlanarArray rx = PlanarArray::square(s.rx_elements, wavelength);
        const MonteCarloStats mc = monte_carlo(s.scenario, tx, rx, s.trials, point_seed, s.simulation, s.threads);
        const ThroughputEstimate est =
            estimate_throughput(s.scenario, s.tx_elements, s.rx_elements, s.simulation.zeta_bits, s.analytic);
        const double k = aircraft_count(s.scenario);
        b.add("tx_elements", "1", "GS array elements", std::int64_t{s.tx_elements});
        b.add("rx_elements", "1", "AS array elements", std::int64_t{s.rx_elements});
        b.add("cell_range_km", "km", "cell range", s.scenario.cell_range_km);
        b.add("aircraft", "1", "aircraft per cell K", static_cast<std::int64_t>(k));
        b.add("trials", "1", "Monte Carlo trials", std::int64_t{mc.trials});
        b.add("mean_active", "1", "mean simulated active aircraft", mc.mean_active);
        b.add("std_active", "1", "std of simulated active aircraft", mc.std_active);
        b.add("analytic_active", "1", "expected active aircraft (closed form)", est.expected_active);
        b.add("mean_total_rate_mbps", "Mbit/s", "mean simulated cell rate", mc.mean_total_rate_bps / 1e6);
        b.add("std_total_rate_mbps", "Mbit/s", "std of simulated cell rate", mc.std_total_rate_bps / 1e6);
        b.add("mean_aircraft_rate_mbps", "Mbit/s", "mean simulated rate per aircraft", mc.mean_aircraft_rate_bps / 1e6);
        b.add("std_aircraft_rate_mbps", "Mbit/s", "std of simulated rate per aircraft", mc.std_aircraft_rate_bps / 1e6);
        b.add("no_interference_aircraft_rate_mbps", "Mbit/s", "mean rate per aircraft without interference",
              mc.mean_no_interference_rate_bps / k / 1e6);
        b.add("analytic_aircraft_rate_mbps", "Mbit/s", "closed-form rate per aircraft", est.mean_aircraft_rate_bps / 1e6);
        b.add("analytic_low_snr", "1", "1 when the closed form was clamped", std::int64_t{est.low_snr ? 1 : 0});
        b.add("rate_rel_diff", "1", "analytic / simulated rate - 1", est.mean_aircraft_rate_bps / mc.mean_aircraft_rate_bps - 1.0);
        b.add("active_rel_diff", "1", "analytic / simulated active - 1", est.expected_active / mc.mean_active - 1.0);
        b.add("max_zf_residual", "1", "largest ||H F - I|| / ||I|| over trials", mc.max_zf_residual);
        break;
      }
      case ExperimentKind::kGsTradeoff: {
        const ArrayTradeoff t = minimal_arrays_for_rate(s.scenario, s.rate_threshold_bps, s.gs_tradeoff.tx_rx_ratio,
                                                        s.gs_tradeoff.max_rx_side, s.analytic);
        b.add("cell_range_km", "km", "cell range", s.scenario.cell_range_km);
        b.add("bandwidth_mhz", "MHz", "bandwidth", s.scenario.bandwidth_hz / 1e6);
        b.add("power_dbm", "dBm", "GS transmit power", s.scenario.transmit_power_dbm);
        b.add("ground_stations", "1", "GSs covering the service area",
              static_cast<std::int64_t>(gs_count(s.scenario.cell_range_km, s.cost.area_km2)));
        b.add("feasible", "1", "1 when some array pair meets the threshold", std::int64_t{t.feasible ? 1 : 0});
        b.add("tx_elements", "1", "smallest GS array meeting the threshold", std::int64_t{t.tx_elements});
        b.add("rx_elements", "1", "matching AS array", std::int64_t{t.rx_elements});
        b.add("mean_aircraft_rate_mbps", "Mbit/s", "closed-form rate per aircraft", t.mean_aircraft_rate_bps / 1e6);
        b.add("zeta_bits", "bit/use", "steering loss of the 8-face design", t.zeta_bits);
        break;
      }
      case ExperimentKind::kTco:
      case ExperimentKind::kTcoSweep: {
        const TcoOptions options{s.limits, s.analytic};
        DeploymentSolution sol;
        std::string status = "optimal";
        bool have = true;
        if (s.candidate) {
          sol = evaluate_tco(*s.candidate, s.rate_threshold_bps, s.scenario, s.cost, options);
          status = sol.feasible ? "evaluated" : "evaluated-infeasible";
        } else {
          const std::string key = search_key(s);
          auto it = searches.find(key);
          if (it == searches.end()) {
            it = searches
                     .emplace(key, std::make_unique<DeploymentSearch>(s.rate_threshold_bps, s.scenario, s.search,
                                                                      options, s.threads))
                     .first;
          }
          try {
            sol = it->second->optimize(s.cost);
          } catch (const InfeasibleError& e) {
            result.infeasible = true;
            result.notes.push_back(e.what());
            status = "infeasible";
            have = false;
          }
        }
        auto num = [&](double v) { return have ? v : kNaN; };
        b.add("rate_threshold_mbps", "Mbit/s", "required mean rate per aircraft", s.rate_threshold_bps / 1e6);
        b.add("spectrum_eur_per_mhz_pop", "EUR/MHz/pop", "spectrum price", s.cost.spectrum_eur_per_mhz_pop);
        b.add("element_eur", "EUR", "price per antenna element", s.cost.element_eur);
        b.add("status", "", "optimal, evaluated, evaluated-infeasible or infeasible", status);
        b.add("feasible", "1", "1 when all constraints hold", std::int64_t{have && sol.feasible ? 1 : 0});
        b.add("cell_range_km", "km", "cell range", num(sol.candidate.cell_range_km));
        b.add("tx_elements", "1", "GS elements per face", std::int64_t{have ? sol.candidate.tx_elements : 0});
        b.add("rx_elements", "1", "AS elements per face", std::int64_t{have ? sol.candidate.rx_elements : 0});
        b.add("power_dbm", "dBm", "GS transmit power", num(sol.candidate.transmit_power_dbm));
        b.add("bandwidth_mhz", "MHz", "bandwidth", num(sol.candidate.bandwidth_hz / 1e6));
        b.add("ground_stations", "1", "GS count", std::int64_t{have ? sol.ground_stations : 0});
        b.add("capex_ground_eur", "EUR", "GS equipment", num(sol.breakdown.capex_ground));
        b.add("capex_air_eur", "EUR", "AS equipment", num(sol.breakdown.capex_air));
        b.add("lease_eur", "EUR", "site lease over the horizon", num(sol.breakdown.lease));
        b.add("maintenance_eur", "EUR", "maintenance over the horizon", num(sol.breakdown.maintenance));
        b.add("power_eur", "EUR", "energy over the horizon", num(sol.breakdown.power));
        b.add("spectrum_eur", "EUR", "spectrum licence", num(sol.breakdown.spectrum));
        b.add("total_eur", "EUR", "total cost of ownership", num(sol.total_eur));
        b.add("mean_aircraft_rate_mbps", "Mbit/s", "closed-form rate per aircraft", num(sol.mean_aircraft_rate_bps / 1e6));
        b.add("expected_active", "1", "expected active aircraft per cell", num(sol.expected_active));
        b.add("zeta_bits", "bit/use", "steering loss of the 8-face design", num(sol.zeta_bits));
        b.add("rate_slack_mbps", "Mbit/s", "rate minus threshold", num(sol.slack.rate_bps / 1e6));
        break;
      }
    }
    b.end_row();
  }
  if (spec.kind == ExperimentKind::kDoppler) {
    std::ostringstream os;
    os.precision(8);
    os << "max |doppler| over all tracks: " << doppler_max << " Hz";
    result.notes.push_back(os.str());
  }
  return result;
}

}  // namespace da2gc
