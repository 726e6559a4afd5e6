#include "da2gc/tco.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <sstream>
#include <tuple>

#include "da2gc/arrays.hpp"
#include "da2gc/errors.hpp"
#include "da2gc/facet_design.hpp"
#include "da2gc/parallel.hpp"
#include "da2gc/units.hpp"

namespace da2gc {

std::vector<std::string> CostModel::violations() const {
  std::vector<std::string> out;
  auto non_negative = [&](const char* name, double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) out.push_back(std::string(name) + " must be a finite value >= 0");
  };
  non_negative("base_unit_eur", base_unit_eur);
  non_negative("element_eur", element_eur);
  non_negative("spectrum_eur_per_mhz_pop", spectrum_eur_per_mhz_pop);
  non_negative("population", population);
  non_negative("energy_eur_per_kwh", energy_eur_per_kwh);
  non_negative("lease_eur_per_month", lease_eur_per_month);
  non_negative("maintenance_fraction", maintenance_fraction);
  non_negative("idle_power_w", idle_power_w);
  non_negative("rf_chain_power_w", rf_chain_power_w);
  non_negative("synthesizer_power_w", synthesizer_power_w);
  non_negative("traffic_growth", traffic_growth);
  if (!(flight_hours > 0.0)) out.push_back("flight_hours must be > 0");
  if (!(pa_efficiency > 0.0 && pa_efficiency <= 1.0)) out.push_back("pa_efficiency must be in (0, 1]");
  if (!(area_km2 > 0.0)) out.push_back("area_km2 must be > 0");
  if (air_stations < 0) out.push_back("air_stations must be >= 0");
  if (rf_chains < 0) out.push_back("rf_chains must be >= 0");
  if (horizon_years != 10) out.push_back("horizon_years is fixed at 10");
  if (faces_per_station < 1) out.push_back("faces_per_station must be >= 1");
  return out;
}

void CostModel::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::ostringstream msg;
  msg << "invalid cost model:";
  for (const auto& s : v) msg << "\n  " << s;
  throw ConfigError(msg.str());
}

std::int64_t gs_count(double cell_range_km, double area_km2) {
  if (!(cell_range_km > 0.0)) throw ConfigError("cell range must be > 0");
  return static_cast<std::int64_t>(std::ceil(area_km2 / (kPi * cell_range_km * cell_range_km)));
}

Capex capex(int tx_elements, int rx_elements, std::int64_t ground_stations, int air_stations,
            const CostModel& cost) {
  const double faces = cost.faces_per_station;
  Capex c;
  c.ground = (cost.base_unit_eur + faces * tx_elements * cost.element_eur) *
             static_cast<double>(ground_stations);
  c.air = (cost.base_unit_eur + faces * rx_elements * cost.element_eur) * air_stations;
  return c;
}

double transmit_time(double expected_active, std::int64_t ground_stations, const CostModel& cost) {
  const double cells = 0.5 * expected_active * static_cast<double>(ground_stations);
  if (cost.flight_hours_basis == FlightHoursBasis::kAnnualTimesHorizon) {
    return cost.flight_hours * cost.horizon_years / cells;
  }
  return cost.flight_hours / cells * 365.0;
}

double growth_factor(const CostModel& cost) {
  double sum = 0.0;
  for (int i = 0; i < cost.horizon_years; ++i) sum += std::pow(1.0 + cost.traffic_growth, i);
  return sum;
}

double power_cost(double transmit_power_w, double transmit_hours, std::int64_t ground_stations,
                  const CostModel& cost) {
  const double per_wh = cost.energy_eur_per_kwh * 1e-3;
  const double stations = static_cast<double>(ground_stations);
  const double horizon_hours = 24.0 * 365.0 * cost.horizon_years;
  const double active_w = transmit_power_w / cost.pa_efficiency +
                          cost.rf_chains * cost.rf_chain_power_w + cost.synthesizer_power_w;
  return per_wh * stations * cost.idle_power_w * horizon_hours +
         per_wh * stations * active_w * transmit_hours * growth_factor(cost);
}

double CostBreakdown::total() const {
  return capex_ground + capex_air + lease + maintenance + power + spectrum;
}

namespace {

CostBreakdown cost_breakdown(const CostModel& cost, int nt, int nr, std::int64_t stations,
                             double power_dbm, double bandwidth_hz, double expected_active) {
  CostBreakdown b;
  const Capex c = capex(nt, nr, stations, cost.air_stations, cost);
  b.capex_ground = c.ground;
  b.capex_air = c.air;
  const double sites = cost.lease_mode == LeaseMode::kPerSite ? static_cast<double>(stations) : 1.0;
  b.lease = cost.lease_eur_per_month * 12.0 * cost.horizon_years * sites;
  b.maintenance = cost.maintenance_fraction * c.total();
  b.power = power_cost(dbm_to_watts(power_dbm), transmit_time(expected_active, stations, cost),
                       stations, cost);
  b.spectrum = cost.spectrum_eur_per_mhz_pop * (bandwidth_hz * 1e-6) * cost.population;
  return b;
}

double side_limit(double aperture_m, double frequency_hz) {
  return 2.0 * aperture_m / wavelength_m(frequency_hz);
}

double zeta_for_range(double range_km, double altitude_min_km) {
  return eight_face_design(2.0 * range_km, altitude_min_km).zeta_bits;
}

ScenarioConfig with_candidate(ScenarioConfig s, double range_km, double power_dbm, double bandwidth_hz) {
  s.cell_range_km = range_km;
  s.transmit_power_dbm = power_dbm;
  s.bandwidth_hz = bandwidth_hz;
  return s;
}

}  // namespace

DeploymentSolution evaluate_tco(const Candidate& candidate, double rate_threshold_bps,
                                const ScenarioConfig& scenario, const CostModel& cost,
                                const TcoOptions& options) {
  if (square_side(candidate.tx_elements) < 1 || square_side(candidate.rx_elements) < 1) {
    throw InvalidArrayError("candidate array sizes must be perfect squares");
  }
  DeploymentSolution sol;
  sol.candidate = candidate;
  const ScenarioConfig s = with_candidate(scenario, candidate.cell_range_km,
                                          candidate.transmit_power_dbm, candidate.bandwidth_hz);
  sol.ground_stations = gs_count(candidate.cell_range_km, cost.area_km2);
  sol.zeta_bits = zeta_for_range(candidate.cell_range_km, s.altitude_min_km);
  const ThroughputEstimate est = estimate_throughput(s, candidate.tx_elements, candidate.rx_elements,
                                                     sol.zeta_bits, options.analytic);
  sol.mean_aircraft_rate_bps = est.mean_aircraft_rate_bps;
  sol.expected_active = est.expected_active;
  sol.breakdown = cost_breakdown(cost, candidate.tx_elements, candidate.rx_elements,
                                 sol.ground_stations, candidate.transmit_power_dbm,
                                 candidate.bandwidth_hz, est.expected_active);
  sol.total_eur = sol.breakdown.total();
  sol.slack.rate_bps = est.mean_aircraft_rate_bps - rate_threshold_bps;
  sol.slack.power_db = options.limits.max_power_dbm - candidate.transmit_power_dbm;
  sol.slack.tx_side = side_limit(options.limits.tx_aperture_m, s.carrier_frequency_hz) -
                      std::sqrt(static_cast<double>(candidate.tx_elements));
  sol.slack.rx_side = side_limit(options.limits.rx_aperture_m, s.carrier_frequency_hz) -
                      std::sqrt(static_cast<double>(candidate.rx_elements));
  sol.feasible = sol.slack.rate_bps >= 0.0 && sol.slack.power_db >= 0.0 && sol.slack.tx_side > 0.0 &&
                 sol.slack.rx_side > 0.0;
  return sol;
}

MinimalBandwidth minimal_bandwidth(const CellTerms& terms, const ScenarioConfig& scenario,
                                   int tx_elements, int rx_elements, double zeta_bits,
                                   double rate_threshold_bps, const SearchBounds& bounds) {
  ScenarioConfig s = scenario;
  auto rate = [&](double b) {
    s.bandwidth_hz = b;
    return throughput_from_terms(terms, s, tx_elements, rx_elements, zeta_bits).mean_aircraft_rate_bps;
  };
  MinimalBandwidth out;
  const int steps = std::max(
      1, static_cast<int>(std::ceil((bounds.bandwidth_max_hz - bounds.bandwidth_min_hz) /
                                        bounds.bandwidth_grid_hz - 1e-9)));
  auto grid = [&](int i) {
    return i == steps ? bounds.bandwidth_max_hz : bounds.bandwidth_min_hz + i * bounds.bandwidth_grid_hz;
  };
  double previous = -std::numeric_limits<double>::infinity();
  int first = -1;
  for (int i = 0; i <= steps; ++i) {
    const double r = rate(grid(i));
    if (r < previous) out.monotone = false;
    previous = r;
    if (first < 0 && r >= rate_threshold_bps) first = i;
  }
  if (first < 0) return out;
  out.feasible = true;
  out.bandwidth_hz = grid(first);
  // Without monotonicity the bracket may hide other crossings; keep the grid answer.
  if (first == 0 || !out.monotone) return out;
  double lo = grid(first - 1);
  double hi = grid(first);
  while (hi - lo > 1.0) {
    const double mid = 0.5 * (lo + hi);
    if (rate(mid) >= rate_threshold_bps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.bandwidth_hz = hi;
  return out;
}

struct DeploymentSearch::Impl {
  double threshold = 0.0;
  ScenarioConfig scenario;
  SearchBounds bounds;
  TcoOptions options;
  unsigned threads = 0;

  std::vector<double> ranges;
  std::vector<double> powers;
  std::vector<int> tx_sides;
  std::vector<int> rx_sides;

  struct Entry {
    double bandwidth_hz = 0.0;
    double expected_active = 0.0;
    bool feasible = false;
  };
  // Indexed [pair][range][power], pair = tx index * rx count + rx index.
  std::vector<Entry> table;
  double best_rate_bps = -std::numeric_limits<double>::infinity();

  std::size_t index(std::size_t pair, std::size_t r, std::size_t p) const {
    return (pair * ranges.size() + r) * powers.size() + p;
  }

  CellTerms terms_at(double range_km, int nt, int nr) const {
    return cell_terms(with_candidate(scenario, range_km, 0.0, 0.0), nt, nr, options.analytic);
  }

  void build();
  // Minimal-B TCO at an arbitrary range; +inf when infeasible.
  std::pair<double, double> cost_at(const CostModel& cost, int nt, int nr, double range_km,
                                    double power_dbm) const;
};

void DeploymentSearch::Impl::build() {
  const double freq = scenario.carrier_frequency_hz;
  const double tx_limit = side_limit(options.limits.tx_aperture_m, freq);
  const double rx_limit = side_limit(options.limits.rx_aperture_m, freq);
  for (int w = bounds.tx_side_min; w <= bounds.tx_side_max; ++w) {
    if (w < tx_limit) tx_sides.push_back(w);
  }
  for (int v = bounds.rx_side_min; v <= bounds.rx_side_max; ++v) {
    if (v < rx_limit) rx_sides.push_back(v);
  }
  for (double r = bounds.range_min_km; r <= bounds.range_max_km + 1e-9; r += bounds.range_grid_km) {
    ranges.push_back(std::min(r, bounds.range_max_km));
  }
  if (bounds.free_power) {
    for (double p = bounds.power_min_dbm; p <= options.limits.max_power_dbm + 1e-9; p += 1.0) {
      powers.push_back(p);
    }
  } else {
    powers.push_back(options.limits.max_power_dbm);
  }
  if (tx_sides.empty() || rx_sides.empty() || ranges.empty() || powers.empty()) {
    throw InfeasibleError("search bounds leave no candidate", "array size");
  }

  // Range-only terms.
  std::vector<double> zeta(ranges.size());
  std::vector<CellTerms> base(ranges.size());
  parallel_for(ranges.size(), threads, [&](std::size_t i) {
    zeta[i] = zeta_for_range(ranges[i], scenario.altitude_min_km);
    base[i].aircraft = aircraft_count(with_candidate(scenario, ranges[i], 0.0, 0.0));
    base[i].pathloss_expectation = expected_pathloss(ranges[i], scenario.altitude_min_km,
                                                     scenario.altitude_max_km, freq);
  });

  const std::size_t pairs = tx_sides.size() * rx_sides.size();
  table.assign(pairs * ranges.size() * powers.size(), {});
  std::vector<double> pair_best_rate(pairs, -std::numeric_limits<double>::infinity());
  const double slot_h = slot_altitude_km(options.analytic, scenario);
  parallel_for(tx_sides.size(), threads, [&](std::size_t ti) {
    const int nt = tx_sides[ti] * tx_sides[ti];
    for (std::size_t ri = 0; ri < ranges.size(); ++ri) {
      // Slot counts only change with the array that sets the beamwidth.
      std::vector<std::pair<int, BeamSlots>> slot_cache;
      for (std::size_t vi = 0; vi < rx_sides.size(); ++vi) {
        const int nr = rx_sides[vi] * rx_sides[vi];
        const int se = slot_elements(options.analytic, nt, nr);
        auto it = std::find_if(slot_cache.begin(), slot_cache.end(),
                               [&](const auto& e) { return e.first == se; });
        if (it == slot_cache.end()) {
          slot_cache.emplace_back(se, beam_slot_count(ranges[ri], slot_h, scenario.altitude_min_km,
                                                      deg_to_rad(beamwidth_3db_deg(se))));
          it = std::prev(slot_cache.end());
        }
        CellTerms terms = base[ri];
        terms.slots = it->second;
        terms.expected_active = expected_active(terms.aircraft, terms.slots.choices);
        const std::size_t pair = ti * rx_sides.size() + vi;
        for (std::size_t pi = 0; pi < powers.size(); ++pi) {
          const ScenarioConfig s = with_candidate(scenario, ranges[ri], powers[pi], 0.0);
          const auto mb = minimal_bandwidth(terms, s, nt, nr, zeta[ri], threshold, bounds);
          Entry& e = table[index(pair, ri, pi)];
          e.feasible = mb.feasible;
          e.bandwidth_hz = mb.bandwidth_hz;
          e.expected_active = terms.expected_active;
          ScenarioConfig widest = s;
          widest.bandwidth_hz = bounds.bandwidth_max_hz;
          pair_best_rate[pair] = std::max(
              pair_best_rate[pair],
              throughput_from_terms(terms, widest, nt, nr, zeta[ri]).mean_aircraft_rate_bps);
        }
      }
    }
  });
  for (double r : pair_best_rate) best_rate_bps = std::max(best_rate_bps, r);
}

std::pair<double, double> DeploymentSearch::Impl::cost_at(const CostModel& cost, int nt, int nr,
                                                          double range_km, double power_dbm) const {
  const CellTerms terms = terms_at(range_km, nt, nr);
  const double zeta = zeta_for_range(range_km, scenario.altitude_min_km);
  const ScenarioConfig s = with_candidate(scenario, range_km, power_dbm, 0.0);
  const auto mb = minimal_bandwidth(terms, s, nt, nr, zeta, threshold, bounds);
  if (!mb.feasible) return {std::numeric_limits<double>::infinity(), 0.0};
  const auto b = cost_breakdown(cost, nt, nr, gs_count(range_km, cost.area_km2), power_dbm,
                                mb.bandwidth_hz, terms.expected_active);
  return {b.total(), mb.bandwidth_hz};
}

DeploymentSearch::DeploymentSearch(double rate_threshold_bps, ScenarioConfig scenario,
                                   SearchBounds bounds, TcoOptions options, unsigned threads)
    : impl_(std::make_unique<Impl>()) {
  scenario.validate();
  if (!(bounds.range_min_km > 0.0 && bounds.range_min_km <= bounds.range_max_km &&
        bounds.range_grid_km > 0.0)) {
    throw ConfigError("invalid cell range search bounds");
  }
  if (!(bounds.bandwidth_min_hz > 0.0 && bounds.bandwidth_min_hz <= bounds.bandwidth_max_hz &&
        bounds.bandwidth_grid_hz > 0.0)) {
    throw ConfigError("invalid bandwidth search bounds");
  }
  impl_->threshold = rate_threshold_bps;
  impl_->scenario = scenario;
  impl_->bounds = bounds;
  impl_->options = options;
  impl_->threads = threads;
  impl_->build();
}

DeploymentSearch::~DeploymentSearch() = default;

DeploymentSolution DeploymentSearch::optimize(const CostModel& cost) const {
  cost.validate();
  const Impl& m = *impl_;
  struct Best {
    double total = std::numeric_limits<double>::infinity();
    std::int64_t stations = 0;
    Candidate candidate;
  };
  auto better = [](const Best& a, const Best& b) {
    return std::tie(a.total, a.stations) < std::tie(b.total, b.stations);
  };
  const std::size_t pairs = m.tx_sides.size() * m.rx_sides.size();
  std::vector<Best> per_pair(pairs);

  parallel_for(pairs, m.threads, [&](std::size_t pair) {
    const int w = m.tx_sides[pair / m.rx_sides.size()];
    const int v = m.rx_sides[pair % m.rx_sides.size()];
    const int nt = w * w;
    const int nr = v * v;
    Best best;
    std::size_t best_r = 0;
    for (std::size_t ri = 0; ri < m.ranges.size(); ++ri) {
      const std::int64_t stations = gs_count(m.ranges[ri], cost.area_km2);
      for (std::size_t pi = 0; pi < m.powers.size(); ++pi) {
        const auto& e = m.table[m.index(pair, ri, pi)];
        if (!e.feasible) continue;
        Best c;
        c.total = cost_breakdown(cost, nt, nr, stations, m.powers[pi], e.bandwidth_hz,
                                 e.expected_active).total();
        c.stations = stations;
        c.candidate = {m.ranges[ri], nt, nr, m.powers[pi], e.bandwidth_hz};
        if (better(c, best)) {
          best = c;
          best_r = ri;
        }
      }
    }
    if (!std::isfinite(best.total)) return;

    // Golden-section refinement of r_max between the neighbouring grid points.
    const double power = best.candidate.transmit_power_dbm;
    double a = m.ranges[best_r > 0 ? best_r - 1 : 0];
    double b = m.ranges[std::min(best_r + 1, m.ranges.size() - 1)];
    auto consider = [&](double r) {
      const auto [total, bw] = m.cost_at(cost, nt, nr, r, power);
      Best c;
      c.total = total;
      c.stations = gs_count(r, cost.area_km2);
      c.candidate = {r, nt, nr, power, bw};
      if (std::isfinite(total) && better(c, best)) best = c;
      return total;
    };
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = consider(x1);
    double f2 = consider(x2);
    for (int it = 0; it < 30 && b - a > 1e-4; ++it) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kInvPhi * (b - a);
        f1 = consider(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kInvPhi * (b - a);
        f2 = consider(x2);
      }
    }
    per_pair[pair] = best;
  });

  Best overall;
  for (const auto& b : per_pair) {
    if (std::isfinite(b.total) && better(b, overall)) overall = b;
  }
  if (!std::isfinite(overall.total)) {
    std::ostringstream msg;
    msg << "no feasible deployment: best achievable mean aircraft rate " << m.best_rate_bps
        << " bit/s is below the threshold " << m.threshold << " bit/s";
    throw InfeasibleError(msg.str(), "mean aircraft rate");
  }
  return evaluate_tco(overall.candidate, m.threshold, m.scenario, cost, m.options);
}

DeploymentSolution optimize_deployment(double rate_threshold_bps, const ScenarioConfig& scenario,
                                       const CostModel& cost, const SearchBounds& bounds,
                                       const TcoOptions& options, unsigned threads) {
  return DeploymentSearch(rate_threshold_bps, scenario, bounds, options, threads).optimize(cost);
}

}  // namespace da2gc
