#include "da2gc/analytic_model.hpp"

#include <algorithm>
#include <cmath>

#include "da2gc/arrays.hpp"
#include "da2gc/errors.hpp"
#include "da2gc/geometry_channel.hpp"
#include "da2gc/quadrature.hpp"
#include "da2gc/units.hpp"

namespace da2gc {

double expected_inverse_square_distance(double r_max_km, double h_min_km, double h_max_km,
                                        double rel_tol) {
  if (!(r_max_km > 0.0) || !(h_min_km > 0.0) || !(h_min_km < h_max_km)) {
    throw ConfigError("expected path loss needs r_max > 0 and 0 < h_min < h_max");
  }
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  const auto res = integrate_2d([](double r, double h) { return 1.0 / (r * r + h * h); }, 0.0,
                                r_max_km, h_min_km, h_max_km, opts);
  if (!res.converged) throw NumericalError("path-loss quadrature did not converge");
  return res.value / (r_max_km * (h_max_km - h_min_km));
}

double expected_pathloss(double r_max_km, double h_min_km, double h_max_km, double frequency_hz) {
  const double scale = wavelength_m(frequency_hz) / (4.0 * kPi);
  return scale * scale * expected_inverse_square_distance(r_max_km, h_min_km, h_max_km) * 1e-6;
}

double expected_active(double aircraft, double choices) {
  if (aircraft <= 0.0) return 0.0;
  if (choices <= 1.0 || aircraft <= 1.0) return 1.0;
  // 1 - (1 - 1/k)^K, written to stay accurate for very large k.
  return -std::expm1(aircraft * std::log1p(-1.0 / choices)) * choices;
}

BeamSlots beam_slot_count(double r_max_km, double altitude_km, double h_min_km, double beta_rad) {
  BeamSlots out;
  const double half = 0.5 * beta_rad;
  double edge = 0.5 * kPi - std::atan(h_min_km / r_max_km) - half;  // atan(r0 / h)
  if (edge <= 0.0) {
    out.clipped = true;
    out.choices = 1.0;
    return out;
  }
  constexpr double kGuard = 1e-6;
  if (edge + half > 0.5 * kPi - kGuard) {
    edge = 0.5 * kPi - kGuard - half;
    out.clipped = true;
  }
  out.r0_km = altitude_km * std::tan(edge);
  const double h = altitude_km;
  auto width = [&](double r) {
    const double a = std::atan(r / h);
    return 0.5 * h * (std::tan(a + half) - std::tan(a - half));
  };
  QuadratureOptions opts;
  opts.rel_tol = 1e-11;
  const auto res = integrate(width, 0.0, out.r0_km, opts);
  out.beam_length_km = res.value / out.r0_km;
  const double ratio = out.r0_km / out.beam_length_km;
  const double k = std::floor(ratio * ratio);
  out.choices = std::isfinite(k) ? std::clamp(k, 1.0, kMaxBeamChoices) : kMaxBeamChoices;
  return out;
}

int slot_elements(const AnalyticOptions& options, int tx_elements, int rx_elements) {
  switch (options.slot_beamwidth) {
    case SlotBeamwidth::kReceiver:
      return rx_elements;
    case SlotBeamwidth::kNarrowest:
      return std::max(tx_elements, rx_elements);
    case SlotBeamwidth::kTransmitter:
      break;
  }
  return tx_elements;
}

double slot_altitude_km(const AnalyticOptions& options, const ScenarioConfig& scenario) {
  return options.slot_altitude == SlotAltitude::kMinimum
             ? scenario.altitude_min_km
             : 0.5 * (scenario.altitude_min_km + scenario.altitude_max_km);
}

CellTerms cell_terms(const ScenarioConfig& scenario, int tx_elements, int rx_elements,
                     const AnalyticOptions& options) {
  CellTerms t;
  t.aircraft = aircraft_count(scenario);
  const double beta =
      deg_to_rad(beamwidth_3db_deg(slot_elements(options, tx_elements, rx_elements)));
  t.slots = beam_slot_count(scenario.cell_range_km, slot_altitude_km(options, scenario),
                            scenario.altitude_min_km, beta);
  t.expected_active = expected_active(t.aircraft, t.slots.choices);
  t.pathloss_expectation = expected_pathloss(scenario.cell_range_km, scenario.altitude_min_km,
                                             scenario.altitude_max_km, scenario.carrier_frequency_hz);
  return t;
}

ThroughputEstimate throughput_from_terms(const CellTerms& terms, const ScenarioConfig& scenario,
                                         int tx_elements, int rx_elements, double zeta_bits) {
  ThroughputEstimate est;
  est.terms = terms;
  est.aircraft = terms.aircraft;
  est.expected_active = terms.expected_active;
  est.chi_squared = alignment_loss(scenario.alignment_sigma_deg, tx_elements, rx_elements).chi_squared;
  const double x = dbm_to_watts(scenario.transmit_power_dbm) * tx_elements * rx_elements *
                   est.chi_squared /
                   (2.0 * terms.expected_active * noise_power_watts(scenario.bandwidth_hz) *
                    db_to_linear(scenario.link_margin_db));
  est.bits_per_active = std::log2(x * terms.pathloss_expectation) - zeta_bits;
  if (!(est.bits_per_active > 0.0)) {
    est.low_snr = true;
    return est;
  }
  est.total_rate_bps = 2.0 * scenario.bandwidth_hz * terms.expected_active * est.bits_per_active;
  est.mean_aircraft_rate_bps = est.total_rate_bps / terms.aircraft;
  return est;
}

ThroughputEstimate estimate_throughput(const ScenarioConfig& scenario, int tx_elements,
                                       int rx_elements, double zeta_bits,
                                       const AnalyticOptions& options) {
  return throughput_from_terms(cell_terms(scenario, tx_elements, rx_elements, options), scenario,
                               tx_elements, rx_elements, zeta_bits);
}

}  // namespace da2gc
