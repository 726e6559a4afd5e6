#include "da2gc/beamforming_sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "da2gc/parallel.hpp"
#include "da2gc/statistics.hpp"

namespace da2gc {

AircraftPlacement place_aircraft(Rng& rng, const ScenarioConfig& scenario) {
  const int k = aircraft_count(scenario);
  AircraftPlacement placement;
  placement.aircraft.reserve(k);
  for (int i = 0; i < k; ++i) {
    Aircraft a;
    a.radial_km = uniform(rng, 0.0, scenario.cell_range_km);
    a.altitude_km = uniform(rng, scenario.altitude_min_km, scenario.altitude_max_km);
    a.azimuth_rad = uniform(rng, 0.0, 2.0 * kPi);
    a.geometry = link_geometry(a.radial_km, a.altitude_km, a.azimuth_rad);
    placement.aircraft.push_back(a);
  }
  return placement;
}

Elimination dft_eliminate(const PlanarArray& tx, const std::vector<LinkGeometry>& links) {
  Elimination out;
  out.codes.reserve(links.size());
  std::map<int, int> first_by_code;
  for (std::size_t i = 0; i < links.size(); ++i) {
    const int code = closest_code(tx, links[i].theta_tx, links[i].phi_tx);
    out.codes.push_back(code);
    first_by_code.emplace(code, static_cast<int>(i));
  }
  for (const auto& entry : first_by_code) out.active.push_back(entry.second);
  std::sort(out.active.begin(), out.active.end());
  return out;
}

namespace {

using Eigen::MatrixXcd;
using Eigen::RowVectorXcd;
using Eigen::VectorXcd;

double log2_det_identity_plus(const MatrixXcd& gram_scaled) {
  const MatrixXcd a = MatrixXcd::Identity(gram_scaled.rows(), gram_scaled.cols()) + gram_scaled;
  Eigen::LLT<MatrixXcd> llt(a);
  if (llt.info() != Eigen::Success) throw NumericalError("rate matrix is not positive definite");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) sum += std::log(std::real(llt.matrixL()(i, i)));
  return 2.0 * sum / std::log(2.0);
}

LinkGeometry perturbed(const LinkGeometry& truth, double sigma_rad, Rng& rng) {
  LinkGeometry est = truth;
  if (sigma_rad == 0.0) return est;
  est.theta_tx += normal(rng, 0.0, sigma_rad);
  est.phi_tx += normal(rng, 0.0, sigma_rad);
  est.theta_rx += normal(rng, 0.0, sigma_rad);
  est.phi_rx += normal(rng, 0.0, sigma_rad);
  return est;
}

}  // namespace

CellSimResult simulate_placement(Rng& rng, const ScenarioConfig& scenario,
                                 const AircraftPlacement& placement, const PlanarArray& tx,
                                 const PlanarArray& rx, const SimOptions& options) {
  CellSimResult result;
  result.aircraft = placement.count();
  result.per_aircraft_rate_bps.assign(result.aircraft, 0.0);
  if (result.aircraft == 0) return result;

  std::vector<LinkGeometry> links;
  links.reserve(placement.aircraft.size());
  for (const auto& a : placement.aircraft) links.push_back(a.geometry);
  const Elimination elim = dft_eliminate(tx, links);
  const int kac = static_cast<int>(elim.active.size());
  result.active = kac;

  const int nt = tx.elements();
  const int nr = rx.elements();
  const double array_gain = std::sqrt(static_cast<double>(nt) * nr);
  const RicianFactor rician = RicianFactor::from_db(scenario.rician_factor_db);
  const double los_amp = std::sqrt(rician.los_weight());
  const double nlos_amp = std::sqrt(rician.nlos_weight());
  const double sigma = deg_to_rad(scenario.alignment_sigma_deg);

  MatrixXcd f_rf(nt, kac);
  MatrixXcd h_true(kac, nt);  // rows w_k^H H_k
  MatrixXcd h_est(kac, nt);   // LOS model at the estimated angles
  for (int k = 0; k < kac; ++k) {
    const Aircraft& a = placement.aircraft[elim.active[k]];
    const LinkGeometry est = perturbed(a.geometry, sigma, rng);
    const VectorXcd at_est = steering_vector(tx, est.theta_tx, est.phi_tx);
    const VectorXcd ar_est = steering_vector(rx, est.theta_rx, est.phi_rx);
    const VectorXcd at_true = steering_vector(tx, a.geometry.theta_tx, a.geometry.phi_tx);
    const VectorXcd ar_true = steering_vector(rx, a.geometry.theta_rx, a.geometry.phi_rx);
    const double amp = std::sqrt(free_space_pathloss(a.radial_km, a.altitude_km,
                                                     scenario.carrier_frequency_hz));
    f_rf.col(k) = at_est;
    // w_k = ar_est has unit norm, so w_k^H a_R(est) = 1 in the estimate.
    h_est.row(k) = amp * array_gain * at_est.adjoint();
    const std::complex<double> rx_gain = ar_est.dot(ar_true);
    RowVectorXcd row = los_amp * array_gain * rx_gain * at_true.adjoint();
    if (nlos_amp > 0.0) {
      RowVectorXcd scatter(nt);
      if (options.nlos == NlosMode::kProjected) {
        for (int i = 0; i < nt; ++i) scatter(i) = complex_normal(rng);
      } else {
        MatrixXcd h_nlos(nr, nt);
        for (int j = 0; j < nt; ++j) {
          for (int i = 0; i < nr; ++i) h_nlos(i, j) = complex_normal(rng);
        }
        scatter = ar_est.adjoint() * h_nlos;
      }
      row += nlos_amp * scatter;
    }
    h_true.row(k) = amp * row;
  }

  const MatrixXcd h_bar = h_est * f_rf;
  const auto zf = zero_forcing(h_bar);
  result.zf_residual = zf.residual;
  result.zf_condition = zf.condition;
  MatrixXcd precoder = f_rf * zf.precoder;
  if (options.normalization == PrecoderNormalization::kUnitColumns) {
    for (int k = 0; k < kac; ++k) precoder.col(k) /= precoder.col(k).norm();
  }
  const MatrixXcd g = h_true * precoder;

  const double scale = dbm_to_watts(scenario.transmit_power_dbm) /
                       (2.0 * kac * noise_power_watts(scenario.bandwidth_hz) *
                        db_to_linear(scenario.link_margin_db));
  const double two_b = 2.0 * scenario.bandwidth_hz;
  const double penalty = two_b * options.zeta_bits;

  const MatrixXcd gram = scale * (g * g.adjoint());
  result.total_rate_bps = std::max(0.0, two_b * log2_det_identity_plus(gram) - kac * penalty);

  CompensatedSum alone;
  for (int k = 0; k < kac; ++k) {
    const double signal = std::norm(g(k, k));
    double leak = 0.0;
    double worst = 0.0;
    for (int j = 0; j < kac; ++j) {
      if (j == k) continue;
      leak += std::norm(g(k, j));
      worst = std::max(worst, std::abs(g(k, j)));
    }
    if (signal > 0.0) result.max_leakage = std::max(result.max_leakage, worst / std::sqrt(signal));
    const double sinr = scale * signal / (1.0 + scale * leak);
    result.per_aircraft_rate_bps[elim.active[k]] =
        std::max(0.0, two_b * std::log2(1.0 + sinr) - penalty);
    const double own = std::norm((h_true.row(k) * f_rf.col(k)).value());
    alone.add(std::max(0.0, two_b * std::log2(1.0 + scale * own) - penalty));
  }
  result.no_interference_rate_bps = alone.value();
  return result;
}

CellSimResult simulate_cell(Rng& rng, const ScenarioConfig& scenario, const PlanarArray& tx,
                            const PlanarArray& rx, const SimOptions& options) {
  const AircraftPlacement placement = place_aircraft(rng, scenario);
  return simulate_placement(rng, scenario, placement, tx, rx, options);
}

MonteCarloStats monte_carlo(const ScenarioConfig& scenario, const PlanarArray& tx,
                            const PlanarArray& rx, int trials, std::uint64_t seed,
                            const SimOptions& options, unsigned threads) {
  if (trials < 1) throw ConfigError("Monte Carlo needs at least one trial");
  struct Slot {
    double total = 0.0, mean_rate = 0.0, alone = 0.0, active = 0.0, aircraft = 0.0, residual = 0.0;
  };
  std::vector<Slot> slots(trials);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    const CellSimResult r = simulate_cell(rng, scenario, tx, rx, options);
    slots[i] = {r.total_rate_bps, r.mean_aircraft_rate_bps(), r.no_interference_rate_bps,
                static_cast<double>(r.active), static_cast<double>(r.aircraft), r.zf_residual};
  });

  auto column = [&](double Slot::*field) {
    std::vector<double> v(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) v[i] = slots[i].*field;
    return v;
  };
  MonteCarloStats stats;
  stats.trials = trials;
  const auto total = mean_std(column(&Slot::total));
  const auto rate = mean_std(column(&Slot::mean_rate));
  const auto active = mean_std(column(&Slot::active));
  stats.mean_total_rate_bps = total.mean;
  stats.std_total_rate_bps = total.stddev;
  stats.mean_aircraft_rate_bps = rate.mean;
  stats.std_aircraft_rate_bps = rate.stddev;
  stats.mean_active = active.mean;
  stats.std_active = active.stddev;
  stats.mean_no_interference_rate_bps = mean_std(column(&Slot::alone)).mean;
  stats.mean_aircraft = mean_std(column(&Slot::aircraft)).mean;
  for (const auto& s : slots) stats.max_zf_residual = std::max(stats.max_zf_residual, s.residual);
  return stats;
}

IntercellResult intercell_check(double kappa_deg, const PlanarArray& rx,
                                const IntercellOptions& options) {
  IntercellResult out;
  out.serving_azimuth_deg = kappa_deg;
  out.interferer_azimuth_deg = kappa_deg - 180.0;
  const double theta = deg_to_rad(options.off_axis_deg);
  const VectorXcd beam = steering_vector(rx, theta, deg_to_rad(out.serving_azimuth_deg));
  auto power = [&](double azimuth_deg) {
    return std::norm(steering_vector(rx, theta, deg_to_rad(azimuth_deg)).dot(beam));
  };
  const double width = beamwidth_3db_deg(rx.elements());
  const int points = std::max(options.window_points, 1);
  auto window = [&](double center_deg) {
    CompensatedSum sum;
    for (int i = 0; i < points; ++i) {
      const double t = points == 1 ? 0.0 : -0.5 + static_cast<double>(i) / (points - 1);
      sum.add(power(center_deg + t * width));
    }
    return sum.value() / points;
  };
  constexpr double kFloor = 1e-300;
  out.suppression_db = linear_to_db(std::max(window(out.interferer_azimuth_deg), kFloor) /
                                    window(out.serving_azimuth_deg));
  out.point_db = linear_to_db(std::max(power(out.interferer_azimuth_deg), kFloor) /
                              power(out.serving_azimuth_deg));
  return out;
}

}  // namespace da2gc
