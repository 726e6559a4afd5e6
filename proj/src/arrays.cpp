#include "da2gc/arrays.hpp"

#include <vector>

#include "da2gc/parallel.hpp"
#include "da2gc/statistics.hpp"

namespace da2gc {

namespace {

// argmax over l of |sum_i exp(-j i (phase + 2 pi l / n))|, first index on ties.
int best_dft_bin(int n, double phase) {
  int best = 0;
  double best_mag = -1.0;
  for (int l = 0; l < n; ++l) {
    const double step = phase + 2.0 * kPi * l / n;
    std::complex<double> acc{0.0, 0.0};
    for (int i = 0; i < n; ++i) acc += std::polar(1.0, -step * i);
    const double mag = std::abs(acc);
    if (mag > best_mag) {
      best_mag = mag;
      best = l;
    }
  }
  return best;
}

}  // namespace

int closest_code(const PlanarArray& array, double theta, double phi) {
  const int n = array.side;
  const double k = 2.0 * kPi / array.wavelength_m * array.spacing_m;
  const int l = best_dft_bin(n, k * std::sin(theta) * std::sin(phi));
  const int m = best_dft_bin(n, k * std::cos(theta));
  return l * n + m;
}

double beamwidth_3db_deg(int elements) { return 101.8 / std::sqrt(static_cast<double>(elements)); }

AlignmentModel alignment_loss(double sigma_deg, int tx_elements, int rx_elements) {
  AlignmentModel m;
  m.sigma_deg = sigma_deg;
  m.beamwidth_tx_deg = beamwidth_3db_deg(tx_elements);
  m.beamwidth_rx_deg = beamwidth_3db_deg(rx_elements);
  const double s2 = sigma_deg * sigma_deg;
  const double gt = std::exp(-s2 / std::pow(0.6 * m.beamwidth_tx_deg, 2));
  const double gr = std::exp(-s2 / std::pow(0.6 * m.beamwidth_rx_deg, 2));
  m.chi = std::sqrt(gt) * std::sqrt(gr);
  m.chi_squared = m.chi * m.chi;
  return m;
}

double AlignmentSampler::theta_max_rad() const {
  return range == ElevationRange::kAsPrinted ? std::atan(altitude_min_km / cell_range_km)
                                             : std::atan(cell_range_km / altitude_min_km);
}

double simulate_alignment_loss(Rng& rng, double sigma_deg, const PlanarArray& tx,
                               const PlanarArray& rx, const AlignmentSampler& sampler) {
  const double theta_max = sampler.theta_max_rad();
  const double sigma = deg_to_rad(sigma_deg);
  auto one_end = [&](const PlanarArray& array) {
    const double theta = uniform(rng, 0.0, theta_max);
    const double phi = uniform(rng, 0.0, 2.0 * kPi);
    if (sigma == 0.0) return 1.0;
    const double theta_hat = theta + normal(rng, 0.0, sigma);
    const double phi_hat = phi + normal(rng, 0.0, sigma);
    const auto truth = steering_vector(array, theta, phi);
    const auto beam = steering_vector(array, theta_hat, phi_hat);
    return std::abs(beam.dot(truth));  // dot() conjugates the first operand
  };
  const double tx_gain = one_end(tx);
  const double rx_gain = one_end(rx);
  return tx_gain * rx_gain;
}

AlignmentStats alignment_monte_carlo(double sigma_deg, const PlanarArray& tx,
                                     const PlanarArray& rx, const AlignmentSampler& sampler,
                                     int draws, std::uint64_t seed, unsigned threads) {
  std::vector<double> samples(static_cast<std::size_t>(std::max(draws, 0)));
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    samples[i] = simulate_alignment_loss(rng, sigma_deg, tx, rx, sampler);
  });
  AlignmentStats stats;
  stats.draws = draws;
  const auto ms = mean_std(samples);
  stats.mean = ms.mean;
  stats.stddev = ms.stddev;
  CompensatedSum power;
  for (double s : samples) power.add(s * s);
  stats.power_mean = samples.empty() ? 0.0 : power.value() / static_cast<double>(samples.size());
  return stats;
}

}  // namespace da2gc
