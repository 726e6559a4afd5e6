#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>

#include "da2gc/errors.hpp"
#include "da2gc/random.hpp"
#include "da2gc/units.hpp"

namespace da2gc {

template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

/// Returns sqrt(n) when n is a positive perfect square, otherwise -1.
inline int square_side(std::int64_t n) {
  if (n < 1) return -1;
  auto s = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(n))));
  while (s * s > n) --s;
  while ((s + 1) * (s + 1) <= n) ++s;
  return s * s == n ? static_cast<int>(s) : -1;
}

/// Square planar array: side x side elements with uniform spacing.
template <typename Scalar>
struct BasicPlanarArray {
  int side = 1;
  Scalar spacing_m = Scalar(0.5);
  Scalar wavelength_m = Scalar(1);

  int elements() const { return side * side; }

  /// Array with `elements` elements (must be a perfect square) at lambda/2 spacing.
  static BasicPlanarArray square(int elements, Scalar wavelength) {
    const int s = square_side(elements);
    if (s < 1) {
      throw InvalidArrayError("array element count " + std::to_string(elements) +
                              " is not a perfect square");
    }
    return {s, wavelength / Scalar(2), wavelength};
  }
};

using PlanarArray = BasicPlanarArray<double>;

/// Array response a(theta, phi). Entry (i, j) is stored at i * side + j, where i
/// indexes the azimuth dimension (phase i sin(theta) sin(phi)) and j the elevation
/// dimension (phase j cos(theta)).
template <typename Scalar>
CVector<Scalar> steering_vector(const BasicPlanarArray<Scalar>& array, Scalar theta, Scalar phi) {
  using std::cos;
  using std::sin;
  const int n = array.side;
  const Scalar k = Scalar(2) * Scalar(kPi) / array.wavelength_m * array.spacing_m;
  const Scalar u = sin(theta) * sin(phi);
  const Scalar v = cos(theta);
  const Scalar norm = Scalar(1) / Scalar(n);
  CVector<Scalar> a(array.elements());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i * n + j) = std::polar(norm, k * (Scalar(i) * u + Scalar(j) * v));
    }
  }
  return a;
}

/// Planar DFT codebook: column p = l * side + k is the Kronecker product of the
/// l-th and k-th side-point DFT columns, scaled to unit norm.
template <typename Scalar = double>
CMatrix<Scalar> dft_codebook(int elements) {
  const int n = square_side(elements);
  if (n < 1) {
    throw InvalidArrayError("DFT codebook needs a perfect-square element count, got " +
                            std::to_string(elements));
  }
  CMatrix<Scalar> dft(n, n);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) {
      const auto phase = -Scalar(2) * Scalar(kPi) * Scalar((static_cast<std::int64_t>(i) * l) % n) / Scalar(n);
      dft(i, l) = std::polar(Scalar(1) / std::sqrt(Scalar(n)), phase);
    }
  }
  CMatrix<Scalar> book(elements, elements);
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        book.col(l * n + k).segment(i * n, n) = dft(i, l) * dft.col(k);
      }
    }
  }
  return book;
}

/// Index of the codeword maximizing |a(theta, phi)^H c_p| (first index on ties).
/// Exploits the separable structure so no N x N codebook is materialized.
int closest_code(const PlanarArray& array, double theta, double phi);

/// Half-power beamwidth of a square array, 101.8 / sqrt(N) degrees.
double beamwidth_3db_deg(int elements);

/// Gaussian main-lobe beam-alignment loss for both link ends.
struct AlignmentModel {
  double sigma_deg = 0.0;
  double beamwidth_tx_deg = 0.0;
  double beamwidth_rx_deg = 0.0;
  double chi = 1.0;          // amplitude factor
  double chi_squared = 1.0;  // power factor applied to the array gain
};

AlignmentModel alignment_loss(double sigma_deg, int tx_elements, int rx_elements);

/// Elevation sampling range for the pointing-error experiment.
enum class ElevationRange {
  kAsPrinted,  // theta ~ U[0, atan(h_min / r_max))
  kGeometric,  // theta ~ U[0, atan(r_max / h_min))
};

struct AlignmentSampler {
  double cell_range_km = 75.0;
  double altitude_min_km = 9.0;
  ElevationRange range = ElevationRange::kAsPrinted;

  double theta_max_rad() const;
};

/// One draw of chi_sim = |a_T(perturbed)^H a_T(true)| * |a_R(perturbed)^H a_R(true)|,
/// each of the four LOS angles perturbed by independent N(0, sigma) noise.
double simulate_alignment_loss(Rng& rng, double sigma_deg, const PlanarArray& tx,
                               const PlanarArray& rx, const AlignmentSampler& sampler);

struct AlignmentStats {
  int draws = 0;
  double mean = 0.0;        // mean chi_sim (amplitude)
  double stddev = 0.0;
  double power_mean = 0.0;  // mean chi_sim^2
};

/// Repeated simulate_alignment_loss with per-draw derived seeds; the result is
/// independent of `threads` (0 = hardware concurrency).
AlignmentStats alignment_monte_carlo(double sigma_deg, const PlanarArray& tx,
                                     const PlanarArray& rx, const AlignmentSampler& sampler,
                                     int draws, std::uint64_t seed, unsigned threads = 0);

}  // namespace da2gc
