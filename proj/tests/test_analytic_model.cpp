#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"

#include "da2gc/analytic_model.hpp"
#include "da2gc/arrays.hpp"
#include "da2gc/geometry_channel.hpp"
#include "da2gc/random.hpp"

using namespace da2gc;
using doctest::Approx;

namespace {

double midpoint_inverse_square(double r, double h0, double h1, int n) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = r * (i + 0.5) / n;
    for (int j = 0; j < n; ++j) {
      const double h = h0 + (h1 - h0) * (j + 0.5) / n;
      sum += 1.0 / (x * x + h * h);
    }
  }
  return sum / (static_cast<double>(n) * n);
}

// Mean number of distinct values over all k^K assignments.
double enumerate_active(int aircraft, int choices) {
  std::vector<int> pick(aircraft, 0);
  double total = 0.0;
  int count = 0;
  while (true) {
    total += static_cast<double>(std::set<int>(pick.begin(), pick.end()).size());
    ++count;
    int i = 0;
    while (i < aircraft && ++pick[i] == choices) pick[i++] = 0;
    if (i == aircraft) break;
  }
  return total / count;
}

}  // namespace

TEST_CASE("expected inverse square distance") {
  SUBCASE("bounded by the extreme geometries") {
    const double e = expected_inverse_square_distance(75.0, 9.0, 13.0);
    CHECK(e <= 1.0 / 81.0);
    CHECK(e >= 1.0 / (75.0 * 75.0 + 169.0));
  }
  SUBCASE("thin altitude band has a closed form") {
    const double h = 10.0;
    const double r = 80.0;
    CHECK(expected_inverse_square_distance(r, h, h + 1e-7) ==
          Approx(std::atan(r / h) / (r * h)).epsilon(1e-6));
  }
  SUBCASE("midpoint rule oracle") {
    for (double r : {20.0, 75.0, 150.0}) {
      CHECK(expected_inverse_square_distance(r, 9.0, 13.0) ==
            Approx(midpoint_inverse_square(r, 9.0, 13.0, 2000)).epsilon(1e-6));
    }
  }
  SUBCASE("invalid geometry") {
    CHECK_THROWS_AS(expected_inverse_square_distance(-1.0, 9.0, 13.0), ConfigError);
    CHECK_THROWS_AS(expected_inverse_square_distance(75.0, 13.0, 9.0), ConfigError);
  }
  SUBCASE("pathloss expectation scales the inverse square") {
    const double f = 18e9;
    const double c = kSpeedOfLight / (4.0 * kPi * f * 1e3);
    CHECK(expected_pathloss(75.0, 9.0, 13.0, f) ==
          Approx(c * c * expected_inverse_square_distance(75.0, 9.0, 13.0)).epsilon(1e-12));
  }
}

TEST_CASE("expected active aircraft") {
  CHECK(expected_active(5.0, 1.0) == 1.0);
  CHECK(expected_active(1.0, 1000.0) == 1.0);
  CHECK(expected_active(0.0, 10.0) == 0.0);
  CHECK(expected_active(2.0, 4.0) == Approx(1.75).epsilon(1e-14));
  for (int k : {2, 3, 5}) {
    for (int a : {2, 3, 4}) CHECK(expected_active(a, k) == Approx(enumerate_active(a, k)).epsilon(1e-12));
  }
  CHECK(expected_active(29.0, 1e8) == Approx(29.0).epsilon(1e-6));
  CHECK(expected_active(29.0, 1e8) <= 29.0);
}

TEST_CASE("beam slots") {
  SUBCASE("vanishing beamwidth hits the cap") {
    const auto s = beam_slot_count(75.0, 9.0, 9.0, 1e-9);
    CHECK(s.choices == kMaxBeamChoices);
  }
  SUBCASE("beam length matches a trapezoid oracle") {
    const double h = 9.0;
    const double beta = deg_to_rad(beamwidth_3db_deg(625));
    const auto s = beam_slot_count(75.0, h, 9.0, beta);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double r = s.r0_km * i / n;
      const double a = std::atan(r / h);
      const double w = 0.5 * h * (std::tan(a + beta / 2) - std::tan(a - beta / 2));
      sum += (i == 0 || i == n ? 0.5 : 1.0) * w;
    }
    CHECK(s.beam_length_km == Approx(sum / n).epsilon(1e-8));
    CHECK(s.r0_km < 75.0);
    CHECK(s.choices == std::floor(std::pow(s.r0_km / s.beam_length_km, 2)));
  }
  SUBCASE("beam width at the GS is h tan(beta / 2) on each side") {
    const double beta = 0.1;
    // Cell edge just beyond half a beamwidth off zenith, so r0 is tiny.
    const double r_max = 9.0 * std::tan(beta / 2 + 1e-5);
    const auto s = beam_slot_count(r_max, 10.0, 9.0, beta);
    REQUIRE(s.r0_km > 0.0);
    CHECK(s.beam_length_km == Approx(10.0 * std::tan(beta / 2)).epsilon(1e-4));
  }
  SUBCASE("wider cells leave fewer slots") {
    const double beta = deg_to_rad(beamwidth_3db_deg(625));
    double previous = 1e300;
    for (double r = 20.0; r <= 150.0; r += 10.0) {
      const double k = beam_slot_count(r, 9.0, 9.0, beta).choices;
      CHECK(k <= previous);
      previous = k;
    }
  }
}

TEST_CASE("closed-form throughput") {
  ScenarioConfig s;
  SUBCASE("steering loss is linear") {
    const auto a = estimate_throughput(s, 625, 400, 0.0);
    const auto b = estimate_throughput(s, 625, 400, 0.5);
    CHECK(b.total_rate_bps == Approx(a.total_rate_bps - 2.0 * s.bandwidth_hz * a.expected_active * 0.5));
    CHECK(a.mean_aircraft_rate_bps == Approx(a.total_rate_bps / a.aircraft));
  }
  SUBCASE("doubling N_T with frozen terms adds one bit per stream") {
    const auto terms = cell_terms(s, 625, 400);
    const auto a = throughput_from_terms(terms, s, 625, 400, 0.35);
    const auto b = throughput_from_terms(terms, s, 1250, 400, 0.35);
    CHECK(b.total_rate_bps - a.total_rate_bps ==
          Approx(2.0 * s.bandwidth_hz * terms.expected_active).epsilon(1e-9));
  }
  SUBCASE("alignment error lowers the estimate through chi squared") {
    auto t = s;
    t.alignment_sigma_deg = 0.5;
    const auto a = estimate_throughput(s, 625, 400, 0.0);
    const auto b = estimate_throughput(t, 625, 400, 0.0);
    CHECK(b.chi_squared == Approx(alignment_loss(0.5, 625, 400).chi_squared));
    CHECK(a.bits_per_active - b.bits_per_active == Approx(-std::log2(b.chi_squared)).epsilon(1e-9));
  }
  SUBCASE("Jensen: log of the mean gain exceeds the mean log gain") {
    const auto est = estimate_throughput(s, 625, 400, 0.0);
    const double f = s.carrier_frequency_hz;
    const double x = std::exp2(est.bits_per_active) /
                     expected_pathloss(s.cell_range_km, s.altitude_min_km, s.altitude_max_km, f);
    Rng rng(2);
    double mean_log = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const double r = uniform(rng, 0.0, s.cell_range_km);
      const double h = uniform(rng, s.altitude_min_km, s.altitude_max_km);
      mean_log += std::log2(x * free_space_pathloss(r, h, f)) / n;
    }
    CHECK(est.bits_per_active > mean_log);
  }
  SUBCASE("more power and bigger arrays never hurt the per-stream rate") {
    double previous = 0.0;
    for (double p = 30.0; p <= 60.0; p += 5.0) {
      auto t = s;
      t.transmit_power_dbm = p;
      const double bits = estimate_throughput(t, 625, 400, 0.0).bits_per_active;
      CHECK(bits > previous);
      previous = bits;
    }
  }
  SUBCASE("low SNR clamps to zero") {
    auto t = s;
    t.transmit_power_dbm = -100.0;
    const auto e = estimate_throughput(t, 1, 1, 0.0);
    CHECK(e.low_snr);
    CHECK(e.total_rate_bps == 0.0);
  }
}
