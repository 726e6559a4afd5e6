#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "da2gc/analytic_model.hpp"
#include "da2gc/arrays.hpp"
#include "da2gc/beamforming_sim.hpp"
#include "da2gc/config.hpp"
#include "da2gc/errors.hpp"
#include "da2gc/experiments.hpp"
#include "da2gc/facet_design.hpp"
#include "da2gc/report.hpp"
#include "da2gc/tco.hpp"

using namespace da2gc;

namespace {

constexpr std::uint64_t kSeed = 20240601;
const double kLambda = wavelength_m(18e9);

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Outcome {
  bool pass = false;
  std::string summary;
};

void info(const std::string& line) { std::cout << "    " << line << '\n'; }

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double rel_diff(double value, double reference) { return std::abs(value - reference) / std::abs(reference); }

// Hex-float rendering so equality means bit equality.
std::string bits(const MonteCarloStats& s) {
  return fmt("%a %a %a %a %a %a %a %a %a", s.mean_total_rate_bps, s.std_total_rate_bps,
             s.mean_aircraft_rate_bps, s.std_aircraft_rate_bps, s.mean_no_interference_rate_bps,
             s.mean_active, s.std_active, s.mean_aircraft, s.max_zf_residual);
}

std::string bits(const AlignmentStats& s) {
  return fmt("%d %a %a %a", s.draws, s.mean, s.stddev, s.power_mean);
}

// ---------------------------------------------------------------- facets

Outcome facet_table() {
  const Stopwatch sw;
  struct Row {
    double isd;
    int m;
    int n;
  };
  const Row rows[] = {{100, 7, 3}, {150, 7, 3}, {200, 6, 3}, {300, 6, 3}, {400, 6, 3}};
  bool ok = true;
  for (const auto& row : rows) {
    const auto d = optimize_facets(row.isd, 9.0);
    const bool match = d.columns == row.m && d.rows == row.n;
    ok = ok && match;
    info(fmt("ISD %3.0f km: (m, n) = (%d, %d), expected (%d, %d), zeta %.4f%s", row.isd, d.columns, d.rows,
             row.m, row.n, d.zeta_bits, match ? "" : "  MISMATCH"));
  }
  const double zeta = optimize_facets(150.0, 9.0).zeta_bits;
  const double t = sw.seconds();
  const bool zeta_ok = std::abs(zeta - 0.35) <= 0.01;
  return {ok && zeta_ok && t < 1.0,
          fmt("facet optima match the reference table, zeta(150 km) = %.4f (0.35 +- 0.01), %.3f s (< 1 s)", zeta, t)};
}

// ---------------------------------------------------------------- doppler

Outcome doppler_bound() {
  const Stopwatch sw;
  double best = 0.0;
  double best_h = 0.0;
  double best_offset = 0.0;
  long samples = 0;
  for (double h = 9.0; h <= 13.0 + 1e-9; h += 0.5) {
    for (double offset = 0.0; offset <= 150.0 + 1e-9; offset += 2.5) {
      const auto p = doppler_peak(h, offset, 150.0, 0.1, 1000.0, 18e9);
      samples += p.samples;
      if (p.max_abs_hz > best) {
        best = p.max_abs_hz;
        best_h = h;
        best_offset = offset;
      }
    }
  }
  const double t = sw.seconds();
  info(fmt("%ld samples; maximum at h = %.1f km, lateral offset %.1f km; ceiling v/lambda = %.1f Hz", samples,
           best_h, best_offset, kmh_to_ms(1000.0) / kLambda));
  return {best >= 16000.0 && best <= 16700.0 && t < 1.0,
          fmt("max |f_D| = %.1f Hz in [16000, 16700], %.3f s (< 1 s)", best, t)};
}

// ---------------------------------------------------------------- alignment

Outcome alignment_consistency(unsigned threads) {
  const Stopwatch sw;
  const std::array<int, 4> sizes = {100, 400, 900, 1600};
  double worst = 0.0;
  for (int n : sizes) {
    const auto a = PlanarArray::square(n, kLambda);
    const AlignmentSampler printed{75.0, 9.0, ElevationRange::kAsPrinted};
    const auto st = alignment_monte_carlo(0.5, a, a, printed, 10000, kSeed, threads);
    const double chi2 = alignment_loss(0.5, n, n).chi_squared;
    const double d = rel_diff(st.mean, chi2);
    worst = std::max(worst, d);
    info(fmt("N = %4d: mean chi_sim = %.4f, chi^2 = %.4f, rel diff %.2f%%", n, st.mean, chi2, 100.0 * d));
  }
  const double t = sw.seconds();
  for (int n : sizes) {
    const auto a = PlanarArray::square(n, kLambda);
    const AlignmentSampler geometric{75.0, 9.0, ElevationRange::kGeometric};
    const auto st = alignment_monte_carlo(0.5, a, a, geometric, 10000, kSeed, threads);
    const auto model = alignment_loss(0.5, n, n);
    info(fmt("diagnostic, theta up to atan(r/h): N = %4d: mean chi_sim = %.4f vs chi = %.4f (%.2f%%), "
             "mean chi_sim^2 = %.4f vs chi^2 = %.4f (%.2f%%)",
             n, st.mean, model.chi, 100.0 * rel_diff(st.mean, model.chi), st.power_mean, model.chi_squared,
             100.0 * rel_diff(st.power_mean, model.chi_squared)));
  }
  return {worst < 0.03 && t < 30.0,
          fmt("max relative gap between mean chi_sim and chi^2 = %.2f%% (< 3%%), %.2f s (< 30 s)", 100.0 * worst, t)};
}

// ---------------------------------------------------------------- Monte Carlo sweep shared by 4, 5, 10

struct SweepPoint {
  int tx;
  double range_km;
};

std::vector<SweepPoint> sweep_points() {
  std::vector<SweepPoint> pts;
  for (int tx : {625, 1225}) {
    for (double r = 50.0; r <= 100.0 + 1e-9; r += 10.0) pts.push_back({tx, r});
  }
  return pts;
}

ScenarioConfig reference_scenario(double range_km) {
  ScenarioConfig s;
  s.cell_range_km = range_km;
  return s;
}

MonteCarloStats run_point(const SweepPoint& p, unsigned threads) {
  return monte_carlo(reference_scenario(p.range_km), PlanarArray::square(p.tx, kLambda),
                     PlanarArray::square(400, kLambda), 1000, derive_seed(kSeed, p.tx * 1000 + int(p.range_km)), {},
                     threads);
}

Outcome active_aircraft_model() {
  const Stopwatch sw;
  double worst = 0.0;
  for (const auto& p : sweep_points()) {
    const auto st = run_point(p, 0);
    const auto terms = cell_terms(reference_scenario(p.range_km), p.tx, 400);
    const double d = rel_diff(st.mean_active, terms.expected_active);
    worst = std::max(worst, d);
    info(fmt("N_T = %4d, r = %5.1f km: K = %d, k = %.0f, simulated K_ac = %.3f, model %.3f, rel diff %.2f%%", p.tx,
             p.range_km, terms.aircraft, terms.slots.choices, st.mean_active, terms.expected_active, 100.0 * d));
  }
  const double t = sw.seconds();
  return {worst < 0.10 && t < 300.0,
          fmt("max relative gap in K_ac = %.2f%% (< 10%%), %.1f s (< 300 s)", 100.0 * worst, t)};
}

Outcome rate_model() {
  const Stopwatch sw;
  double worst = 0.0;
  for (const auto& p : sweep_points()) {
    const auto st = run_point(p, 0);
    const auto est = estimate_throughput(reference_scenario(p.range_km), p.tx, 400, 0.0);
    const double d = rel_diff(est.mean_aircraft_rate_bps, st.mean_aircraft_rate_bps);
    worst = std::max(worst, d);
    info(fmt("N_T = %4d, r = %5.1f km: simulated %.2f Mbit/s, closed form %.2f Mbit/s, rel diff %+.2f%%", p.tx,
             p.range_km, st.mean_aircraft_rate_bps / 1e6, est.mean_aircraft_rate_bps / 1e6,
             100.0 * (est.mean_aircraft_rate_bps - st.mean_aircraft_rate_bps) / st.mean_aircraft_rate_bps));
  }
  const double t = sw.seconds();
  return {worst < 0.10 && t < 600.0,
          fmt("max relative gap in mean aircraft rate = %.2f%% (< 10%%), %.1f s (< 600 s)", 100.0 * worst, t)};
}

// ---------------------------------------------------------------- zero forcing

Outcome zero_forcing_property() {
  const Stopwatch sw;
  const auto tx = PlanarArray::square(625, kLambda);
  const auto rx = PlanarArray::square(400, kLambda);
  const ScenarioConfig rician;
  ScenarioConfig los;
  los.rician_factor_db = 200.0;
  double residual = 0.0;
  double leakage = 0.0;
  int max_active = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng a(derive_seed(kSeed, i));
    const auto r = simulate_cell(a, rician, tx, rx);
    residual = std::max(residual, r.zf_residual);
    max_active = std::max(max_active, r.active);
    Rng b(derive_seed(kSeed + 1, i));
    leakage = std::max(leakage, simulate_cell(b, los, tx, rx).max_leakage);
  }
  const double t = sw.seconds();
  info(fmt("largest K_ac seen: %d", max_active));
  return {residual < 1e-9 && leakage < 1e-8 && t < 60.0,
          fmt("max ||H F - I||_F / sqrt(K_ac) = %.3e (< 1e-9), max leakage = %.3e (< 1e-8), %.1f s (< 60 s)",
              residual, leakage, t)};
}

// ---------------------------------------------------------------- intercell

Outcome intercell() {
  const Stopwatch sw;
  const auto r = intercell_check(30.0, PlanarArray::square(400, kLambda));
  const double t = sw.seconds();
  info(fmt("serving azimuth %.1f deg, interferer %.1f deg, point ratio %.2f dB", r.serving_azimuth_deg,
           r.interferer_azimuth_deg, r.point_db));
  return {std::abs(r.suppression_db + 30.0) <= 5.0 && t < 1.0,
          fmt("interferer-to-serving response %.2f dB (-30 +- 5 dB), %.3f s (< 1 s)", r.suppression_db, t)};
}

// ---------------------------------------------------------------- GS/array tradeoff

Outcome array_tradeoff() {
  const Stopwatch sw;
  const ExperimentSpec spec = default_spec(ExperimentKind::kGsTradeoff);
  const std::array<std::pair<double, int>, 3> targets = {{{50e6, 1296}, {75e6, 400}, {100e6, 256}}};
  bool ok = true;
  for (const auto& [bw, target] : targets) {
    ScenarioConfig s = spec.scenario;
    s.bandwidth_hz = bw;
    const auto r = minimal_arrays_for_rate(s, spec.rate_threshold_bps, spec.gs_tradeoff.tx_rx_ratio,
                                           spec.gs_tradeoff.max_rx_side, spec.analytic);
    // N_T = ratio v^2, so one step in v moves the side of N_T by sqrt(ratio).
    const int side = r.feasible ? square_side(r.tx_elements) : -1;
    const int step = square_side(spec.gs_tradeoff.tx_rx_ratio);
    const bool within = r.feasible && std::abs(side - square_side(target)) <= step;
    ok = ok && within;
    info(fmt("B = %3.0f MHz: minimal N_T = %d (N_R = %d, %.1f Mbit/s), reference %d%s", bw / 1e6, r.tx_elements,
             r.rx_elements, r.mean_aircraft_rate_bps / 1e6, target, within ? "" : "  OUTSIDE ONE STEP"));
  }
  info(fmt("GSs at %.0f km: %lld", spec.scenario.cell_range_km,
           static_cast<long long>(gs_count(spec.scenario.cell_range_km, spec.cost.area_km2))));
  const double t = sw.seconds();
  return {ok && t < 60.0, fmt("minimal N_T within one square-array step at 50/75/100 MHz, %.2f s (< 60 s)", t)};
}

// ---------------------------------------------------------------- TCO optimizer

struct ReferenceDesign {
  double range_km;
  int tx;
  int rx;
};

// Rows: c_B in {0.01, 0.0075, 0.005, 0.0025, 0.001}; columns: C_el in {1, 2.5, 5, 7.5, 10}.
const std::map<double, std::array<std::array<ReferenceDesign, 5>, 5>> kReferenceDesigns = {
    {480e6,
     {{{{{102.7, 3600, 324}, {107.1, 3600, 169}, {103.5, 2025, 121}, {97.27, 1681, 81}, {91.56, 1156, 81}}},
       {{{111.7, 3600, 324}, {114.4, 3600, 169}, {104, 1936, 100}, {98.72, 1444, 81}, {88.52, 961, 64}}},
       {{{116.3, 3600, 225}, {123.8, 3600, 121}, {118.3, 2209, 81}, {103.5, 1369, 64}, {109.7, 1156, 64}}},
       {{{135.1, 3600, 144}, {140.4, 3364, 100}, {125, 1849, 64}, {114.9, 1296, 49}, {109.7, 900, 36}}},
       {{{138.7, 2704, 100}, {144.4, 2116, 64}, {144.4, 2401, 49}, {123.2, 1296, 36}, {125.3, 961, 36}}}}}},
    {1200e6,
     {{{{{89.06, 3600, 625}, {88.31, 3481, 324}, {84.44, 2601, 196}, {79.84, 1764, 169}, {77.86, 1444, 144}}},
       {{{89.06, 3600, 576}, {86.6, 3600, 289}, {79.05, 1764, 196}, {75, 1225, 121}, {75.17, 1296, 121}}},
       {{{95.61, 3600, 441}, {103, 3600, 225}, {89.39, 2025, 144}, {85.48, 1521, 121}, {79.05, 961, 100}}},
       {{{112.4, 3600, 324}, {108.7, 3600, 169}, {99.17, 1936, 100}, {101.3, 1764, 100}, {97.84, 1156, 81}}},
       {{{132.9, 3600, 196}, {131.8, 3600, 121}, {115.4, 1936, 81}, {104.2, 1225, 49}, {104.2, 1089, 49}}}}}},
};

Outcome tco_dominance() {
  const Stopwatch sw;
  const ExperimentSpec spec = default_spec(ExperimentKind::kTcoSweep);
  const std::array<double, 5> spectrum = {0.01, 0.0075, 0.005, 0.0025, 0.001};
  const std::array<double, 5> element = {1, 2.5, 5, 7.5, 10};
  const TcoOptions options{spec.limits, spec.analytic};
  int dominated = 0;
  int compared = 0;
  int infeasible_refs = 0;
  int optimizer_failures = 0;
  bool signs_ok = true;
  for (const auto& [threshold, designs] : kReferenceDesigns) {
    const DeploymentSearch search(threshold, spec.scenario, spec.search, options, 0);
    std::array<std::array<double, 5>, 5> tco{};
    std::array<std::array<int, 5>, 5> nt{};
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 5; ++j) {
        CostModel cost = spec.cost;
        cost.spectrum_eur_per_mhz_pop = spectrum[i];
        cost.element_eur = element[j];
        DeploymentSolution best;
        try {
          best = search.optimize(cost);
        } catch (const InfeasibleError& e) {
          ++optimizer_failures;
          info(fmt("R = %.0f Mbit/s, c_B = %g, C_el = %g: optimizer infeasible (%s)", threshold / 1e6, spectrum[i],
                   element[j], e.what()));
          continue;
        }
        tco[i][j] = best.total_eur;
        nt[i][j] = best.candidate.tx_elements;

        const ReferenceDesign& ref = designs[i][j];
        ScenarioConfig s = spec.scenario;
        s.cell_range_km = ref.range_km;
        s.transmit_power_dbm = spec.limits.max_power_dbm;
        const double zeta = eight_face_design(2.0 * ref.range_km, s.altitude_min_km).zeta_bits;
        const auto mb = minimal_bandwidth(cell_terms(s, ref.tx, ref.rx, spec.analytic), s, ref.tx, ref.rx, zeta,
                                          threshold, spec.search);
        std::string ref_text = "reference infeasible";
        if (mb.feasible) {
          const auto r = evaluate_tco(Candidate{ref.range_km, ref.tx, ref.rx, s.transmit_power_dbm, mb.bandwidth_hz},
                                      threshold, spec.scenario, cost, options);
          if (r.feasible) {
            ++compared;
            const bool dom = best.total_eur <= r.total_eur * (1.0 + 1e-12);
            dominated += dom ? 1 : 0;
            ref_text = fmt("reference (%.2f km, %d, %d, %.2f MHz) %.4f MEUR%s", ref.range_km, ref.tx, ref.rx,
                           mb.bandwidth_hz / 1e6, r.total_eur / 1e6, dom ? "" : "  NOT DOMINATED");
          } else {
            ++infeasible_refs;
          }
        } else {
          ++infeasible_refs;
        }
        info(fmt("R = %4.0f Mbit/s, c_B = %-6g C_el = %-4g: optimum (%.2f km, %d, %d, %.2f MHz) %.4f MEUR; %s",
                 threshold / 1e6, spectrum[i], element[j], best.candidate.cell_range_km, best.candidate.tx_elements,
                 best.candidate.rx_elements, best.candidate.bandwidth_hz / 1e6, best.total_eur / 1e6,
                 ref_text.c_str()));
      }
    }
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 1; j < 5; ++j) {
        if (nt[i][j] > nt[i][j - 1]) {
          signs_ok = false;
          info(fmt("sign violation: N_T rises with C_el at R = %.0f, c_B = %g", threshold / 1e6, spectrum[i]));
        }
      }
    }
    for (std::size_t j = 0; j < 5; ++j) {
      for (std::size_t i = 1; i < 5; ++i) {
        // Rows run from the highest c_B down.
        if (tco[i][j] > tco[i - 1][j]) {
          signs_ok = false;
          info(fmt("sign violation: TCO falls with c_B at R = %.0f, C_el = %g", threshold / 1e6, element[j]));
        }
      }
    }
  }
  const double t = sw.seconds();
  info(fmt("reference designs infeasible under this model: %d of 50", infeasible_refs));
  return {optimizer_failures == 0 && dominated == compared && signs_ok && t < 1800.0,
          fmt("optimum dominates %d of %d feasible reference designs, sensitivity signs %s, %.1f s (< 1800 s)",
              dominated, compared, signs_ok ? "match" : "differ", t)};
}

// ---------------------------------------------------------------- determinism

Outcome determinism() {
  const Stopwatch sw;
  bool ok = true;
  int checks = 0;
  auto compare = [&](const std::string& what, const std::string& a, const std::string& b) {
    ++checks;
    if (a != b) {
      ok = false;
      info("differs: " + what);
    }
  };
  for (int n : {100, 400, 900, 1600}) {
    const auto a = PlanarArray::square(n, kLambda);
    const AlignmentSampler sampler{75.0, 9.0, ElevationRange::kAsPrinted};
    const auto one = bits(alignment_monte_carlo(0.5, a, a, sampler, 10000, kSeed, 1));
    compare("alignment N=" + std::to_string(n) + " threads 1 vs all",
            one, bits(alignment_monte_carlo(0.5, a, a, sampler, 10000, kSeed, 0)));
    compare("alignment N=" + std::to_string(n) + " threads 1 vs 3",
            one, bits(alignment_monte_carlo(0.5, a, a, sampler, 10000, kSeed, 3)));
  }
  for (const auto& p : sweep_points()) {
    const auto label = fmt("Monte Carlo N_T=%d r=%.0f", p.tx, p.range_km);
    const auto one = bits(run_point(p, 1));
    compare(label + " threads 1 vs all", one, bits(run_point(p, 0)));
    compare(label + " threads 1 vs 5", one, bits(run_point(p, 5)));
  }
  auto spec = default_spec(ExperimentKind::kRateCurve);
  spec.trials = 50;
  std::string first;
  for (unsigned threads : {1u, 4u, 0u}) {
    spec.threads = threads;
    std::ostringstream os;
    write_csv(run_experiment(spec).table, os);
    if (first.empty()) {
      first = os.str();
    } else {
      compare("rate-curve CSV threads " + std::to_string(threads), first, os.str());
    }
  }
  const double t = sw.seconds();
  return {ok, fmt("%d comparisons of hex-float aggregates and CSV bytes, all identical: %s, %.1f s", checks,
                  ok ? "yes" : "no", t)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DA2GC acceptance checks"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"facet table", facet_table},
      {"doppler bound", doppler_bound},
      {"beam alignment", [] { return alignment_consistency(0); }},
      {"active aircraft", active_aircraft_model},
      {"rate model", rate_model},
      {"zero forcing", zero_forcing_property},
      {"intercell suppression", intercell},
      {"GS/array tradeoff", array_tradeoff},
      {"TCO dominance", tco_dominance},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only != 0 && only != id) continue;
    std::cout << "C" << id << " " << criteria[i].first << '\n';
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " C" << id << ": " << o.summary << '\n' << std::flush;
  }
  return failures == 0 ? 0 : 1;
}
