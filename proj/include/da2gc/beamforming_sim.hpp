#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <vector>

#include "da2gc/arrays.hpp"
#include "da2gc/errors.hpp"
#include "da2gc/geometry_channel.hpp"
#include "da2gc/random.hpp"
#include "da2gc/scenario.hpp"

namespace da2gc {

struct Aircraft {
  double radial_km = 0.0;
  double altitude_km = 0.0;
  double azimuth_rad = 0.0;
  LinkGeometry geometry;
};

struct AircraftPlacement {
  std::vector<Aircraft> aircraft;
  int count() const { return static_cast<int>(aircraft.size()); }
};

/// Draws aircraft_count(scenario) aircraft: r ~ U(0, r_max), h ~ U(h_min, h_max),
/// azimuth ~ U[0, 2 pi).
AircraftPlacement place_aircraft(Rng& rng, const ScenarioConfig& scenario);

struct Elimination {
  std::vector<int> codes;   // closest DFT codeword per aircraft
  std::vector<int> active;  // one survivor per codeword, ascending
};

/// Maps each link to its closest transmit codeword and keeps the first aircraft
/// per codeword.
Elimination dft_eliminate(const PlanarArray& tx, const std::vector<LinkGeometry>& links);

inline constexpr double kMaxZfCondition = 1e12;

template <typename Derived>
struct ZeroForcing {
  typename Derived::PlainObject precoder;
  double condition = 1.0;
  double residual = 0.0;  // ||H F - I||_F / ||I||_F
};

/// F_BB = H^H (H H^H)^-1. Throws RankDeficiencyError when cond(H) > 1e12.
template <typename Derived>
ZeroForcing<Derived> zero_forcing(const Eigen::MatrixBase<Derived>& h) {
  using Plain = typename Derived::PlainObject;
  const Plain hm = h;
  if (hm.rows() == 0 || hm.rows() > hm.cols()) {
    throw RankDeficiencyError("zero-forcing needs a non-empty wide or square channel",
                              std::numeric_limits<double>::infinity());
  }
  ZeroForcing<Derived> out;
  Eigen::JacobiSVD<Plain> svd(hm);
  const auto& s = svd.singularValues();
  const double smax = static_cast<double>(s(0));
  const double smin = static_cast<double>(s(s.size() - 1));
  out.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(out.condition <= kMaxZfCondition)) {
    throw RankDeficiencyError("effective channel is rank deficient", out.condition);
  }
  const Plain identity = Plain::Identity(hm.rows(), hm.rows());
  if (hm.rows() == hm.cols()) {
    out.precoder = hm.fullPivLu().solve(identity);
  } else {
    const Plain gram = hm * hm.adjoint();
    out.precoder = hm.adjoint() * gram.ldlt().solve(identity);
  }
  out.residual = static_cast<double>((hm * out.precoder - identity).norm() / identity.norm());
  return out;
}

/// How the scattered part of each aircraft's channel is drawn.
enum class NlosMode {
  kProjected,  // draw w^H H_nlos directly; it is CN(0, I) for unit-norm w
  kFull,       // draw the full N_R x N_T matrix, then combine
};

enum class PrecoderNormalization {
  kUnitColumns,  // columns of F_RF F_BB scaled to unit norm
  kNone,         // F_BB used as computed
};

struct SimOptions {
  NlosMode nlos = NlosMode::kProjected;
  PrecoderNormalization normalization = PrecoderNormalization::kUnitColumns;
  double zeta_bits = 0.0;  // beamsteering penalty subtracted per active stream
};

struct CellSimResult {
  double total_rate_bps = 0.0;
  double no_interference_rate_bps = 0.0;  // active aircraft served alone on their own beams
  std::vector<double> per_aircraft_rate_bps;  // SINR-based, zero for eliminated aircraft
  int aircraft = 0;                           // K
  int active = 0;                             // K_ac
  double zf_residual = 0.0;
  double zf_condition = 1.0;
  double max_leakage = 0.0;  // max over rows of |off-diagonal| / |diagonal| of H_S F

  double mean_aircraft_rate_bps() const { return aircraft > 0 ? total_rate_bps / aircraft : 0.0; }
};

/// One cell realization: placement, elimination, analog beams from the (optionally
/// perturbed) LOS angles, ZF on the estimated effective channel and the dual-
/// polarized sum rate on the true Rician channel.
CellSimResult simulate_cell(Rng& rng, const ScenarioConfig& scenario, const PlanarArray& tx,
                            const PlanarArray& rx, const SimOptions& options = {});

/// Same, for a given placement.
CellSimResult simulate_placement(Rng& rng, const ScenarioConfig& scenario,
                                 const AircraftPlacement& placement, const PlanarArray& tx,
                                 const PlanarArray& rx, const SimOptions& options = {});

struct MonteCarloStats {
  int trials = 0;
  double mean_total_rate_bps = 0.0;
  double std_total_rate_bps = 0.0;
  double mean_aircraft_rate_bps = 0.0;
  double std_aircraft_rate_bps = 0.0;
  double mean_no_interference_rate_bps = 0.0;
  double mean_active = 0.0;
  double std_active = 0.0;
  double mean_aircraft = 0.0;
  double max_zf_residual = 0.0;
};

/// Trial i runs simulate_cell with Rng(derive_seed(seed, i)). Aggregates are
/// reduced in trial order and do not depend on `threads`.
MonteCarloStats monte_carlo(const ScenarioConfig& scenario, const PlanarArray& tx,
                            const PlanarArray& rx, int trials, std::uint64_t seed,
                            const SimOptions& options = {}, unsigned threads = 0);

struct IntercellOptions {
  double off_axis_deg = 83.157;  // both GSs seen atan(75 / 9) from the array axis
  int window_points = 401;
};

struct IntercellResult {
  double suppression_db = 0.0;  // window-averaged interferer / serving power
  double point_db = 0.0;        // same ratio at the exact two directions
  double serving_azimuth_deg = 0.0;
  double interferer_azimuth_deg = 0.0;
};

/// Receive array beamformed toward the serving GS at azimuth `kappa_deg`; the
/// interfering GS sits at kappa - 180 deg with the same elevation. Powers are
/// averaged over one beamwidth in azimuth around each direction.
IntercellResult intercell_check(double kappa_deg, const PlanarArray& rx,
                                const IntercellOptions& options = {});

}  // namespace da2gc
