#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "da2gc/analytic_model.hpp"
#include "da2gc/arrays.hpp"
#include "da2gc/beamforming_sim.hpp"
#include "da2gc/facet_design.hpp"
#include "da2gc/scenario.hpp"
#include "da2gc/tco.hpp"

namespace da2gc {

enum class ExperimentKind { kFacets, kDoppler, kAlignment, kSimulate, kRateCurve, kGsTradeoff, kTco, kTcoSweep };

/// CLI subcommand name of each kind ("facets", "rate-curve", ...).
std::string_view kind_name(ExperimentKind kind);
std::optional<ExperimentKind> kind_from_name(std::string_view name);

enum class OutputFormat { kCsv, kJson };

struct SweepAxis {
  std::string parameter;
  std::vector<double> values;
};

struct DopplerOptions {
  double track_step_km = 0.5;
};

struct GsTradeoffOptions {
  int tx_rx_ratio = 4;  // N_T = ratio * N_R; must be a perfect square
  int max_rx_side = 40;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kSimulate;
  ScenarioConfig scenario;
  int tx_elements = 625;
  int rx_elements = 400;
  CostModel cost;
  AnalyticOptions analytic;
  SimOptions simulation;
  ElevationRange alignment_range = ElevationRange::kAsPrinted;
  FacetSearchBounds facet_bounds;
  DopplerOptions doppler;
  GsTradeoffOptions gs_tradeoff;
  DesignLimits limits;
  SearchBounds search;
  std::optional<Candidate> candidate;  // tco: evaluate this tuple instead of optimizing
  double rate_threshold_bps = 480e6;
  std::vector<SweepAxis> sweep;
  int trials = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string output_dir = ".";
  OutputFormat format = OutputFormat::kCsv;
};

/// Fully-defaulted spec for an experiment kind.
ExperimentSpec default_spec(ExperimentKind kind);

struct ConfigResult {
  std::optional<ExperimentSpec> spec;
  std::vector<std::string> errors;  // "field.path: message"
};

/// Parses and validates a JSON config for `kind`. Either a complete spec or every
/// error found; never a partial spec. Empty text means all defaults.
ConfigResult validate_config(std::string_view text, ExperimentKind kind);

/// validate_config that throws ConfigError with all errors.
ExperimentSpec load_config(std::string_view text, ExperimentKind kind);

/// Resolved spec in config form; feeding it back through validate_config gives
/// the same spec.
nlohmann::ordered_json to_json(const ExperimentSpec& spec);

/// Sweep parameter names accepted for `kind`.
std::vector<std::string> sweep_parameters(ExperimentKind kind);

/// Sets one sweep parameter. Throws ConfigError for unknown names or values.
void apply_parameter(ExperimentSpec& spec, const std::string& name, double value);

/// Closest candidate by edit distance, or empty when nothing is close.
std::string suggest(std::string_view word, const std::vector<std::string>& candidates);

}  // namespace da2gc
