#include "da2gc/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "da2gc/errors.hpp"

namespace da2gc {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct KindName {
  ExperimentKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {ExperimentKind::kFacets, "facets"},         {ExperimentKind::kDoppler, "doppler"},
    {ExperimentKind::kAlignment, "alignment"},   {ExperimentKind::kSimulate, "simulate"},
    {ExperimentKind::kRateCurve, "rate-curve"},  {ExperimentKind::kGsTradeoff, "gs-tradeoff"},
    {ExperimentKind::kTco, "tco"},               {ExperimentKind::kTcoSweep, "tco-sweep"},
};

// One config field. Numbers are stored in SI units and scaled on the way in/out.
struct Field {
  enum class Type { kNumber, kInteger, kBool, kChoice };
  std::string key;
  Type type = Type::kNumber;
  double scale = 1.0;
  std::function<double*(ExperimentSpec&)> number;
  std::function<int*(ExperimentSpec&)> integer;
  std::function<bool*(ExperimentSpec&)> flag;
  std::vector<std::string> choices;
  std::function<std::string(const ExperimentSpec&)> get_choice;
  std::function<void(ExperimentSpec&, const std::string&)> set_choice;
};

Field number(std::string key, double scale, std::function<double*(ExperimentSpec&)> ref) {
  Field f;
  f.key = std::move(key);
  f.scale = scale;
  f.number = std::move(ref);
  return f;
}

Field integer(std::string key, std::function<int*(ExperimentSpec&)> ref) {
  Field f;
  f.key = std::move(key);
  f.type = Field::Type::kInteger;
  f.integer = std::move(ref);
  return f;
}

Field flag(std::string key, std::function<bool*(ExperimentSpec&)> ref) {
  Field f;
  f.key = std::move(key);
  f.type = Field::Type::kBool;
  f.flag = std::move(ref);
  return f;
}

template <typename E, typename Ref>
Field choice(std::string key, std::vector<std::pair<std::string, E>> options, Ref ref) {
  Field f;
  f.key = std::move(key);
  f.type = Field::Type::kChoice;
  for (const auto& o : options) f.choices.push_back(o.first);
  f.get_choice = [options, ref](const ExperimentSpec& s) {
    const E value = *ref(const_cast<ExperimentSpec&>(s));
    for (const auto& o : options) {
      if (o.second == value) return o.first;
    }
    return options.front().first;
  };
  f.set_choice = [options, ref](ExperimentSpec& s, const std::string& name) {
    for (const auto& o : options) {
      if (o.first == name) *ref(s) = o.second;
    }
  };
  return f;
}

struct Section {
  std::string name;  // empty for top-level fields
  std::vector<Field> fields;
};

const std::vector<Section>& sections() {
  using S = ExperimentSpec;
  static const std::vector<Section> kSections = {
      {"scenario",
       {number("frequency_ghz", 1e9, [](S& s) { return &s.scenario.carrier_frequency_hz; }),
        number("bandwidth_mhz", 1e6, [](S& s) { return &s.scenario.bandwidth_hz; }),
        number("power_dbm", 1.0, [](S& s) { return &s.scenario.transmit_power_dbm; }),
        number("link_margin_db", 1.0, [](S& s) { return &s.scenario.link_margin_db; }),
        number("rician_factor_db", 1.0, [](S& s) { return &s.scenario.rician_factor_db; }),
        number("aircraft_density_per_km2", 1.0,
               [](S& s) { return &s.scenario.aircraft_density_per_km2; }),
        number("altitude_min_km", 1.0, [](S& s) { return &s.scenario.altitude_min_km; }),
        number("altitude_max_km", 1.0, [](S& s) { return &s.scenario.altitude_max_km; }),
        number("cell_range_km", 1.0, [](S& s) { return &s.scenario.cell_range_km; }),
        number("alignment_sigma_deg", 1.0, [](S& s) { return &s.scenario.alignment_sigma_deg; }),
        number("speed_kmh", 1.0, [](S& s) { return &s.scenario.aircraft_speed_kmh; })}},
      {"arrays",
       {integer("tx_elements", [](S& s) { return &s.tx_elements; }),
        integer("rx_elements", [](S& s) { return &s.rx_elements; })}},
      {"cost_model",
       {number("base_unit_eur", 1.0, [](S& s) { return &s.cost.base_unit_eur; }),
        number("element_eur", 1.0, [](S& s) { return &s.cost.element_eur; }),
        number("spectrum_eur_per_mhz_pop", 1.0, [](S& s) { return &s.cost.spectrum_eur_per_mhz_pop; }),
        number("population", 1.0, [](S& s) { return &s.cost.population; }),
        number("energy_eur_per_kwh", 1.0, [](S& s) { return &s.cost.energy_eur_per_kwh; }),
        number("lease_eur_per_month", 1.0, [](S& s) { return &s.cost.lease_eur_per_month; }),
        number("maintenance_fraction", 1.0, [](S& s) { return &s.cost.maintenance_fraction; }),
        number("idle_power_w", 1.0, [](S& s) { return &s.cost.idle_power_w; }),
        number("rf_chain_power_w", 1.0, [](S& s) { return &s.cost.rf_chain_power_w; }),
        number("synthesizer_power_w", 1.0, [](S& s) { return &s.cost.synthesizer_power_w; }),
        number("pa_efficiency", 1.0, [](S& s) { return &s.cost.pa_efficiency; }),
        number("traffic_growth", 1.0, [](S& s) { return &s.cost.traffic_growth; }),
        number("flight_hours", 1.0, [](S& s) { return &s.cost.flight_hours; }),
        choice<FlightHoursBasis>("flight_hours_basis",
                                 {{"daily_times_days", FlightHoursBasis::kDailyTimesDays},
                                  {"annual_times_horizon", FlightHoursBasis::kAnnualTimesHorizon}},
                                 [](S& s) { return &s.cost.flight_hours_basis; }),
        number("area_km2", 1.0, [](S& s) { return &s.cost.area_km2; }),
        integer("air_stations", [](S& s) { return &s.cost.air_stations; }),
        integer("rf_chains", [](S& s) { return &s.cost.rf_chains; }),
        integer("horizon_years", [](S& s) { return &s.cost.horizon_years; }),
        integer("faces_per_station", [](S& s) { return &s.cost.faces_per_station; }),
        choice<LeaseMode>("lease_mode",
                          {{"per_site", LeaseMode::kPerSite}, {"single_site", LeaseMode::kSingleSite}},
                          [](S& s) { return &s.cost.lease_mode; })}},
      {"analytic",
       {choice<SlotAltitude>("slot_altitude",
                             {{"minimum", SlotAltitude::kMinimum}, {"mean", SlotAltitude::kMean}},
                             [](S& s) { return &s.analytic.slot_altitude; }),
        choice<SlotBeamwidth>("slot_beamwidth",
                              {{"transmitter", SlotBeamwidth::kTransmitter},
                               {"receiver", SlotBeamwidth::kReceiver},
                               {"narrowest", SlotBeamwidth::kNarrowest}},
                              [](S& s) { return &s.analytic.slot_beamwidth; })}},
      {"simulation",
       {choice<NlosMode>("nlos", {{"projected", NlosMode::kProjected}, {"full", NlosMode::kFull}},
                         [](S& s) { return &s.simulation.nlos; }),
        choice<PrecoderNormalization>("precoder_normalization",
                                      {{"unit_columns", PrecoderNormalization::kUnitColumns},
                                       {"none", PrecoderNormalization::kNone}},
                                      [](S& s) { return &s.simulation.normalization; }),
        number("zeta_bits", 1.0, [](S& s) { return &s.simulation.zeta_bits; })}},
      {"alignment",
       {choice<ElevationRange>("elevation_range",
                               {{"as_printed", ElevationRange::kAsPrinted},
                                {"geometric", ElevationRange::kGeometric}},
                               [](S& s) { return &s.alignment_range; })}},
      {"facets",
       {integer("max_rows", [](S& s) { return &s.facet_bounds.max_rows; }),
        integer("max_columns", [](S& s) { return &s.facet_bounds.max_columns; })}},
      {"doppler", {number("track_step_km", 1.0, [](S& s) { return &s.doppler.track_step_km; })}},
      {"gs_tradeoff",
       {integer("tx_rx_ratio", [](S& s) { return &s.gs_tradeoff.tx_rx_ratio; }),
        integer("max_rx_side", [](S& s) { return &s.gs_tradeoff.max_rx_side; })}},
      {"limits",
       {number("max_power_dbm", 1.0, [](S& s) { return &s.limits.max_power_dbm; }),
        number("tx_aperture_m", 1.0, [](S& s) { return &s.limits.tx_aperture_m; }),
        number("rx_aperture_m", 1.0, [](S& s) { return &s.limits.rx_aperture_m; })}},
      {"search",
       {number("range_min_km", 1.0, [](S& s) { return &s.search.range_min_km; }),
        number("range_max_km", 1.0, [](S& s) { return &s.search.range_max_km; }),
        number("range_grid_km", 1.0, [](S& s) { return &s.search.range_grid_km; }),
        number("bandwidth_min_mhz", 1e6, [](S& s) { return &s.search.bandwidth_min_hz; }),
        number("bandwidth_max_mhz", 1e6, [](S& s) { return &s.search.bandwidth_max_hz; }),
        number("bandwidth_grid_mhz", 1e6, [](S& s) { return &s.search.bandwidth_grid_hz; }),
        integer("tx_side_min", [](S& s) { return &s.search.tx_side_min; }),
        integer("tx_side_max", [](S& s) { return &s.search.tx_side_max; }),
        integer("rx_side_min", [](S& s) { return &s.search.rx_side_min; }),
        integer("rx_side_max", [](S& s) { return &s.search.rx_side_max; }),
        flag("free_power", [](S& s) { return &s.search.free_power; }),
        number("power_min_dbm", 1.0, [](S& s) { return &s.search.power_min_dbm; })}},
      {"",
       {number("rate_threshold_mbps", 1e6, [](S& s) { return &s.rate_threshold_bps; }),
        integer("trials", [](S& s) { return &s.trials; }),
        choice<OutputFormat>("format", {{"csv", OutputFormat::kCsv}, {"json", OutputFormat::kJson}},
                             [](S& s) { return &s.format; })}},
  };
  return kSections;
}

const std::vector<std::string> kCandidateKeys = {"cell_range_km", "tx_elements", "rx_elements",
                                                 "power_dbm", "bandwidth_mhz"};
const std::vector<std::string> kTopLevelExtra = {"experiment", "seed", "threads", "output_dir",
                                                 "sweep", "candidate"};

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string unknown_key_message(const std::string& path, const std::string& key,
                                const std::vector<std::string>& known) {
  std::string msg = path + ": unknown key";
  const std::string hint = suggest(key, known);
  if (!hint.empty()) msg += " (did you mean '" + hint + "'?)";
  return msg;
}

// Reads one field from `value` into `spec`, appending errors with `path`.
void read_field(const Field& f, const json& value, const std::string& path, ExperimentSpec& spec,
                std::vector<std::string>& errors) {
  switch (f.type) {
    case Field::Type::kNumber:
      if (!value.is_number()) {
        errors.push_back(path + ": expected a number");
        return;
      }
      *f.number(spec) = value.get<double>() * f.scale;
      return;
    case Field::Type::kInteger: {
      if (!value.is_number()) {
        errors.push_back(path + ": expected an integer");
        return;
      }
      const double d = value.get<double>();
      if (d != std::floor(d) || std::abs(d) > 2e9) {
        errors.push_back(path + ": expected an integer, got " + format_number(d));
        return;
      }
      *f.integer(spec) = static_cast<int>(d);
      return;
    }
    case Field::Type::kBool:
      if (!value.is_boolean()) {
        errors.push_back(path + ": expected true or false");
        return;
      }
      *f.flag(spec) = value.get<bool>();
      return;
    case Field::Type::kChoice: {
      std::string options;
      for (const auto& c : f.choices) options += (options.empty() ? "" : ", ") + c;
      if (!value.is_string()) {
        errors.push_back(path + ": expected one of " + options);
        return;
      }
      const auto name = value.get<std::string>();
      if (std::find(f.choices.begin(), f.choices.end(), name) == f.choices.end()) {
        std::string msg = path + ": '" + name + "' is not one of " + options;
        const std::string hint = suggest(name, f.choices);
        if (!hint.empty()) msg += " (did you mean '" + hint + "'?)";
        errors.push_back(msg);
        return;
      }
      f.set_choice(spec, name);
      return;
    }
  }
}

bool kind_has_sweep_parameter(ExperimentKind kind, const std::string& name) {
  const auto names = sweep_parameters(kind);
  return std::find(names.begin(), names.end(), name) != names.end();
}

// Value checks on a fully-read spec. `prefix` is prepended to every path.
void check_values(const ExperimentSpec& s, const std::string& prefix, std::vector<std::string>& errors) {
  auto err = [&](const std::string& path, const std::string& msg) {
    errors.push_back(prefix + path + ": " + msg);
  };
  const auto& sc = s.scenario;
  if (!(sc.carrier_frequency_hz > 0.0) || !std::isfinite(sc.carrier_frequency_hz))
    err("scenario.frequency_ghz", "must be > 0");
  if (!(sc.bandwidth_hz > 0.0) || !std::isfinite(sc.bandwidth_hz)) err("scenario.bandwidth_mhz", "must be > 0");
  if (!std::isfinite(sc.transmit_power_dbm)) err("scenario.power_dbm", "must be finite");
  if (!std::isfinite(sc.link_margin_db)) err("scenario.link_margin_db", "must be finite");
  if (!std::isfinite(sc.rician_factor_db)) err("scenario.rician_factor_db", "must be finite");
  if (!(sc.aircraft_density_per_km2 >= 0.0)) err("scenario.aircraft_density_per_km2", "must be >= 0");
  if (!(sc.altitude_min_km > 0.0)) err("scenario.altitude_min_km", "must be > 0");
  if (!(sc.altitude_min_km < sc.altitude_max_km)) {
    errors.push_back(prefix + "scenario.altitude_min_km, " + prefix + "scenario.altitude_max_km: altitude_min_km (" +
                     format_number(sc.altitude_min_km) + ") must be below altitude_max_km (" +
                     format_number(sc.altitude_max_km) + ")");
  }
  if (!(sc.cell_range_km > 0.0)) err("scenario.cell_range_km", "must be > 0");
  if (!(sc.alignment_sigma_deg >= 0.0)) err("scenario.alignment_sigma_deg", "must be >= 0");
  if (!(sc.aircraft_speed_kmh >= 0.0)) err("scenario.speed_kmh", "must be >= 0");
  if (square_side(s.tx_elements) < 1) err("arrays.tx_elements", "must be a positive perfect square");
  if (square_side(s.rx_elements) < 1) err("arrays.rx_elements", "must be a positive perfect square");
  for (const auto& v : s.cost.violations()) {
    const auto key = v.substr(0, v.find(' '));
    err("cost_model." + key, v.substr(key.size() + 1));
  }
  if (s.facet_bounds.max_rows < 1) err("facets.max_rows", "must be >= 1");
  if (s.facet_bounds.max_columns < 2) err("facets.max_columns", "must be >= 2");
  if (!(s.doppler.track_step_km > 0.0)) err("doppler.track_step_km", "must be > 0");
  if (s.gs_tradeoff.tx_rx_ratio < 1 || square_side(s.gs_tradeoff.tx_rx_ratio) < 1)
    err("gs_tradeoff.tx_rx_ratio", "must be a positive perfect square");
  if (s.gs_tradeoff.max_rx_side < 1) err("gs_tradeoff.max_rx_side", "must be >= 1");
  if (!(s.limits.tx_aperture_m > 0.0)) err("limits.tx_aperture_m", "must be > 0");
  if (!(s.limits.rx_aperture_m > 0.0)) err("limits.rx_aperture_m", "must be > 0");
  if (!std::isfinite(s.limits.max_power_dbm)) err("limits.max_power_dbm", "must be finite");
  const auto& b = s.search;
  if (!(b.range_min_km > 0.0)) err("search.range_min_km", "must be > 0");
  if (!(b.range_min_km <= b.range_max_km)) err("search.range_max_km", "must be >= search.range_min_km");
  if (!(b.range_grid_km > 0.0)) err("search.range_grid_km", "must be > 0");
  if (!(b.bandwidth_min_hz > 0.0)) err("search.bandwidth_min_mhz", "must be > 0");
  if (!(b.bandwidth_min_hz <= b.bandwidth_max_hz))
    err("search.bandwidth_max_mhz", "must be >= search.bandwidth_min_mhz");
  if (!(b.bandwidth_grid_hz > 0.0)) err("search.bandwidth_grid_mhz", "must be > 0");
  if (b.tx_side_min < 1 || b.tx_side_min > b.tx_side_max) err("search.tx_side_min", "must be in [1, tx_side_max]");
  if (b.rx_side_min < 1 || b.rx_side_min > b.rx_side_max) err("search.rx_side_min", "must be in [1, rx_side_max]");
  if (b.free_power && !(b.power_min_dbm <= s.limits.max_power_dbm))
    err("search.power_min_dbm", "must be <= limits.max_power_dbm");
  if (s.candidate) {
    if (!(s.candidate->cell_range_km > 0.0)) err("candidate.cell_range_km", "must be > 0");
    if (square_side(s.candidate->tx_elements) < 1) err("candidate.tx_elements", "must be a positive perfect square");
    if (square_side(s.candidate->rx_elements) < 1) err("candidate.rx_elements", "must be a positive perfect square");
    if (!(s.candidate->bandwidth_hz > 0.0)) err("candidate.bandwidth_mhz", "must be > 0");
  }
  if (!(s.rate_threshold_bps >= 0.0)) err("rate_threshold_mbps", "must be >= 0");
  if (s.trials < 1) err("trials", "must be >= 1");
}

}  // namespace

std::string_view kind_name(ExperimentKind kind) {
  for (const auto& k : kKindNames) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

std::optional<ExperimentKind> kind_from_name(std::string_view name) {
  for (const auto& k : kKindNames) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

std::string suggest(std::string_view word, const std::vector<std::string>& candidates) {
  auto distance = [](std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
      std::size_t diag = row[0];
      row[0] = i;
      for (std::size_t j = 1; j <= b.size(); ++j) {
        const std::size_t up = row[j];
        row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
        diag = up;
      }
    }
    return row[b.size()];
  };
  std::string best;
  std::size_t best_d = std::max<std::size_t>(2, word.size() / 3) + 1;
  for (const auto& c : candidates) {
    const std::size_t d = distance(word, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

ExperimentSpec default_spec(ExperimentKind kind) {
  ExperimentSpec s;
  s.kind = kind;
  switch (kind) {
    case ExperimentKind::kFacets:
      s.sweep = {{"isd_km", {100, 150, 200, 300, 400}}};
      break;
    case ExperimentKind::kDoppler:
      s.scenario.cell_range_km = 150.0;
      s.sweep = {{"altitude_km", {9, 10, 11, 12, 13}}, {"offset_km", {0, 10, 25, 50, 75, 100, 150}}};
      break;
    case ExperimentKind::kAlignment:
      s.scenario.alignment_sigma_deg = 0.5;
      s.trials = 10000;
      s.sweep = {{"elements", {100, 400, 900, 1600}}};
      break;
    case ExperimentKind::kSimulate:
      break;
    case ExperimentKind::kRateCurve: {
      std::vector<double> ranges;
      for (int r = 50; r <= 150; r += 10) ranges.push_back(r);
      s.sweep = {{"tx_elements", {625, 1225}}, {"cell_range_km", ranges}};
      break;
    }
    case ExperimentKind::kGsTradeoff:
      s.scenario.transmit_power_dbm = 58.0;
      s.scenario.cell_range_km = 60.0;
      s.rate_threshold_bps = 1.2e9;
      s.sweep = {{"bandwidth_mhz", {50, 75, 100}}};
      break;
    case ExperimentKind::kTco:
      break;
    case ExperimentKind::kTcoSweep:
      s.sweep = {{"spectrum_eur_per_mhz_pop", {0.01, 0.0075, 0.005, 0.0025, 0.001}},
                 {"element_eur", {1, 2.5, 5, 7.5, 10}}};
      break;
  }
  return s;
}

std::vector<std::string> sweep_parameters(ExperimentKind kind) {
  std::vector<std::string> names;
  for (const auto& sec : sections()) {
    if (sec.name != "scenario" && sec.name != "arrays" && sec.name != "cost_model") continue;
    for (const auto& f : sec.fields) {
      if (f.type == Field::Type::kNumber || f.type == Field::Type::kInteger) names.push_back(f.key);
    }
  }
  names.push_back("rate_threshold_mbps");
  names.push_back("elements");
  switch (kind) {
    case ExperimentKind::kFacets:
      names.push_back("isd_km");
      break;
    case ExperimentKind::kDoppler:
      names.push_back("altitude_km");
      names.push_back("offset_km");
      break;
    default:
      break;
  }
  return names;
}

void apply_parameter(ExperimentSpec& spec, const std::string& name, double value) {
  if (name == "elements") {
    if (value != std::floor(value)) throw ConfigError("elements must be an integer");
    spec.tx_elements = spec.rx_elements = static_cast<int>(value);
    return;
  }
  for (const auto& sec : sections()) {
    if (sec.name != "scenario" && sec.name != "arrays" && sec.name != "cost_model" && !sec.name.empty())
      continue;
    for (const auto& f : sec.fields) {
      if (f.key != name) continue;
      if (f.type == Field::Type::kNumber) {
        *f.number(spec) = value * f.scale;
        return;
      }
      if (f.type == Field::Type::kInteger) {
        if (value != std::floor(value)) throw ConfigError(name + " must be an integer");
        *f.integer(spec) = static_cast<int>(value);
        return;
      }
    }
  }
  // Experiment-specific axes are read by the runner itself.
  if (kind_has_sweep_parameter(spec.kind, name)) return;
  std::string msg = "unknown sweep parameter '" + name + "'";
  const auto hint = suggest(name, sweep_parameters(spec.kind));
  if (!hint.empty()) msg += " (did you mean '" + hint + "'?)";
  throw ConfigError(msg);
}

ConfigResult validate_config(std::string_view text, ExperimentKind kind) {
  ConfigResult result;
  auto& errors = result.errors;
  ExperimentSpec spec = default_spec(kind);

  json root = json::object();
  const bool blank = std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  if (!blank) {
    try {
      root = json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
      errors.push_back(std::string("config: not valid JSON: ") + e.what());
      return result;
    }
  }
  if (!root.is_object()) {
    errors.push_back("config: top level must be an object");
    return result;
  }

  std::vector<std::string> top_keys = kTopLevelExtra;
  for (const auto& sec : sections()) {
    if (sec.name.empty()) {
      for (const auto& f : sec.fields) top_keys.push_back(f.key);
    } else {
      top_keys.push_back(sec.name);
    }
  }

  for (auto it = root.begin(); it != root.end(); ++it) {
    const std::string& key = it.key();
    const json& value = it.value();
    if (std::find(top_keys.begin(), top_keys.end(), key) == top_keys.end()) {
      errors.push_back(unknown_key_message(key, key, top_keys));
      continue;
    }
    if (key == "experiment") {
      if (!value.is_string() || value.get<std::string>() != kind_name(kind)) {
        errors.push_back("experiment: config is for '" + (value.is_string() ? value.get<std::string>() : value.dump()) +
                         "' but the command runs '" + std::string(kind_name(kind)) + "'");
      }
      continue;
    }
    if (key == "seed") {
      if (value.is_number_unsigned() || (value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
        spec.seed = value.get<std::uint64_t>();
      } else {
        errors.push_back("seed: expected a non-negative integer");
      }
      continue;
    }
    if (key == "threads") {
      if (value.is_number_integer() && value.get<std::int64_t>() >= 0 && value.get<std::int64_t>() < 4096) {
        spec.threads = static_cast<unsigned>(value.get<std::int64_t>());
      } else {
        errors.push_back("threads: expected an integer in [0, 4096)");
      }
      continue;
    }
    if (key == "output_dir") {
      if (value.is_string() && !value.get<std::string>().empty()) {
        spec.output_dir = value.get<std::string>();
      } else {
        errors.push_back("output_dir: expected a non-empty string");
      }
      continue;
    }
    if (key == "candidate") {
      if (value.is_null()) continue;
      if (!value.is_object()) {
        errors.push_back("candidate: expected an object");
        continue;
      }
      Candidate c;
      c.transmit_power_dbm = spec.limits.max_power_dbm;
      for (auto ci = value.begin(); ci != value.end(); ++ci) {
        const std::string path = "candidate." + ci.key();
        const json& v = ci.value();
        if (std::find(kCandidateKeys.begin(), kCandidateKeys.end(), ci.key()) == kCandidateKeys.end()) {
          errors.push_back(unknown_key_message(path, ci.key(), kCandidateKeys));
          continue;
        }
        if (!v.is_number()) {
          errors.push_back(path + ": expected a number");
          continue;
        }
        const double d = v.get<double>();
        if (ci.key() == "cell_range_km") c.cell_range_km = d;
        if (ci.key() == "power_dbm") c.transmit_power_dbm = d;
        if (ci.key() == "bandwidth_mhz") c.bandwidth_hz = d * 1e6;
        if (ci.key() == "tx_elements" || ci.key() == "rx_elements") {
          if (d != std::floor(d) || d < 1 || d > 1e9) {
            errors.push_back(path + ": expected a positive integer");
            continue;
          }
          (ci.key() == "tx_elements" ? c.tx_elements : c.rx_elements) = static_cast<int>(d);
        }
      }
      spec.candidate = c;
      continue;
    }
    if (key == "sweep") {
      if (!value.is_array()) {
        errors.push_back("sweep: expected a list of {parameter, values} objects");
        continue;
      }
      spec.sweep.clear();
      std::set<std::string> seen;
      for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string path = "sweep[" + std::to_string(i) + "]";
        const json& axis = value[i];
        if (!axis.is_object() || !axis.contains("parameter") || !axis.contains("values")) {
          errors.push_back(path + ": expected {\"parameter\": name, \"values\": [numbers]}");
          continue;
        }
        for (auto ai = axis.begin(); ai != axis.end(); ++ai) {
          if (ai.key() != "parameter" && ai.key() != "values")
            errors.push_back(unknown_key_message(path + "." + ai.key(), ai.key(), {"parameter", "values"}));
        }
        if (!axis["parameter"].is_string()) {
          errors.push_back(path + ".parameter: expected a string");
          continue;
        }
        SweepAxis a;
        a.parameter = axis["parameter"].get<std::string>();
        if (!kind_has_sweep_parameter(kind, a.parameter)) {
          std::string msg = path + ".parameter: unknown parameter '" + a.parameter + "'";
          const auto hint = suggest(a.parameter, sweep_parameters(kind));
          if (!hint.empty()) msg += " (did you mean '" + hint + "'?)";
          errors.push_back(msg);
          continue;
        }
        if (!seen.insert(a.parameter).second) {
          errors.push_back(path + ".parameter: '" + a.parameter + "' is swept twice");
          continue;
        }
        const json& vals = axis["values"];
        if (!vals.is_array() || vals.empty()) {
          errors.push_back(path + ".values: expected a non-empty list of numbers");
          continue;
        }
        bool ok = true;
        for (std::size_t j = 0; j < vals.size(); ++j) {
          if (!vals[j].is_number()) {
            errors.push_back(path + ".values[" + std::to_string(j) + "]: expected a number");
            ok = false;
          } else {
            a.values.push_back(vals[j].get<double>());
          }
        }
        if (ok) spec.sweep.push_back(std::move(a));
      }
      continue;
    }

    // Plain sections and top-level fields.
    const Section* section = nullptr;
    for (const auto& sec : sections()) {
      if (sec.name == key) section = &sec;
    }
    if (section != nullptr) {
      if (!value.is_object()) {
        errors.push_back(key + ": expected an object");
        continue;
      }
      std::vector<std::string> known;
      for (const auto& f : section->fields) known.push_back(f.key);
      for (auto fi = value.begin(); fi != value.end(); ++fi) {
        const std::string path = key + "." + fi.key();
        const auto match = std::find_if(section->fields.begin(), section->fields.end(),
                                        [&](const Field& f) { return f.key == fi.key(); });
        if (match == section->fields.end()) {
          errors.push_back(unknown_key_message(path, fi.key(), known));
          continue;
        }
        read_field(*match, fi.value(), path, spec, errors);
      }
      continue;
    }
    for (const auto& sec : sections()) {
      if (!sec.name.empty()) continue;
      for (const auto& f : sec.fields) {
        if (f.key == key) read_field(f, value, key, spec, errors);
      }
    }
  }
  // Fields with type errors keep their defaults, so value checks still apply to the rest.
  const bool typed = errors.empty();
  check_values(spec, "", errors);
  if (!typed) return result;
  for (std::size_t i = 0; i < spec.sweep.size(); ++i) {
    for (std::size_t j = 0; j < spec.sweep[i].values.size(); ++j) {
      ExperimentSpec point = spec;
      const std::string path = "sweep[" + std::to_string(i) + "].values[" + std::to_string(j) + "]";
      try {
        apply_parameter(point, spec.sweep[i].parameter, spec.sweep[i].values[j]);
      } catch (const ConfigError& e) {
        errors.push_back(path + ": " + e.what());
        continue;
      }
      std::vector<std::string> point_errors;
      check_values(point, "", point_errors);
      for (const auto& e : point_errors) errors.push_back(path + " -> " + e);
    }
  }
  if (errors.empty()) result.spec = std::move(spec);
  return result;
}

ExperimentSpec load_config(std::string_view text, ExperimentKind kind) {
  auto result = validate_config(text, kind);
  if (result.spec) return std::move(*result.spec);
  std::ostringstream msg;
  msg << "invalid config (" << result.errors.size() << " error" << (result.errors.size() == 1 ? "" : "s") << "):";
  for (const auto& e : result.errors) msg << "\n  " << e;
  throw ConfigError(msg.str());
}

ordered_json to_json(const ExperimentSpec& spec) {
  ordered_json out;
  out["experiment"] = std::string(kind_name(spec.kind));
  ExperimentSpec& s = const_cast<ExperimentSpec&>(spec);
  auto write = [&](ordered_json& target, const Field& f) {
    switch (f.type) {
      case Field::Type::kNumber:
        target[f.key] = *f.number(s) / f.scale;
        break;
      case Field::Type::kInteger:
        target[f.key] = *f.integer(s);
        break;
      case Field::Type::kBool:
        target[f.key] = *f.flag(s);
        break;
      case Field::Type::kChoice:
        target[f.key] = f.get_choice(spec);
        break;
    }
  };
  for (const auto& sec : sections()) {
    if (sec.name.empty()) {
      for (const auto& f : sec.fields) write(out, f);
      continue;
    }
    ordered_json obj = ordered_json::object();
    for (const auto& f : sec.fields) write(obj, f);
    out[sec.name] = obj;
  }
  if (spec.candidate) {
    out["candidate"] = {{"cell_range_km", spec.candidate->cell_range_km},
                        {"tx_elements", spec.candidate->tx_elements},
                        {"rx_elements", spec.candidate->rx_elements},
                        {"power_dbm", spec.candidate->transmit_power_dbm},
                        {"bandwidth_mhz", spec.candidate->bandwidth_hz / 1e6}};
  }
  ordered_json axes = ordered_json::array();
  for (const auto& a : spec.sweep) axes.push_back({{"parameter", a.parameter}, {"values", a.values}});
  out["sweep"] = axes;
  out["seed"] = spec.seed;
  out["threads"] = spec.threads;
  out["output_dir"] = spec.output_dir;
  return out;
}

}  // namespace da2gc
