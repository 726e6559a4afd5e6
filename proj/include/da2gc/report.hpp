#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "json.hpp"

#include "da2gc/config.hpp"
#include "da2gc/experiments.hpp"

namespace da2gc {

inline constexpr const char* kToolVersion = "1.0.0";

/// CSV: one '#'-prefixed schema row "name [unit]: description" per column, a
/// header row, then data rows. Doubles use 17 significant digits; NaN is empty.
void write_csv(const Table& table, std::ostream& out);

/// {"schema": [...], "rows": [{column: value}]}; NaN becomes null.
nlohmann::ordered_json table_to_json(const Table& table);

struct ReportPaths {
  std::filesystem::path table;
  std::filesystem::path manifest;
};

/// Writes <out>/<kind>.csv|json and <out>/<kind>.manifest.json. The manifest holds
/// the resolved config, seed, tool version, notes and wall time; the table file
/// holds no timestamps. Throws ConfigError when the directory is not writable.
ReportPaths write_report(const ExperimentSpec& spec, const ExperimentResult& result, double wall_seconds);

}  // namespace da2gc
