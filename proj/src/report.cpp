#include "da2gc/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "da2gc/errors.hpp"

namespace da2gc {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) {
    if (std::isnan(*d)) return "";
    std::ostringstream os;
    os << std::setprecision(17) << *d;
    return os.str();
  }
  return csv_escape(std::get<std::string>(cell));
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    const auto& c = table.columns[i];
    out << (i == 0 ? "# " : ",") << csv_escape(c.name + " [" + c.unit + "]: " + c.description);
  }
  out << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i == 0 ? "" : ",") << csv_escape(table.columns[i].name);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i == 0 ? "" : ",") << format_cell(row[i]);
    out << '\n';
  }
}

nlohmann::ordered_json table_to_json(const Table& table) {
  nlohmann::ordered_json out;
  auto schema = nlohmann::ordered_json::array();
  for (const auto& c : table.columns) {
    schema.push_back({{"name", c.name}, {"unit", c.unit}, {"description", c.description}});
  }
  out["schema"] = schema;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& name = table.columns[i].name;
      if (const auto* v = std::get_if<std::int64_t>(&row[i])) {
        r[name] = *v;
      } else if (const auto* d = std::get_if<double>(&row[i])) {
        r[name] = std::isnan(*d) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(*d);
      } else {
        r[name] = std::get<std::string>(row[i]);
      }
    }
    rows.push_back(r);
  }
  out["rows"] = rows;
  return out;
}

ReportPaths write_report(const ExperimentSpec& spec, const ExperimentResult& result, double wall_seconds) {
  namespace fs = std::filesystem;
  const fs::path dir(spec.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("output_dir: cannot create '" + dir.string() + "': " + ec.message());

  const std::string stem(kind_name(spec.kind));
  ReportPaths paths;
  paths.table = dir / (stem + (spec.format == OutputFormat::kCsv ? ".csv" : ".json"));
  paths.manifest = dir / (stem + ".manifest.json");

  std::ofstream table_file(paths.table, std::ios::binary);
  if (!table_file) throw ConfigError("output_dir: cannot write '" + paths.table.string() + "'");
  if (spec.format == OutputFormat::kCsv) {
    write_csv(result.table, table_file);
  } else {
    table_file << table_to_json(result.table).dump(2) << '\n';
  }
  if (!table_file) throw ConfigError("output_dir: failed writing '" + paths.table.string() + "'");

  nlohmann::ordered_json manifest;
  manifest["tool"] = "da2gc";
  manifest["version"] = kToolVersion;
  manifest["experiment"] = stem;
  manifest["seed"] = spec.seed;
  manifest["trials"] = spec.trials;
  manifest["table"] = paths.table.filename().string();
  manifest["rows"] = result.table.rows.size();
  manifest["infeasible"] = result.infeasible;
  manifest["notes"] = result.notes;
  manifest["config"] = to_json(spec);
  manifest["started_utc"] = utc_now();
  manifest["wall_time_s"] = wall_seconds;

  std::ofstream manifest_file(paths.manifest, std::ios::binary);
  if (!manifest_file) throw ConfigError("output_dir: cannot write '" + paths.manifest.string() + "'");
  manifest_file << manifest.dump(2) << '\n';
  if (!manifest_file) throw ConfigError("output_dir: failed writing '" + paths.manifest.string() + "'");
  return paths;
}

}  // namespace da2gc
