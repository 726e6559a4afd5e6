#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "da2gc/config.hpp"
#include "da2gc/errors.hpp"
#include "da2gc/experiments.hpp"
#include "da2gc/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumerical = 4;

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<unsigned> threads;
  std::string out_dir;
  std::string format;
  bool show_config = false;
};

int run(da2gc::ExperimentKind kind, const Flags& flags) {
  using namespace da2gc;
  std::string text;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read config '" << flags.config_path << "'\n";
      return kExitConfig;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  ExperimentSpec spec = load_config(text, kind);
  if (flags.seed) spec.seed = *flags.seed;
  if (flags.trials) spec.trials = *flags.trials;
  if (flags.threads) spec.threads = *flags.threads;
  if (!flags.out_dir.empty()) spec.output_dir = flags.out_dir;
  if (!flags.format.empty()) spec.format = flags.format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;

  if (flags.show_config) {
    std::cout << to_json(spec).dump(2) << '\n';
    return kExitOk;
  }

  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult result = run_experiment(spec);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const ReportPaths paths = write_report(spec, result, wall);
  for (const auto& note : result.notes) std::cerr << note << '\n';
  std::cout << paths.table.string() << '\n' << paths.manifest.string() << '\n';
  return result.infeasible ? kExitInfeasible : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  using da2gc::ExperimentKind;
  CLI::App app{"DA2GC network planning: beamforming, throughput and cost experiments"};
  app.require_subcommand(1);

  Flags flags;
  const std::pair<ExperimentKind, const char*> commands[] = {
      {ExperimentKind::kFacets, "optimal multifaceted GS array per inter-site distance"},
      {ExperimentKind::kDoppler, "maximum Doppler shift over overflight tracks"},
      {ExperimentKind::kAlignment, "beam-alignment loss: Monte Carlo vs closed form"},
      {ExperimentKind::kSimulate, "Monte Carlo zero-forcing cell simulation"},
      {ExperimentKind::kRateCurve, "simulated and closed-form rate over cell range"},
      {ExperimentKind::kGsTradeoff, "smallest arrays meeting a rate target per bandwidth"},
      {ExperimentKind::kTco, "minimum-TCO deployment (or evaluate a candidate)"},
      {ExperimentKind::kTcoSweep, "minimum-TCO deployment over a cost-parameter grid"},
  };
  std::optional<ExperimentKind> chosen;
  for (const auto& [kind, description] : commands) {
    auto* sub = app.add_subcommand(std::string(da2gc::kind_name(kind)), description);
    sub->add_option("--config", flags.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "random seed");
    sub->add_option("--trials", flags.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    sub->add_option("--threads", flags.threads, "worker threads (0 = all cores)");
    sub->add_option("--out", flags.out_dir, "output directory");
    sub->add_option("--format", flags.format, "table format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--show-config", flags.show_config, "print the resolved config and exit");
    sub->callback([&chosen, kind = kind] { chosen = kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    return run(*chosen, flags);
  } catch (const da2gc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const da2gc::InvalidArrayError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const da2gc::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << " (tightest constraint: " << e.tightest_constraint() << ")\n";
    return kExitInfeasible;
  } catch (const da2gc::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
