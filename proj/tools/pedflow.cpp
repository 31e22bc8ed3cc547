#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pedflow/config.hpp"
#include "pedflow/diagnostics.hpp"
#include "pedflow/engine.hpp"
#include "pedflow/network_io.hpp"
#include "pedflow/scenarios.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;

std::vector<int> parse_ids(const std::string& text) {
  std::vector<int> ids;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      ids.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw pedflow::ValidationError("bad node id '" + item + "' in path");
    }
  }
  if (ids.size() < 2) throw pedflow::ValidationError("a path needs at least two node ids");
  return ids;
}

void print_summary(const pedflow::RunResult& r, const std::string& out) {
  const auto& gaps = r.due.report.gaps;
  std::cout << "iterations " << gaps.size() << ", final gap " << (gaps.empty() ? 0.0 : gaps.back())
            << " (" << pedflow::to_string(r.due.report.reason) << ")\n";
  std::cout << "conservation: " << r.conservation.checks << " checks, "
            << r.conservation.violations.size() << " violations\n";
  for (const auto& v : r.conservation.violations) std::cout << "  " << v << '\n';
  if (!out.empty()) std::cout << "outputs written to " << out << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pedflow: dynamic pedestrian traffic assignment on bidirectional sidewalk networks"};
  app.require_subcommand(1);

  std::string net_file, dem_file;
  auto* validate = app.add_subcommand("validate", "Check a network and demand file");
  validate->add_option("net", net_file, "Network file")->required();
  validate->add_option("dem", dem_file, "Demand file")->required();
  double validate_dt = 1.0;
  validate->add_option("--dt", validate_dt, "Time step used for the CFL check")->capture_default_str();

  std::string kind, out_dir, config_file;
  int preset = 0;
  auto* scenario = app.add_subcommand("scenario", "Run a built-in scenario");
  scenario->add_option("kind", kind, "grid or corridor")->required()->check(CLI::IsMember({"grid", "corridor"}));
  scenario->add_option("--preset", preset, "1-3 for grid, 4-6 for corridor")->required();
  scenario->add_option("--out", out_dir, "Output directory")->required();
  scenario->add_option("--config", config_file, "Config overrides");

  auto* run = app.add_subcommand("run", "Run assignment and loading on files");
  run->add_option("--net", net_file, "Network file")->required();
  run->add_option("--dem", dem_file, "Demand file")->required();
  run->add_option("--config", config_file, "Config file")->required();
  run->add_option("--out", out_dir, "Output directory (defaults to output.dir)");

  std::string run_dir, path_text;
  auto* export_ts = app.add_subcommand("export-ts", "Write time-space matrices for a path of a finished run");
  export_ts->add_option("--run", run_dir, "Run directory")->required();
  export_ts->add_option("--path", path_text, "Comma-separated node ids, e.g. 1,2,3,6,9")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }

  try {
    if (*validate) {
      const pedflow::Network net = pedflow::read_network_file(net_file);
      const pedflow::DemandProfile dem = pedflow::read_demand_file(dem_file);
      pedflow::TimeGrid grid{validate_dt, 0.0, validate_dt};
      double last = 0.0;
      for (const auto& e : dem.entries) last = std::max(last, e.depart);
      grid.horizon = (std::floor(last / validate_dt) + 1.0) * validate_dt;
      auto problems = pedflow::validate_network(net);
      for (auto& v : pedflow::validate_demand(net, grid, dem)) problems.push_back(v);
      for (auto& v : pedflow::check_cfl(net, grid)) problems.push_back(v);
      for (const auto& v : problems) std::cout << v.what << '\n';
      std::cout << problems.size() << " violation(s)\n";
      return problems.empty() ? kOk : kValidation;
    }
    if (*scenario) {
      pedflow::ScenarioConfig base;
      if (!config_file.empty()) base = pedflow::read_config_file(config_file, base);
      const pedflow::Scenario sc =
          kind == "grid" ? pedflow::grid_scenario(preset, base) : pedflow::corridor_scenario(preset, base);
      const auto result = pedflow::run_scenario(sc.config, sc.network, sc.demand, out_dir);
      print_summary(result, out_dir);
      return result.conservation.ok() ? kOk : kRuntime;
    }
    if (*run) {
      const pedflow::ScenarioConfig cfg = pedflow::read_config_file(config_file);
      const std::string out = out_dir.empty() ? cfg.output_dir : out_dir;
      if (out.empty()) throw pedflow::ValidationError("no output directory: pass --out or set output.dir");
      const pedflow::Network net = pedflow::read_network_file(net_file);
      const pedflow::DemandProfile dem = pedflow::read_demand_file(dem_file);
      const auto result = pedflow::run_scenario(cfg, net, dem, out);
      print_summary(result, out);
      return result.conservation.ok() ? kOk : kRuntime;
    }
    if (*export_ts) {
      const auto m = pedflow::export_time_space(run_dir, parse_ids(path_text));
      std::cout << m.segments() << " segments x " << m.bins << " bins written to " << run_dir << '\n';
      return kOk;
    }
  } catch (const pedflow::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
