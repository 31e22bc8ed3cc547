#include "pedflow/config.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "pedflow/diagnostics.hpp"

namespace pedflow {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ValidationError("config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) fail(line, "not a number: '" + v + "'");
  return out;
}

std::uint64_t to_uint(const std::string& v, int line) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) fail(line, "not a nonnegative integer: '" + v + "'");
  return out;
}

bool to_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(line, "not a boolean: '" + v + "'");
}

}  // namespace

ScenarioConfig parse_config(std::istream& in, ScenarioConfig c) {
  std::string raw;
  int line = 0;
  bool penalties_reset = false;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));

    if (key == "time.dt") c.grid.dt = to_double(value, line);
    else if (key == "time.horizon") c.grid.horizon = to_double(value, line);
    else if (key == "time.departure_interval") c.grid.departure_interval = to_double(value, line);
    else if (key == "fd.variant") {
      if (value == "logistic") c.variant = SpeedVariant::logistic;
      else if (value == "power") c.variant = SpeedVariant::power;
      else fail(line, "fd.variant must be logistic or power");
    } else if (key == "fd.gamma") c.gamma = to_double(value, line);
    else if (key == "pvdf.mode") {
      if (value == "symmetric") c.pvdf.mode = PvdfMode::symmetric;
      else if (value == "asymmetric") c.pvdf.mode = PvdfMode::asymmetric;
      else fail(line, "pvdf.mode must be symmetric or asymmetric");
    } else if (key == "pvdf.alpha") c.pvdf.alpha = to_double(value, line);
    else if (key == "pvdf.beta") c.pvdf.beta = to_double(value, line);
    else if (key == "pvdf.mu") c.pvdf.mu = to_double(value, line);
    else if (key == "pvdf.eta_r") c.pvdf.eta_r = to_double(value, line);
    else if (key == "pvdf.lambda_r") c.pvdf.lambda_r = to_double(value, line);
    else if (key == "pvdf.eta_c") c.pvdf.eta_c = to_double(value, line);
    else if (key == "pvdf.lambda_c") c.pvdf.lambda_c = to_double(value, line);
    else if (key == "due.max_iters") c.max_iters = to_uint(value, line);
    else if (key == "due.gap_tol") c.gap_tol = to_double(value, line);
    else if (key == "ltm.effective_storage") c.effective_storage = to_bool(value, line);
    else if (key.rfind("penalty.", 0) == 0) {
      if (!penalties_reset) {
        c.penalties.clear();
        penalties_reset = true;
      }
      std::stringstream ss(value);
      std::string a, b, d;
      if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, d)) {
        fail(line, "penalty must be <link_id>,<start_s>,<added_cost_s>");
      }
      PenaltySpec p;
      p.link_id = static_cast<int>(to_double(trim(a), line));
      p.start = to_double(trim(b), line);
      p.cost = to_double(trim(d), line);
      c.penalties.push_back(p);
    } else if (key == "output.dir") c.output_dir = value;
    else if (key == "seed") c.seed = to_uint(value, line);
    else if (key == "debug.node_trace") c.node_trace = to_bool(value, line);
    else if (key == "corridor.bottleneck_width") c.bottleneck_width = to_double(value, line);
    else fail(line, "unknown key '" + key + "'");
  }
  return c;
}

ScenarioConfig read_config_file(const std::string& path, ScenarioConfig base) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  return parse_config(in, std::move(base));
}

void write_config(std::ostream& out, const ScenarioConfig& c) {
  out << std::setprecision(17);
  out << "time.dt = " << c.grid.dt << '\n'
      << "time.horizon = " << c.grid.horizon << '\n'
      << "time.departure_interval = " << c.grid.departure_interval << '\n'
      << "fd.variant = " << (c.variant == SpeedVariant::logistic ? "logistic" : "power") << '\n'
      << "fd.gamma = " << c.gamma << '\n'
      << "pvdf.mode = " << (c.pvdf.mode == PvdfMode::symmetric ? "symmetric" : "asymmetric") << '\n'
      << "pvdf.alpha = " << c.pvdf.alpha << '\n'
      << "pvdf.beta = " << c.pvdf.beta << '\n'
      << "pvdf.mu = " << c.pvdf.mu << '\n'
      << "pvdf.eta_r = " << c.pvdf.eta_r << '\n'
      << "pvdf.lambda_r = " << c.pvdf.lambda_r << '\n'
      << "pvdf.eta_c = " << c.pvdf.eta_c << '\n'
      << "pvdf.lambda_c = " << c.pvdf.lambda_c << '\n'
      << "due.max_iters = " << c.max_iters << '\n'
      << "due.gap_tol = " << c.gap_tol << '\n'
      << "ltm.effective_storage = " << (c.effective_storage ? "true" : "false") << '\n';
  for (std::size_t i = 0; i < c.penalties.size(); ++i) {
    const auto& p = c.penalties[i];
    out << "penalty." << i + 1 << " = " << p.link_id << ',' << p.start << ',' << p.cost << '\n';
  }
  if (!c.output_dir.empty()) out << "output.dir = " << c.output_dir << '\n';
  out << "seed = " << c.seed << '\n'
      << "debug.node_trace = " << (c.node_trace ? "true" : "false") << '\n'
      << "corridor.bottleneck_width = " << c.bottleneck_width << '\n';
}

void validate(const ScenarioConfig& c) {
  const auto grid = validate_time_grid(c.grid);
  if (!grid.empty()) throw ValidationError(grid.front().what);
  if (c.variant == SpeedVariant::power && !(c.gamma >= 0.0)) {
    throw ValidationError("fd.gamma must be nonnegative");
  }
  validate(c.pvdf);
  if (!(c.gap_tol > 0.0)) throw ValidationError("due.gap_tol must be positive");
  if (c.max_iters == 0) throw ValidationError("due.max_iters must be at least 1");
  if (!(c.bottleneck_width > 0.0)) throw ValidationError("corridor.bottleneck_width must be positive");
}

}  // namespace pedflow
