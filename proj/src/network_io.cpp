#include "pedflow/network_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "pedflow/diagnostics.hpp"

namespace pedflow {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(trim(f));
  return fields;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ValidationError("line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) fail(line, "bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(line, "bad number '" + s + "'");
  }
}

int to_int(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) fail(line, "bad integer '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(line, "bad integer '" + s + "'");
  }
}

NodeKind to_kind(const std::string& s, std::size_t line) {
  if (s == "plain") return NodeKind::plain;
  if (s == "origin") return NodeKind::origin;
  if (s == "destination") return NodeKind::destination;
  fail(line, "unknown node kind '" + s + "'");
}

// Calls `record` with the fields of every non-blank, non-comment line after the header.
template <typename Fn>
void scan(std::istream& in, const char* header, Fn record) {
  std::string raw;
  std::size_t line = 0;
  bool seen_header = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string text = raw.substr(0, raw.find('#'));
    text = trim(text);
    if (text.empty()) continue;
    if (!seen_header) {
      if (text != header) fail(line, std::string("expected header '") + header + "'");
      seen_header = true;
      continue;
    }
    record(split(text), line);
  }
  if (!seen_header) throw ValidationError(std::string("missing header '") + header + "'");
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot write " + path);
  return out;
}

}  // namespace

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::origin: return "origin";
    case NodeKind::destination: return "destination";
    case NodeKind::plain: break;
  }
  return "plain";
}

Network read_network(std::istream& in) {
  Network net;
  scan(in, kNetworkHeader, [&net](const std::vector<std::string>& f, std::size_t line) {
    if (f[0] == "node") {
      if (f.size() != 5) fail(line, "node record needs 5 fields");
      net.add_node({to_int(f[1], line), to_double(f[2], line), to_double(f[3], line),
                    to_kind(f[4], line)});
    } else if (f[0] == "link") {
      if (f.size() != 11) fail(line, "link record needs 11 fields");
      Link l;
      l.id = to_int(f[1], line);
      l.from = to_int(f[2], line);
      l.to = to_int(f[3], line);
      l.length = to_double(f[4], line);
      l.width = to_double(f[5], line);
      l.free_flow_speed = to_double(f[6], line);
      l.jam_density = to_double(f[7], line);
      l.wave_speed = to_double(f[8], line);
      l.capacity = f[9] == "-" ? default_capacity(l.free_flow_speed, l.wave_speed,
                                                  l.jam_density, l.width)
                               : to_double(f[9], line);
      if (f[10] != "-") l.opposite = to_int(f[10], line);
      net.add_link(l);
    } else {
      fail(line, "unknown record type '" + f[0] + "'");
    }
  });
  net.finalize();
  return net;
}

Network read_network_file(const std::string& path) {
  auto in = open_in(path);
  return read_network(in);
}

DemandProfile read_demand(std::istream& in) {
  DemandProfile d;
  scan(in, kDemandHeader, [&d](const std::vector<std::string>& f, std::size_t line) {
    if (f[0] != "od") fail(line, "unknown record type '" + f[0] + "'");
    if (f.size() != 5) fail(line, "od record needs 5 fields");
    d.entries.push_back(
        {to_int(f[1], line), to_int(f[2], line), to_double(f[3], line), to_double(f[4], line)});
  });
  return d;
}

DemandProfile read_demand_file(const std::string& path) {
  auto in = open_in(path);
  return read_demand(in);
}

void write_network(std::ostream& out, const Network& network) {
  out << kNetworkHeader << '\n' << std::setprecision(17);
  for (const Node& n : network.nodes()) {
    out << "node," << n.id << ',' << n.x << ',' << n.y << ',' << to_string(n.kind) << '\n';
  }
  for (const Link& l : network.links()) {
    out << "link," << l.id << ',' << l.from << ',' << l.to << ',' << l.length << ',' << l.width
        << ',' << l.free_flow_speed << ',' << l.jam_density << ',' << l.wave_speed << ','
        << l.capacity << ',';
    if (l.opposite) {
      out << *l.opposite;
    } else {
      out << '-';
    }
    out << '\n';
  }
}

void write_network_file(const std::string& path, const Network& network) {
  auto out = open_out(path);
  write_network(out, network);
}

void write_demand(std::ostream& out, const DemandProfile& demand) {
  out << kDemandHeader << '\n' << std::setprecision(17);
  for (const DemandEntry& e : demand.entries) {
    out << "od," << e.origin << ',' << e.destination << ',' << e.depart << ',' << e.rate << '\n';
  }
}

void write_demand_file(const std::string& path, const DemandProfile& demand) {
  auto out = open_out(path);
  write_demand(out, demand);
}

}  // namespace pedflow
