#pragma once

#include <iosfwd>
#include <string>

#include "pedflow/network.hpp"

namespace pedflow {

// Line-oriented text formats, comma separated, '#' starts a comment.
//
//   pedflow-net v1
//   node,<id>,<x>,<y>,<plain|origin|destination>
//   link,<id>,<from>,<to>,<length_m>,<width_m>,<vf_mps>,<kjam_pm2>,<omega_mps>,<cap_pps|->,<opposite_id|->
//
//   pedflow-dem v1
//   od,<origin>,<destination>,<depart_s>,<rate_pps>
//
// A capacity of "-" means the apex flow of the unidirectional diagram times the width.
inline constexpr const char* kNetworkHeader = "pedflow-net v1";
inline constexpr const char* kDemandHeader = "pedflow-dem v1";

// Parsing throws ValidationError with a line number on malformed input. The returned
// network is finalized but not validated; run validate_network() for invariant checks.
Network read_network(std::istream& in);
Network read_network_file(const std::string& path);
DemandProfile read_demand(std::istream& in);
DemandProfile read_demand_file(const std::string& path);

void write_network(std::ostream& out, const Network& network);
void write_network_file(const std::string& path, const Network& network);
void write_demand(std::ostream& out, const DemandProfile& demand);
void write_demand_file(const std::string& path, const DemandProfile& demand);

const char* to_string(NodeKind kind);

}  // namespace pedflow
