#pragma once

#include <cstddef>
#include <vector>

namespace pedflow {

struct Link;
class CumulativeCurve;

// One node at one time step. Incoming links are rows, outgoing links are columns.
// A destination sink is a column with infinite receiving flow; an origin queue is a row.
struct NodeFlowProblem {
  std::size_t incoming = 0;
  std::size_t outgoing = 0;
  std::vector<double> demand;      // S_ij, row-major incoming x outgoing
  std::vector<double> receiving;   // R_j, may be +infinity
  std::vector<double> look_ahead;  // counterflow reservation on j, empty means none

  NodeFlowProblem() = default;
  NodeFlowProblem(std::size_t in, std::size_t out)
      : incoming(in), outgoing(out), demand(in * out, 0.0), receiving(out, 0.0),
        look_ahead(out, 0.0) {}

  double& S(std::size_t i, std::size_t j) { return demand[i * outgoing + j]; }
  double S(std::size_t i, std::size_t j) const { return demand[i * outgoing + j]; }
  double sending(std::size_t i) const;
  // max(0, R_j - look_ahead_j).
  double supply(std::size_t j) const;
};

struct NodeFlowSolution {
  std::vector<double> flow;       // q_ij = reduction_i * S_ij
  std::vector<double> reduction;  // theta_i in [0, 1]
  // Outgoing links whose look-ahead reservation exceeded the receiving flow (supply clamped at 0).
  std::vector<std::size_t> clamped;

  double q(std::size_t i, std::size_t j, std::size_t outgoing) const {
    return flow[i * outgoing + j];
  }
};

// Maximizes total transfer subject to demand, look-ahead supply and proportional
// (first-in-first-out) scaling of every incoming link.
//
// Incoming links first receive equal-priority shares of each outgoing supply, with
// unused shares redistributed; the most restricted links are fixed pass by pass. When
// that split leaves throughput unused, it is moved to the maximum-throughput face,
// staying as close to the equal-priority reductions as possible.
NodeFlowSolution solve_node(const NodeFlowProblem& problem);

// Equal-priority split alone (first stage of solve_node).
std::vector<double> equal_priority_reductions(const NodeFlowProblem& problem);

// Counterflow reserved on outgoing link `out`: inflow of its opposite link over
// (t - L/v_f, t + dt - L/v_f] with L and v_f of `out`. `opposite` may be null.
double look_ahead_term(const Link& out, const CumulativeCurve* opposite, double t, double dt);

}  // namespace pedflow
