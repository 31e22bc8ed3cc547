#include "pedflow/turning_fractions.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace pedflow {
namespace {

const std::pair<std::size_t, double> kSinkRow[1] = {{kSink, 1.0}};

}  // namespace

TurningFractions::TurningFractions(const Network& network, const TimeGrid& grid,
                                   std::size_t destinations)
    : links_(network.link_count()),
      incoming_count_(network.link_count() + network.node_count()),
      destinations_(destinations),
      grid_(grid),
      bins_(std::max<std::size_t>(1, grid.departure_bins())) {}

std::uint64_t TurningFractions::key(std::size_t slot, std::size_t incoming, std::size_t bin) const {
  return (static_cast<std::uint64_t>(slot) * incoming_count_ + incoming) * bins_ + bin;
}

void TurningFractions::add(std::size_t slot, std::size_t incoming, std::size_t bin,
                           std::size_t out, double weight) {
  if (weight <= 0.0) return;
  rows_[key(slot, incoming, bin)].emplace_back(out, weight);
}

void TurningFractions::normalize() {
  for (auto it = rows_.begin(); it != rows_.end();) {
    TurnRow& row = it->second;
    std::sort(row.begin(), row.end());
    TurnRow merged;
    double sum = 0.0;
    for (const auto& [out, w] : row) {
      if (!merged.empty() && merged.back().first == out) {
        merged.back().second += w;
      } else {
        merged.emplace_back(out, w);
      }
      sum += w;
    }
    if (sum <= 0.0) {
      it = rows_.erase(it);
      continue;
    }
    for (auto& [out, w] : merged) w /= sum;
    row = std::move(merged);
    ++it;
  }
}

void TurningFractions::set_fallback(SuccessorTable successors) {
  fallback_ = std::move(successors);
  fallback_rows_.assign(fallback_.next.size(), {});
  for (std::size_t s = 0; s < fallback_.next.size(); ++s) {
    auto& rows = fallback_rows_[s];
    rows.resize(fallback_.next[s].size());
    for (std::size_t k = 0; k < rows.size(); ++k) rows[k] = {fallback_.next[s][k], 1.0};
  }
}

std::span<const std::pair<std::size_t, double>> TurningFractions::row(
    std::size_t slot, std::size_t incoming, std::size_t node, std::size_t destination,
    double t) const {
  if (node == destination) return {kSinkRow, 1};
  const std::size_t b = bin(t);
  if (!rows_.empty()) {
    const auto it = rows_.find(key(slot, incoming, b));
    if (it != rows_.end()) return it->second;
  }
  if (slot >= fallback_rows_.size()) return {};
  const std::size_t fb = std::min(b, fallback_.bins - 1) * fallback_.nodes + node;
  const auto& entry = fallback_rows_[slot][fb];
  if (entry.first == kNone) return {};
  return {&entry, 1};
}

std::size_t TurningFractions::sets() const {
  std::unordered_set<std::size_t> slots;
  for (const auto& [k, row] : rows_) {
    slots.insert(static_cast<std::size_t>(k / (static_cast<std::uint64_t>(incoming_count_) * bins_)));
  }
  return slots.size();
}

TurningFractions paths_to_turning_fractions(const Network& network, const TimeGrid& grid,
                                            const DemandTable& demand,
                                            const std::vector<OdPathFlows>& flows,
                                            const LinkTimeFn& link_time) {
  TurningFractions tf(network, grid, demand.destinations().size());
  const double horizon = grid.horizon;
  const auto substeps = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(grid.departure_interval / grid.dt)));
  for (std::size_t od = 0; od < flows.size(); ++od) {
    const std::size_t slot = demand.od_destination_slot(od);
    const std::size_t origin = demand.ods()[od].origin;
    for (std::size_t p = 0; p < flows[od].paths.size(); ++p) {
      const Path& path = flows[od].paths[p];
      const auto& series = flows[od].flow[p];
      for (std::size_t k = 0; k < series.size(); ++k) {
        if (series[k] <= 0.0) continue;
        const double weight = series[k] * grid.dt;
        for (std::size_t sub = 0; sub < substeps; ++sub) {
          // Released during step [t0, t0 + dt); the midpoint lands turns in the right step.
          const double t0 = grid.departure_time(k) + static_cast<double>(sub) * grid.dt;
          double t = t0 + 0.5 * grid.dt;
          std::size_t incoming = tf.origin_index(origin);
          for (std::size_t a : path.links) {
            if (t >= horizon) break;
            tf.add(slot, incoming, tf.bin(t), a, weight);
            const double c = link_time(a, t);
            if (!std::isfinite(c)) break;
            t += c;
            incoming = a;
          }
        }
      }
    }
  }
  tf.normalize();
  return tf;
}

}  // namespace pedflow
