#include "pedflow/ltm_link.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pedflow/diagnostics.hpp"
#include "pedflow/network.hpp"

namespace pedflow {
namespace {

constexpr double kSlack = 1e-9;

double interpolate(const std::vector<double>& series, double dt, double t) {
  if (t <= 0.0) return t < 0.0 ? 0.0 : series.front();
  const double pos = t / dt;
  const auto last = static_cast<double>(series.size() - 1);
  if (pos > last + 1e-9) throw std::out_of_range("cumulative curve queried in the future");
  if (pos >= last) return series.back();
  const auto i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  return series[i] + frac * (series[i + 1] - series[i]);
}

// Interpolated time at which a non-decreasing series first reaches `rank`; -1 if never.
double first_time_reaching(const std::vector<double>& series, double dt, double rank) {
  if (rank <= series.front()) return 0.0;
  const auto it = std::lower_bound(series.begin(), series.end(), rank);
  if (it == series.end()) return -1.0;
  const auto m = static_cast<std::size_t>(it - series.begin());
  const double lo = series[m - 1], hi = series[m];
  const double frac = hi > lo ? (rank - lo) / (hi - lo) : 1.0;
  return (static_cast<double>(m - 1) + frac) * dt;
}

}  // namespace

double total(const CommodityFlows& flows) {
  double sum = 0.0;
  for (const auto& [slot, amount] : flows) sum += amount;
  return sum;
}

CumulativeCurve::CumulativeCurve(double dt, std::size_t reserve_steps) : dt_(dt) {
  up_.reserve(reserve_steps + 1);
  down_.reserve(reserve_steps + 1);
  up_.push_back(0.0);
  down_.push_back(0.0);
}

double CumulativeCurve::upstream_at(double t) const { return interpolate(up_, dt_, t); }
double CumulativeCurve::downstream_at(double t) const { return interpolate(down_, dt_, t); }

double CumulativeCurve::commodity_upstream(std::size_t slot, std::size_t n) const {
  if (slot >= com_up_.size() || com_up_[slot].empty()) return 0.0;
  return com_up_[slot][n];
}

double CumulativeCurve::commodity_downstream(std::size_t slot, std::size_t n) const {
  if (slot >= com_down_.size() || com_down_[slot].empty()) return 0.0;
  return com_down_[slot][n];
}

double CumulativeCurve::commodity_occupancy(std::size_t slot) const {
  return commodity_upstream(slot, step()) - commodity_downstream(slot, step());
}

double CumulativeCurve::time_of_upstream_rank(double rank) const {
  const double t = first_time_reaching(up_, dt_, rank);
  return t < 0.0 ? time() : t;
}

double CumulativeCurve::time_of_downstream_rank(double rank) const {
  return first_time_reaching(down_, dt_, rank);
}

double CumulativeCurve::commodity_upstream_at_rank(std::size_t slot, double rank) const {
  if (slot >= com_up_.size() || com_up_[slot].empty()) return 0.0;
  const auto& series = com_up_[slot];
  if (rank <= 0.0) return 0.0;
  if (rank >= up_.back()) return series.back();
  const auto it = std::lower_bound(up_.begin(), up_.end(), rank);
  const auto m = static_cast<std::size_t>(it - up_.begin());
  if (m == 0) return series.front();
  const double lo = up_[m - 1], hi = up_[m];
  const double frac = (rank - lo) / (hi - lo);
  return series[m - 1] + frac * (series[m] - series[m - 1]);
}

std::vector<double>& CumulativeCurve::series(std::vector<std::vector<double>>& table,
                                             std::size_t slot) {
  if (slot >= com_up_.size()) {
    com_up_.resize(slot + 1);
    com_down_.resize(slot + 1);
  }
  if (com_up_[slot].empty()) {
    com_up_[slot].assign(up_.size(), 0.0);
    com_down_[slot].assign(up_.size(), 0.0);
    active_.insert(std::upper_bound(active_.begin(), active_.end(), slot), slot);
  }
  return table[slot];
}

void CumulativeCurve::push(const CommodityFlows& inflow, const CommodityFlows& outflow) {
  for (const auto& [slot, amount] : inflow) {
    if (amount != 0.0) series(com_up_, slot);
  }
  for (const auto& [slot, amount] : outflow) {
    if (amount != 0.0) series(com_down_, slot);
  }
  up_.push_back(up_.back() + total(inflow));
  down_.push_back(down_.back() + total(outflow));
  for (std::size_t slot : active_) {
    com_up_[slot].push_back(com_up_[slot].back());
    com_down_[slot].push_back(com_down_[slot].back());
  }
  for (const auto& [slot, amount] : inflow) {
    if (amount != 0.0) com_up_[slot].back() += amount;
  }
  for (const auto& [slot, amount] : outflow) {
    if (amount != 0.0) com_down_[slot].back() += amount;
  }
}

double sending_flow(const Link& link, const CumulativeCurve& curve, double effective_speed) {
  const double t = curve.time();
  const double lookback = t + curve.dt() - link.length / effective_speed;
  if (lookback > t + 1e-9) {
    throw std::invalid_argument("sending-flow lookback lies in the future; time step too large");
  }
  const double boundary = curve.upstream_at(std::min(lookback, t)) - curve.downstream().back();
  return std::clamp(boundary, 0.0, link.capacity * curve.dt());
}

double receiving_flow(const Link& link, const CumulativeCurve& curve, double storage_density) {
  const double t = curve.time();
  const double lookback = t + curve.dt() - link.length / link.wave_speed;
  if (lookback > t + 1e-9) {
    throw std::invalid_argument("receiving-flow lookback lies in the future; time step too large");
  }
  const double boundary = curve.downstream_at(std::min(lookback, t)) +
                          storage_density * link.length * link.width - curve.upstream().back();
  return std::clamp(boundary, 0.0, link.capacity * curve.dt());
}

CommodityFlows sending_composition(const CumulativeCurve& curve, double sending) {
  CommodityFlows out;
  if (sending <= 0.0) return out;
  const auto& active = curve.active_commodities();
  if (active.size() == 1) {
    out.emplace_back(active.front(), sending);
    return out;
  }
  const double front = curve.downstream().back() + sending;
  double sum = 0.0;
  for (std::size_t slot : active) {
    const double ahead = curve.commodity_upstream_at_rank(slot, front) -
                         curve.commodity_downstream(slot, curve.step());
    // Never hand out more of a commodity than is on the link.
    const double avail = std::min(std::max(ahead, 0.0), std::max(curve.commodity_occupancy(slot), 0.0));
    if (avail > 0.0) {
      out.emplace_back(slot, avail);
      sum += avail;
    }
  }
  if (sum <= 0.0) {
    // Rank matching has nothing ahead; fall back to the mix on the link.
    for (std::size_t slot : active) {
      const double occ = curve.commodity_occupancy(slot);
      if (occ > 0.0) {
        out.emplace_back(slot, occ);
        sum += occ;
      }
    }
    if (sum <= 0.0) return {};
  }
  for (auto& [slot, amount] : out) amount *= sending / sum;
  return out;
}

void advance(CumulativeCurve& curve, const CommodityFlows& inflow, const CommodityFlows& outflow,
             const FlowBounds& bounds) {
  const double in = total(inflow);
  const double out = total(outflow);
  auto tolerance = [](double bound) { return kSlack * std::max(1.0, bound); };
  if (in < -kSlack || out < -kSlack) {
    throw RuntimeError("conservation breach: negative flow");
  }
  if (in > bounds.receiving + tolerance(bounds.receiving)) {
    throw RuntimeError("conservation breach: inflow " + std::to_string(in) +
                       " exceeds receiving flow " + std::to_string(bounds.receiving));
  }
  if (out > bounds.sending + tolerance(bounds.sending)) {
    throw RuntimeError("conservation breach: outflow " + std::to_string(out) +
                       " exceeds sending flow " + std::to_string(bounds.sending));
  }
  for (const auto& [slot, amount] : outflow) {
    const double occ = curve.commodity_occupancy(slot);
    if (amount > occ + tolerance(occ)) {
      throw RuntimeError("conservation breach: commodity " + std::to_string(slot) +
                         " outflow " + std::to_string(amount) + " exceeds its occupancy " +
                         std::to_string(occ));
    }
  }
  curve.push(inflow, outflow);
}

}  // namespace pedflow
