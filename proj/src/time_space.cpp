#include "pedflow/time_space.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pedflow/diagnostics.hpp"

namespace pedflow {

TimeSpaceMatrix build_time_space(const Network& net, const std::vector<CumulativeCurve>& curves,
                                 const std::vector<std::size_t>& links, std::size_t bins) {
  TimeSpaceMatrix m;
  m.links = links;
  m.bins = bins;
  m.dt = curves.empty() ? 1.0 : curves.front().dt();
  double x = 0.0;
  for (std::size_t s = 0; s < links.size(); ++s) {
    if (links[s] >= net.link_count()) throw ValidationError("time-space link out of range");
    if (s > 0 && net.from_index(links[s]) != net.to_index(links[s - 1])) {
      throw ValidationError("time-space links do not form a chain");
    }
    m.start.push_back(x);
    m.length.push_back(net.link(links[s]).length);
    x += net.link(links[s]).length;
  }
  m.density.assign(links.size() * bins, 0.0);
  m.flow.assign(links.size() * bins, 0.0);
  for (std::size_t s = 0; s < links.size(); ++s) {
    const Link& l = net.link(links[s]);
    const CumulativeCurve& c = curves[links[s]];
    const auto& U = c.upstream();
    const auto& V = c.downstream();
    const std::size_t last = c.step();
    for (std::size_t n = 0; n < bins && n < last + 1; ++n) {
      m.k(s, n) = (U[n] - V[n]) / (l.length * l.width);
      if (n < last) {
        m.q(s, n) = 0.5 * ((U[n + 1] - U[n]) + (V[n + 1] - V[n])) / (m.dt * l.width);
      }
    }
  }
  return m;
}

void write_matrix_csv(std::ostream& out, const TimeSpaceMatrix& m, bool flows) {
  out << "t";
  for (std::size_t s = 0; s < m.segments(); ++s) out << ",x" << m.centre(s);
  out << '\n';
  for (std::size_t n = 0; n < m.bins; ++n) {
    out << static_cast<double>(n) * m.dt;
    for (std::size_t s = 0; s < m.segments(); ++s) out << ',' << (flows ? m.q(s, n) : m.k(s, n));
    out << '\n';
  }
}

const char* to_string(WaveDirection d) {
  switch (d) {
    case WaveDirection::backward: return "backward";
    case WaveDirection::forward: return "forward";
    default: return "stationary";
  }
}

double Shockwave::rankine_hugoniot() const {
  const double dk = k_up - k_down;
  if (std::abs(dk) < 1e-12) return 0.0;
  return (q_up - q_down) / dk;
}

namespace {

struct Jump {
  double x;
  int sign;
  std::size_t up;    // segment upstream of the interface
  std::size_t down;  // segment downstream of the interface
};

struct Sample {
  double t, x;
  double k_up, q_up, k_down, q_down;
};

struct Track {
  int sign = 0;
  std::vector<Sample> points;
};

struct Fit {
  double slope = 0.0, intercept = 0.0, max_residual = 0.0, sse = 0.0;
};

Fit fit_line(const Sample* p, std::size_t n) {
  double st = 0, sx = 0, stt = 0, stx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    st += p[i].t;
    sx += p[i].x;
    stt += p[i].t * p[i].t;
    stx += p[i].t * p[i].x;
  }
  const double dn = static_cast<double>(n);
  const double den = dn * stt - st * st;
  Fit f;
  f.slope = den > 0.0 ? (dn * stx - st * sx) / den : 0.0;
  f.intercept = (sx - f.slope * st) / dn;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = p[i].x - (f.intercept + f.slope * p[i].t);
    f.sse += r * r;
    f.max_residual = std::max(f.max_residual, std::abs(r));
  }
  return f;
}

// Splits a trajectory into straight pieces: while a piece deviates from its own line by more
// than `tolerance`, cut it where two lines fit best.
void split_pieces(const Sample* p, std::size_t n, double tolerance, std::size_t min_points,
                  std::vector<std::pair<const Sample*, std::size_t>>& out) {
  const Fit whole = fit_line(p, n);
  if (whole.max_residual <= tolerance || n < 2 * min_points) {
    out.emplace_back(p, n);
    return;
  }
  std::size_t best = 0;
  double best_sse = whole.sse;
  for (std::size_t cut = min_points; cut + min_points <= n; ++cut) {
    const double sse = fit_line(p, cut).sse + fit_line(p + cut, n - cut).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best = cut;
    }
  }
  if (best == 0) {
    out.emplace_back(p, n);
    return;
  }
  split_pieces(p, best, tolerance, min_points, out);
  split_pieces(p + best, n - best, tolerance, min_points, out);
}

}  // namespace

std::vector<Shockwave> detect_shockwaves(const TimeSpaceMatrix& m, const ShockwaveOptions& o) {
  std::vector<Shockwave> found;
  if (m.segments() < 2) return found;
  const double cell = *std::max_element(m.length.begin(), m.length.end());
  std::vector<Track> open, closed;

  std::vector<Jump> jumps;
  for (std::size_t n = 0; n < m.bins; ++n) {
    // Raw jumps at segment boundaries, merged while consecutive boundaries share a sign.
    jumps.clear();
    std::size_t s = 0;
    while (s + 1 < m.segments()) {
      const double d = m.k(s + 1, n) - m.k(s, n);
      if (std::abs(d) < o.threshold) {
        ++s;
        continue;
      }
      const int sign = d > 0 ? 1 : -1;
      double wsum = 0.0, xsum = 0.0;
      std::size_t e = s;
      while (e + 1 < m.segments()) {
        const double de = m.k(e + 1, n) - m.k(e, n);
        if (std::abs(de) < o.threshold || (de > 0 ? 1 : -1) != sign) break;
        wsum += std::abs(de);
        xsum += std::abs(de) * m.start[e + 1];
        ++e;
      }
      jumps.push_back({xsum / wsum, sign, s, e});
      s = e;
    }

    std::vector<bool> used(open.size(), false);
    std::vector<Track> next;
    for (const Jump& j : jumps) {
      std::size_t best = open.size();
      double best_d = o.max_step_cells * cell;
      for (std::size_t i = 0; i < open.size(); ++i) {
        if (used[i] || open[i].sign != j.sign) continue;
        const double d = std::abs(open[i].points.back().x - j.x);
        if (d <= best_d) {
          best = i;
          best_d = d;
        }
      }
      Track t;
      if (best < open.size()) {
        used[best] = true;
        t = std::move(open[best]);
      } else {
        t.sign = j.sign;
      }
      t.points.push_back({static_cast<double>(n) * m.dt, j.x, m.k(j.up, n), m.q(j.up, n),
                          m.k(j.down, n), m.q(j.down, n)});
      next.push_back(std::move(t));
    }
    for (std::size_t i = 0; i < open.size(); ++i) {
      if (!used[i]) closed.push_back(std::move(open[i]));
    }
    open = std::move(next);
  }
  for (auto& t : open) closed.push_back(std::move(t));

  std::vector<std::pair<const Sample*, std::size_t>> pieces;
  for (const Track& t : closed) {
    if (t.points.size() < o.min_points) continue;
    pieces.clear();
    split_pieces(t.points.data(), t.points.size(), o.straightness * cell, o.min_points, pieces);
    for (const auto& [p, n] : pieces) {
      const Fit f = fit_line(p, n);
      Shockwave w;
      w.speed = f.slope;
      w.sign = t.sign;
      w.direction = w.speed < -o.stationary_speed  ? WaveDirection::backward
                    : w.speed > o.stationary_speed ? WaveDirection::forward
                                                   : WaveDirection::stationary;
      for (std::size_t i = 0; i < n; ++i) {
        w.trajectory.emplace_back(p[i].t, p[i].x);
        w.k_up += p[i].k_up;
        w.q_up += p[i].q_up;
        w.k_down += p[i].k_down;
        w.q_down += p[i].q_down;
      }
      const double dn = static_cast<double>(n);
      w.k_up /= dn;
      w.q_up /= dn;
      w.k_down /= dn;
      w.q_down /= dn;
      found.push_back(std::move(w));
    }
  }
  std::sort(found.begin(), found.end(), [](const Shockwave& a, const Shockwave& b) {
    return a.trajectory.front() < b.trajectory.front();
  });
  return found;
}

}  // namespace pedflow
