#pragma once

// Layout scoring: the weighted storage / pick-face / orientation objective,
// the accessibility penalty, the pick-face connectivity score and the
// alpha-theta sweep grid.

#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wlayout/grid.hpp"

namespace wlayout {

class ScoringParams {
 public:
  static constexpr double c1 = 0.01;
  static constexpr double c2 = 0.1;

  ScoringParams(double alpha, double theta) : alpha_(alpha), theta_(theta) {
    if (!(alpha_ > 0.0 && alpha_ <= 1.0)) {
      throw Error(ErrorCode::InvariantViolation, "alpha must lie in (0, 1]");
    }
    if (!(theta_ >= 0.0) || !std::isfinite(theta_)) {
      throw Error(ErrorCode::InvariantViolation, "theta must be >= 0");
    }
  }

  double alpha() const noexcept { return alpha_; }
  double theta() const noexcept { return theta_; }
  double beta() const noexcept { return std::min(0.1, 1.0 - alpha_); }

  friend bool operator==(const ScoringParams&, const ScoringParams&) = default;

 private:
  double alpha_;
  double theta_;
};

struct ScoreBreakdown {
  double t_s = 0.0;
  double t_pf = 0.0;
  double t_o = 0.0;
  double p_a = 0.0;
  int n_s = 0;
  int n_pf = 0;
  int open_area = 0;
  double score = 0.0;

  friend bool operator==(const ScoreBreakdown&, const ScoreBreakdown&) = default;
};

// Sum over block stores of omega * (deepest lane - 1)^2.
inline double accessibility_penalty(std::span<const BlockStore> stores) {
  double total = 0.0;
  for (const BlockStore& store : stores) {
    const double excess = static_cast<double>(store.max_depth() - 1);
    total += static_cast<double>(store.omega) * excess * excess;
  }
  return total;
}

inline ScoreBreakdown score(const Layout& layout, std::span<const BlockStore> stores,
                            const ScoringParams& params) {
  ScoreBreakdown b;
  b.n_s = layout.n_storage();
  b.n_pf = layout.n_pick_faces();
  b.open_area = layout.spec().total_open_area();
  b.p_a = accessibility_penalty(stores);
  b.t_s = (b.n_s - ScoringParams::c2 * params.theta() * b.p_a) / b.open_area;
  b.t_pf = b.n_s > 0 ? static_cast<double>(b.n_pf) / b.n_s : 0.0;

  const Orientation space = space_orientation(layout.spec());
  if (space != Orientation::Square && !stores.empty()) {
    std::size_t opposite = 0;
    for (const BlockStore& s : stores) opposite += is_opposite(s.orientation, space);
    b.t_o = static_cast<double>(opposite) / static_cast<double>(stores.size());
  }
  b.score = params.alpha() * b.t_s + params.beta() * b.t_pf + ScoringParams::c1 * b.t_o;
  return b;
}

inline ScoreBreakdown score(const Layout& layout, const ScoringParams& params) {
  const BlockStoreMap map = map_block_stores(layout);
  return score(layout, map.stores, params);
}

struct PairDistance {
  int i = 0;
  int j = 0;
  int shortest = 0;   // -1 when no route exists
  int manhattan = 0;
  double ratio = 0.0;
};

struct ConnectivityReport {
  double score = 1.0;
  long long pair_count = 0;
  long long disconnected_pairs = 0;
  std::vector<Coord> pick_faces;  // row-major; indices used by per_pair
  std::optional<std::vector<PairDistance>> per_pair;
};

// Mean over unordered pick-face pairs of manhattan / shortest.
//
// A route leaves a pick face through one of its adjacent aisle cells, walks
// aisles and doors, and steps into the other pick face, so both distances are
// measured between aisle entry cells plus the two end steps. Pairs without a
// route contribute 0 and are counted in disconnected_pairs.
inline ConnectivityReport connectivity(const Layout& layout, bool keep_pairs = false) {
  const SpaceSpec& spec = layout.spec();
  ConnectivityReport report;
  std::vector<std::vector<Coord>> entries;
  for (std::size_t i = 0; i < static_cast<std::size_t>(spec.cell_count()); ++i) {
    const Coord c = spec.coord(i);
    if (layout.at(c) != CellKind::PickFace) continue;
    std::vector<Coord> access;
    for (const Coord& d : kNeighbours) {
      const Coord n{c.row + d.row, c.col + d.col};
      if (spec.in_bounds(n) && layout.at(n) == CellKind::Aisle) access.push_back(n);
    }
    report.pick_faces.push_back(c);
    entries.push_back(std::move(access));
  }
  const int n = static_cast<int>(report.pick_faces.size());
  if (n == 0) throw Error(ErrorCode::NoPickFaces, "connectivity needs at least one pick face");
  if (keep_pairs) report.per_pair.emplace();
  if (n == 1) return report;

  constexpr int kUnreached = std::numeric_limits<int>::max();
  std::vector<int> dist(static_cast<std::size_t>(spec.cell_count()));
  std::deque<Coord> queue;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    std::fill(dist.begin(), dist.end(), kUnreached);
    for (const Coord& a : entries[static_cast<std::size_t>(i)]) {
      dist[spec.index(a)] = 0;
      queue.push_back(a);
    }
    while (!queue.empty()) {
      const Coord p = queue.front();
      queue.pop_front();
      const int next = dist[spec.index(p)] + 1;
      for (const Coord& d : kNeighbours) {
        const Coord q{p.row + d.row, p.col + d.col};
        if (!spec.in_bounds(q) || !is_traversable(layout.at(q))) continue;
        int& slot = dist[spec.index(q)];
        if (slot <= next) continue;
        slot = next;
        queue.push_back(q);
      }
    }
    for (int j = i + 1; j < n; ++j) {
      int walk = kUnreached;
      int direct = kUnreached;
      for (const Coord& b : entries[static_cast<std::size_t>(j)]) {
        walk = std::min(walk, dist[spec.index(b)]);
        for (const Coord& a : entries[static_cast<std::size_t>(i)]) {
          direct = std::min(direct, std::abs(a.row - b.row) + std::abs(a.col - b.col));
        }
      }
      PairDistance pair{i, j, -1, direct + 2, 0.0};
      if (walk == kUnreached) {
        ++report.disconnected_pairs;
      } else {
        pair.shortest = walk + 2;
        pair.ratio = static_cast<double>(pair.manhattan) / pair.shortest;
        total += pair.ratio;
      }
      ++report.pair_count;
      if (keep_pairs) report.per_pair->push_back(pair);
    }
  }
  report.score = total / static_cast<double>(report.pair_count);
  return report;
}

struct SweepPoint {
  double alpha = 0.0;
  double theta = 0.0;

  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

// alpha in {0.1, ..., 1.0}; theta in {0.1, 0.2, ...} up to alpha / 2, or the
// single value alpha / 2 when that range is empty.
inline std::vector<SweepPoint> sweep_grid() {
  std::vector<SweepPoint> grid;
  for (int a = 1; a <= 10; ++a) {
    const double alpha = a / 10.0;
    if (a / 2 == 0) {
      grid.push_back({alpha, a / 20.0});
      continue;
    }
    for (int t = 1; t <= a / 2; ++t) grid.push_back({alpha, t / 10.0});
  }
  return grid;
}

}  // namespace wlayout
