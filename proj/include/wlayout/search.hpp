#pragma once

// Constrained beam search over aisle carvings, the exhaustive reference
// search, the alpha-theta sweep and Pareto-front extraction.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <stop_token>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wlayout/constraints.hpp"
#include "wlayout/grid.hpp"
#include "wlayout/scoring.hpp"

namespace wlayout {

struct SearchConfig {
  std::size_t beam_size = 1;
  std::optional<int> max_depth;
  bool dedupe = true;
  bool record_path = false;
};

struct SearchStats {
  long long nodes_expanded = 0;
  long long children_generated = 0;
  long long children_valid = 0;
  int depth_reached = 0;
  double wall_seconds = 0.0;
};

struct SearchResult {
  Layout optimal;
  ScoreBreakdown breakdown;
  std::optional<ConnectivityReport> connectivity;  // absent when the optimum has no pick faces
  ScoringParams params;
  ValidationReport validation;
  SearchStats stats;
  std::vector<Layout> path;  // L_full, then each carve leading to the optimum
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline void check_beam(const SearchConfig& config) {
  if (config.beam_size < 1) throw Error(ErrorCode::InvariantViolation, "beam_size must be >= 1");
}

inline SearchResult finish(const Layout& optimal, const ScoringParams& params, SearchStats stats,
                           bool record_path, Clock::time_point start) {
  const BlockStoreMap map = map_block_stores(optimal);
  SearchResult result{optimal, score(optimal, map.stores, params), std::nullopt, params,
                      validate(optimal, map), stats, {}};
  if (optimal.n_pick_faces() > 0) result.connectivity = connectivity(optimal);
  if (record_path) {
    const auto& history = optimal.carve_history();
    Layout step = initial_layout(optimal.spec_ptr());
    result.path.push_back(step);
    for (const CarveAction& action : history) {
      step = carve(step, action);
      result.path.push_back(step);
    }
  }
  result.stats.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

// Validity and score of one candidate; score is empty for invalid layouts.
inline std::optional<double> evaluate(const Layout& layout, const ScoringParams& params) {
  const BlockStoreMap map = map_block_stores(layout);
  if (!is_valid(layout, map)) return std::nullopt;
  return score(layout, map.stores, params).score;
}

struct Node {
  Layout layout;
  std::optional<double> score;  // empty for unscored (invalid first-level) nodes
  std::uint64_t hash = 0;
};

// Higher score first, then lower hash.
inline bool ranks_before(const Node& a, const Node& b) {
  if (*a.score != *b.score) return *a.score > *b.score;
  return a.hash < b.hash;
}

}  // namespace detail

// Beam search from the fully stored space.
//
// Level 1 keeps every child of L_full so that each first carve gets explored.
// Deeper levels keep only valid children, and only from parents whose best
// child scores at least as high as the parent. Children kept across the whole
// level are pooled and the beam_size best (score desc, hash asc) are expanded
// next. The optimum changes only on strict improvement.
inline SearchResult generate(const SpacePtr& spec, const ScoringParams& params,
                             const SearchConfig& config = {}, std::stop_token stop = {}) {
  detail::check_beam(config);
  const auto start = detail::Clock::now();
  using detail::Node;

  Layout full = initial_layout(spec);
  SearchStats stats;
  Layout best = full;
  double best_score = score(full, params).score;

  auto cancelled = [&] {
    if (stop.stop_requested()) throw Error(ErrorCode::Cancelled, "search cancelled");
  };

  std::vector<Node> frontier;
  stats.nodes_expanded = 1;
  for (Layout& child : enumerate_children(full)) {
    ++stats.children_generated;
    std::optional<double> s = detail::evaluate(child, params);
    if (s) {
      ++stats.children_valid;
      if (*s > best_score) {
        best_score = *s;
        best = child;
      }
    }
    const std::uint64_t h = canonical_hash(child);
    frontier.push_back({std::move(child), s, h});
  }
  int depth = frontier.empty() ? 0 : 1;

  const std::size_t trim_at = config.beam_size > (std::numeric_limits<std::size_t>::max() / 4)
                                  ? std::numeric_limits<std::size_t>::max()
                                  : config.beam_size * 2 + 64;

  while (!frontier.empty() && (!config.max_depth || depth < *config.max_depth)) {
    std::unordered_map<std::uint64_t, std::optional<double>> evaluated;
    std::unordered_set<std::uint64_t> pooled;
    std::vector<Node> pool;
    auto trim = [&] {
      if (pool.size() <= config.beam_size) return;
      std::nth_element(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(config.beam_size),
                       pool.end(), detail::ranks_before);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(config.beam_size), pool.end());
    };

    for (const Node& parent : frontier) {
      cancelled();
      ++stats.nodes_expanded;
      std::vector<Node> kept;
      double best_child = -std::numeric_limits<double>::infinity();
      for (Layout& child : enumerate_children(parent.layout)) {
        ++stats.children_generated;
        const std::uint64_t h = canonical_hash(child);
        std::optional<double> s;
        if (auto it = evaluated.find(h); config.dedupe && it != evaluated.end()) {
          s = it->second;
        } else {
          s = detail::evaluate(child, params);
          if (config.dedupe) evaluated.emplace(h, s);
          if (s && *s > best_score) {
            best_score = *s;
            best = child;
          }
        }
        if (!s) continue;
        ++stats.children_valid;
        best_child = std::max(best_child, *s);
        kept.push_back({std::move(child), s, h});
      }
      if (kept.empty() || (parent.score && best_child < *parent.score)) continue;
      for (Node& node : kept) {
        if (config.dedupe && !pooled.insert(node.hash).second) continue;
        pool.push_back(std::move(node));
      }
      if (pool.size() >= trim_at) trim();
    }
    trim();
    std::sort(pool.begin(), pool.end(), detail::ranks_before);
    frontier = std::move(pool);
    if (!frontier.empty()) ++depth;
  }
  stats.depth_reached = depth;
  return detail::finish(best, params, stats, config.record_path, start);
}

// Reference search: the same tree as generate() with an unbounded beam,
// walked depth-first with global de-duplication. Throws NodeLimitExceeded
// once more than node_limit nodes would be expanded.
inline SearchResult exhaustive(const SpacePtr& spec, const ScoringParams& params,
                               long long node_limit, bool record_path = false) {
  const auto start = detail::Clock::now();
  using detail::Node;

  Layout full = initial_layout(spec);
  SearchStats stats;
  Layout best = full;
  double best_score = score(full, params).score;

  std::unordered_set<std::uint64_t> visited{canonical_hash(full)};
  std::unordered_map<std::uint64_t, std::optional<double>> memo;
  auto evaluate = [&](const Layout& layout, std::uint64_t h) {
    auto it = memo.find(h);
    if (it != memo.end()) return it->second;
    std::optional<double> s = detail::evaluate(layout, params);
    memo.emplace(h, s);
    if (s && *s > best_score) {
      best_score = *s;
      best = layout;
    }
    return s;
  };

  struct Frame {
    Node node;
    int depth;
  };
  std::vector<Frame> stack;
  auto expand = [&]() {
    if (++stats.nodes_expanded > node_limit) {
      throw Error(ErrorCode::NodeLimitExceeded,
                  "exhaustive search exceeded " + std::to_string(node_limit) + " nodes");
    }
  };

  expand();
  {
    std::vector<Layout> children = enumerate_children(full);
    for (auto it = children.rbegin(); it != children.rend(); ++it) {
      ++stats.children_generated;
      const std::uint64_t h = canonical_hash(*it);
      std::optional<double> s = evaluate(*it, h);
      stats.children_valid += s.has_value();
      if (visited.insert(h).second) stack.push_back({{*it, s, h}, 1});
    }
  }
  while (!stack.empty()) {
    Frame frame = std::move(stack.back());
    stack.pop_back();
    expand();
    stats.depth_reached = std::max(stats.depth_reached, frame.depth);
    std::vector<Node> kept;
    double best_child = -std::numeric_limits<double>::infinity();
    for (Layout& child : enumerate_children(frame.node.layout)) {
      ++stats.children_generated;
      const std::uint64_t h = canonical_hash(child);
      std::optional<double> s = evaluate(child, h);
      if (!s) continue;
      ++stats.children_valid;
      best_child = std::max(best_child, *s);
      kept.push_back({std::move(child), s, h});
    }
    if (kept.empty() || (frame.node.score && best_child < *frame.node.score)) continue;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      if (visited.insert(it->hash).second) stack.push_back({std::move(*it), frame.depth + 1});
    }
  }
  return detail::finish(best, params, stats, record_path, start);
}

// Objective-space coordinates used for dominance.
struct ParetoPoint {
  int n_pf = 0;
  int n_s = 0;
  double connectivity = -1.0;  // -1 when undefined
  std::uint64_t hash = 0;
};

inline bool dominates(const ParetoPoint& a, const ParetoPoint& b) {
  return a.n_pf >= b.n_pf && a.n_s >= b.n_s && (a.n_pf > b.n_pf || a.n_s > b.n_s);
}

// Indices of the non-dominated points, sorted by n_pf ascending. Among points
// sharing (n_pf, n_s) the one with higher connectivity, then lower hash, wins.
inline std::vector<std::size_t> pareto_front_indices(std::span<const ParetoPoint> points) {
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const ParetoPoint& a = points[x];
    const ParetoPoint& b = points[y];
    if (a.n_pf != b.n_pf) return a.n_pf > b.n_pf;
    if (a.n_s != b.n_s) return a.n_s > b.n_s;
    if (a.connectivity != b.connectivity) return a.connectivity > b.connectivity;
    if (a.hash != b.hash) return a.hash < b.hash;
    return x < y;
  });
  // Sweep from the largest n_pf down: a point survives iff its n_s beats
  // every point seen so far (all of which have n_pf >= its own).
  std::vector<std::size_t> front;
  int best_storage = std::numeric_limits<int>::min();
  for (std::size_t i = 0; i < order.size(); ++i) {
    const ParetoPoint& p = points[order[i]];
    if (i > 0) {
      const ParetoPoint& prev = points[order[i - 1]];
      if (prev.n_pf == p.n_pf && prev.n_s == p.n_s) continue;
    }
    if (p.n_s > best_storage) {
      front.push_back(order[i]);
      best_storage = p.n_s;
    }
  }
  std::reverse(front.begin(), front.end());
  return front;
}

inline ParetoPoint pareto_point(const SearchResult& r) {
  return {r.breakdown.n_pf, r.breakdown.n_s, r.connectivity ? r.connectivity->score : -1.0,
          canonical_hash(r.optimal)};
}

inline std::vector<SearchResult> pareto_front(std::span<const SearchResult> candidates) {
  std::vector<ParetoPoint> points;
  points.reserve(candidates.size());
  for (const SearchResult& r : candidates) points.push_back(pareto_point(r));
  std::vector<SearchResult> out;
  for (std::size_t i : pareto_front_indices(points)) out.push_back(candidates[i]);
  return out;
}

struct ParetoSet {
  SpacePtr space;
  SearchConfig config;
  std::vector<SweepPoint> grid;
  std::vector<SearchResult> candidates;  // one per grid point, in grid order
  std::vector<std::size_t> front;        // indices into candidates, n_pf ascending
};

struct SweepOptions {
  unsigned workers = 1;
  std::vector<SweepPoint> grid = sweep_grid();
  // Called after each finished run with (completed, total); may be invoked
  // from worker threads.
  std::function<void(std::size_t, std::size_t)> on_progress;
  std::stop_token stop;
};

// Runs generate() for every grid point on a pool of workers. Results are
// stored by grid index, so the output does not depend on scheduling.
inline ParetoSet pareto_sweep(const SpacePtr& spec, const SearchConfig& config,
                              const SweepOptions& options = {}) {
  detail::check_beam(config);
  initial_layout(spec);  // surfaces DegenerateSpace before spawning workers

  const std::size_t total = options.grid.size();
  std::vector<std::optional<SearchResult>> results(total);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> completed{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::stop_source abort;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total || abort.stop_requested()) return;
      try {
        if (options.stop.stop_requested()) throw Error(ErrorCode::Cancelled, "sweep cancelled");
        const SweepPoint& p = options.grid[i];
        results[i] = generate(spec, ScoringParams(p.alpha, p.theta), config, options.stop);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        abort.request_stop();
        return;
      }
      const std::size_t done = completed.fetch_add(1) + 1;
      if (options.on_progress) options.on_progress(done, total);
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(total)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  ParetoSet set{spec, config, options.grid, {}, {}};
  set.candidates.reserve(total);
  for (auto& r : results) set.candidates.push_back(std::move(*r));
  std::vector<ParetoPoint> points;
  for (const SearchResult& r : set.candidates) points.push_back(pareto_point(r));
  set.front = pareto_front_indices(points);
  return set;
}

}  // namespace wlayout
