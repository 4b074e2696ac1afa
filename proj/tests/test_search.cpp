#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wlayout/search.hpp"

using namespace wlayout;

namespace {

SearchConfig beam(std::size_t width) {
  SearchConfig c;
  c.beam_size = width;
  return c;
}

SpacePtr open_square(int side, int aisle_width) {
  std::vector<std::string> rows(static_cast<std::size_t>(side), std::string(static_cast<std::size_t>(side), 'S'));
  rows[0][static_cast<std::size_t>(side / 2)] = 'D';
  return oracle::space_from_picture(rows, aisle_width);
}

ParetoPoint point(int n_pf, int n_s, double conn = 0.5, std::uint64_t hash = 0) {
  return {n_pf, n_s, conn, hash};
}

}  // namespace

TEST(Generate, NothingToCarve) {
  auto spec = oracle::space_from_picture({"SS", "SS"}, 3);
  const SearchResult r = generate(spec, ScoringParams(0.5, 0.1), beam(4));
  EXPECT_EQ(r.stats.nodes_expanded, 1);
  EXPECT_EQ(r.stats.depth_reached, 0);
  EXPECT_TRUE(r.optimal.same_cells(initial_layout(spec)));
  EXPECT_FALSE(r.connectivity.has_value());
}

TEST(Generate, RejectsZeroBeam) {
  EXPECT_THROW(generate(open_square(5, 1), ScoringParams(0.5, 0.1), beam(0)), Error);
}

TEST(Generate, BeamNeverBeatsExhaustive) {
  auto spec = open_square(7, 1);
  for (double alpha : {0.2, 0.5, 0.9}) {
    const ScoringParams p(alpha, 0.2);
    const double best = exhaustive(spec, p, 200000).breakdown.score;
    for (std::size_t w : {1u, 2u, 4u}) EXPECT_LE(generate(spec, p, beam(w)).breakdown.score, best + 1e-12);
    EXPECT_NEAR(generate(spec, p, beam(100000)).breakdown.score, best, 1e-12);
  }
}

TEST(Generate, ExhaustiveMatchesLevelOrderReference) {
  auto spec = open_square(4, 1);
  const ScoringParams p(0.5, 0.1);
  const SearchResult r = exhaustive(spec, p, 100000);
  EXPECT_NEAR(r.breakdown.score, oracle::level_order_optimum(spec, p).best, 1e-12);
}

TEST(Generate, NodeLimit) {
  try {
    exhaustive(open_square(6, 1), ScoringParams(0.5, 0.1), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NodeLimitExceeded);
  }
}

TEST(Generate, OptimumIsValid) {
  std::mt19937 rng(51);
  for (int i = 0; i < 20; ++i) {
    auto spec = oracle::random_space(rng, 4, 10, 1, 2);
    const SearchResult r = generate(spec, ScoringParams(0.5, 0.2), beam(3));
    // The uncarved layout is the starting optimum whether or not it is valid.
    if (r.optimal.carve_history().empty()) continue;
    EXPECT_TRUE(r.validation.valid);
    EXPECT_TRUE(oracle::valid(r.optimal));
  }
}

TEST(Generate, RecordedPathReplays) {
  auto spec = open_square(8, 1);
  SearchConfig c = beam(3);
  c.record_path = true;
  const SearchResult r = generate(spec, ScoringParams(0.5, 0.3), c);
  ASSERT_FALSE(r.path.empty());
  EXPECT_TRUE(r.path.front().same_cells(initial_layout(spec)));
  EXPECT_TRUE(r.path.back().same_cells(r.optimal));
  EXPECT_EQ(r.path.size(), r.optimal.carve_history().size() + 1);
  EXPECT_TRUE(replay(spec, r.optimal.carve_history()).same_cells(r.optimal));
}

TEST(Generate, MaxDepthBoundsTree) {
  auto spec = open_square(9, 1);
  SearchConfig c = beam(2);
  c.max_depth = 1;
  const SearchResult r = generate(spec, ScoringParams(0.5, 0.3), c);
  EXPECT_LE(r.stats.depth_reached, 1);
  EXPECT_LE(r.optimal.carve_history().size(), 1u);
}

TEST(Generate, Cancellation) {
  std::stop_source stop;
  stop.request_stop();
  try {
    generate(open_square(7, 1), ScoringParams(0.5, 0.3), beam(2), stop.get_token());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Cancelled);
  }
}

TEST(Generate, Deterministic) {
  auto spec = open_square(9, 1);
  const ScoringParams p(0.4, 0.2);
  const SearchResult a = generate(spec, p, beam(3));
  const SearchResult b = generate(spec, p, beam(3));
  EXPECT_TRUE(a.optimal.same_cells(b.optimal));
  EXPECT_EQ(a.optimal.carve_history(), b.optimal.carve_history());
  EXPECT_EQ(a.stats.nodes_expanded, b.stats.nodes_expanded);
}

TEST(Pareto, DominatedPointDropped) {
  const std::vector<ParetoPoint> pts{point(10, 50), point(12, 48), point(9, 49)};
  EXPECT_EQ(pareto_front_indices(pts), (std::vector<std::size_t>{0, 1}));
}

TEST(Pareto, IdenticalCandidatesCollapse) {
  const std::vector<ParetoPoint> pts{point(5, 5, 0.4, 9), point(5, 5, 0.4, 3), point(5, 5, 0.2, 1)};
  EXPECT_EQ(pareto_front_indices(pts), (std::vector<std::size_t>{1}));
}

TEST(Pareto, Empty) { EXPECT_TRUE(pareto_front_indices({}).empty()); }

TEST(Pareto, MatchesPairwiseReference) {
  std::mt19937 rng(61);
  std::uniform_int_distribution<int> small(0, 12);
  std::uniform_int_distribution<int> conn(0, 3);
  for (int round = 0; round < 50; ++round) {
    std::vector<ParetoPoint> pts;
    std::vector<oracle::Point> ref;
    for (int i = 0; i < 4 + round; ++i) {
      const ParetoPoint p{small(rng), small(rng), conn(rng) / 3.0, static_cast<std::uint64_t>(small(rng))};
      pts.push_back(p);
      ref.push_back({p.n_pf, p.n_s, p.connectivity, p.hash});
    }
    const auto front = pareto_front_indices(pts);
    EXPECT_EQ(front, oracle::dominance_front(ref));
    for (std::size_t i = 1; i < front.size(); ++i) {
      EXPECT_LT(pts[front[i - 1]].n_pf, pts[front[i]].n_pf);
      EXPECT_GT(pts[front[i - 1]].n_s, pts[front[i]].n_s);
    }
  }
}

TEST(Sweep, RunsEveryGridPoint) {
  auto spec = open_square(6, 1);
  SweepOptions o;
  o.workers = 3;
  std::atomic<std::size_t> calls{0};
  o.on_progress = [&](std::size_t, std::size_t total) {
    EXPECT_EQ(total, 26u);
    ++calls;
  };
  const ParetoSet set = pareto_sweep(spec, beam(2), o);
  EXPECT_EQ(set.candidates.size(), 26u);
  EXPECT_EQ(calls.load(), 26u);
  EXPECT_FALSE(set.front.empty());
  for (std::size_t i = 0; i < set.grid.size(); ++i) {
    EXPECT_DOUBLE_EQ(set.candidates[i].params.alpha(), set.grid[i].alpha);
    EXPECT_DOUBLE_EQ(set.candidates[i].params.theta(), set.grid[i].theta);
  }
}

TEST(Sweep, WorkerCountDoesNotMatter) {
  auto spec = open_square(7, 1);
  SweepOptions one;
  SweepOptions many;
  many.workers = 6;
  const ParetoSet a = pareto_sweep(spec, beam(2), one);
  const ParetoSet b = pareto_sweep(spec, beam(2), many);
  ASSERT_EQ(a.candidates.size(), b.candidates.size());
  for (std::size_t i = 0; i < a.candidates.size(); ++i) {
    EXPECT_TRUE(a.candidates[i].optimal.same_cells(b.candidates[i].optimal));
  }
  EXPECT_EQ(a.front, b.front);
}

TEST(Sweep, Cancelled) {
  std::stop_source stop;
  stop.request_stop();
  SweepOptions o;
  o.stop = stop.get_token();
  try {
    pareto_sweep(open_square(6, 1), beam(2), o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Cancelled);
  }
}

TEST(Sweep, DegenerateSpace) {
  try {
    pareto_sweep(make_space(SpaceSpec(2, 2, 1, {{0, 0}, {0, 1}, {1, 0}, {1, 1}})), beam(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateSpace);
  }
}
