#pragma once

// Post-refinement: site-specific pass/fail filters applied to final
// candidates. Refiners never modify a layout.

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wlayout/constraints.hpp"
#include "wlayout/search.hpp"

namespace wlayout {

enum class RefinerKind { EvenRackingUnits, PillarAccess, External };

constexpr std::string_view to_string(RefinerKind kind) {
  switch (kind) {
    case RefinerKind::EvenRackingUnits: return "EvenRackingUnits";
    case RefinerKind::PillarAccess: return "PillarAccess";
    case RefinerKind::External: return "External";
  }
  return "?";
}

inline RefinerKind refiner_kind_from_string(std::string_view name) {
  for (RefinerKind k : {RefinerKind::EvenRackingUnits, RefinerKind::PillarAccess, RefinerKind::External}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::UnknownRefinerId, "unknown refiner kind '" + std::string(name) + "'");
}

struct Refiner {
  std::string id;
  RefinerKind kind = RefinerKind::EvenRackingUnits;
  std::vector<Coord> pillars;                       // PillarAccess
  std::unordered_map<std::uint64_t, bool> verdicts;  // External, keyed by canonical_hash
};

// Every block store holds an even number of racking lanes.
inline bool even_racking_units(const Layout& layout) {
  for (const BlockStore& store : extract_block_stores(layout)) {
    if (store.omega % 2 != 0) return false;
  }
  return true;
}

// Each pillar has an adjacent aisle cell that every door can reach.
inline bool pillars_accessible(const Layout& layout, std::span<const Coord> pillars) {
  const SpaceSpec& spec = layout.spec();
  const std::vector<int> comp = detail::traversable_components(layout);
  std::vector<int> door_components;
  for (const Coord& door : spec.door_connections()) {
    if (layout.at(door) == CellKind::DoorConnection) door_components.push_back(comp[spec.index(door)]);
  }
  for (const Coord& pillar : pillars) {
    bool served = false;
    for (const Coord& d : kNeighbours) {
      const Coord n{pillar.row + d.row, pillar.col + d.col};
      if (!spec.in_bounds(n) || layout.at(n) != CellKind::Aisle) continue;
      const int mine = comp[spec.index(n)];
      if (std::all_of(door_components.begin(), door_components.end(),
                      [mine](int c) { return c == mine; })) {
        served = true;
        break;
      }
    }
    if (!served) return false;
  }
  return true;
}

inline bool passes(const Refiner& refiner, const Layout& layout) {
  switch (refiner.kind) {
    case RefinerKind::EvenRackingUnits:
      return even_racking_units(layout);
    case RefinerKind::PillarAccess:
      return pillars_accessible(layout, refiner.pillars);
    case RefinerKind::External: {
      auto it = refiner.verdicts.find(canonical_hash(layout));
      return it != refiner.verdicts.end() && it->second;
    }
  }
  return false;
}

inline void check_pipeline(std::span<const Refiner> pipeline) {
  std::unordered_set<std::string> ids;
  for (const Refiner& r : pipeline) {
    if (!ids.insert(r.id).second) {
      throw Error(ErrorCode::InvariantViolation, "duplicate refiner id '" + r.id + "'");
    }
  }
}

struct Rejection {
  std::size_t index = 0;
  std::string refiner_id;
};

struct RefineOutcome {
  std::vector<std::size_t> passed;  // input order
  std::vector<Rejection> rejected;  // input order; first failing refiner wins
};

inline RefineOutcome apply_refiners(std::span<const Layout> candidates,
                                    std::span<const Refiner> pipeline) {
  check_pipeline(pipeline);
  RefineOutcome out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Refiner* failed = nullptr;
    for (const Refiner& r : pipeline) {
      if (!passes(r, candidates[i])) {
        failed = &r;
        break;
      }
    }
    if (failed) {
      out.rejected.push_back({i, failed->id});
    } else {
      out.passed.push_back(i);
    }
  }
  return out;
}

inline RefineOutcome apply_refiners(std::span<const SearchResult> candidates,
                                    std::span<const Refiner> pipeline) {
  std::vector<Layout> layouts;
  layouts.reserve(candidates.size());
  for (const SearchResult& r : candidates) layouts.push_back(r.optimal);
  return apply_refiners(std::span<const Layout>(layouts), pipeline);
}

}  // namespace wlayout
