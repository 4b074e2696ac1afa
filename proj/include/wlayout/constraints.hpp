#pragma once

// Layout filtering: functional constraints (F1-F4) and efficiency
// constraints (E1-E3). Violations are data, never exceptions.

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "wlayout/grid.hpp"

namespace wlayout {

enum class ConstraintId : std::uint8_t {
  F1_AisleTooNarrowAtPickFace,
  F2_AisleUnreachableFromDoor,
  F3_StorageInDoorwayOrReserved,
  F4_PillarBlocksAisle,
  E1_AisleTooWide,
  E2_TwoSidedStoreUnderTwoRows,
  E3_SingleItemBlockStore,
};

inline constexpr std::array<ConstraintId, 7> kAllConstraints{
    ConstraintId::F1_AisleTooNarrowAtPickFace, ConstraintId::F2_AisleUnreachableFromDoor,
    ConstraintId::F3_StorageInDoorwayOrReserved, ConstraintId::F4_PillarBlocksAisle,
    ConstraintId::E1_AisleTooWide,             ConstraintId::E2_TwoSidedStoreUnderTwoRows,
    ConstraintId::E3_SingleItemBlockStore,
};

constexpr std::string_view to_string(ConstraintId id) {
  switch (id) {
    case ConstraintId::F1_AisleTooNarrowAtPickFace: return "F1_AisleTooNarrowAtPickFace";
    case ConstraintId::F2_AisleUnreachableFromDoor: return "F2_AisleUnreachableFromDoor";
    case ConstraintId::F3_StorageInDoorwayOrReserved: return "F3_StorageInDoorwayOrReserved";
    case ConstraintId::F4_PillarBlocksAisle: return "F4_PillarBlocksAisle";
    case ConstraintId::E1_AisleTooWide: return "E1_AisleTooWide";
    case ConstraintId::E2_TwoSidedStoreUnderTwoRows: return "E2_TwoSidedStoreUnderTwoRows";
    case ConstraintId::E3_SingleItemBlockStore: return "E3_SingleItemBlockStore";
  }
  return "?";
}

struct Violation {
  ConstraintId id;
  std::string message;
  std::vector<Coord> cells;
};

struct ValidationReport {
  bool valid = true;
  std::vector<Violation> violations;

  void add(ConstraintId id, std::string message, std::vector<Coord> cells) {
    valid = false;
    violations.push_back({id, std::move(message), std::move(cells)});
  }
  void merge(ValidationReport other) {
    for (Violation& v : other.violations) add(v.id, std::move(v.message), std::move(v.cells));
  }
  bool has(ConstraintId id) const {
    return std::any_of(violations.begin(), violations.end(),
                       [id](const Violation& v) { return v.id == id; });
  }
  std::vector<ConstraintId> ids() const {
    std::vector<ConstraintId> out;
    for (const Violation& v : violations) {
      if (std::find(out.begin(), out.end(), v.id) == out.end()) out.push_back(v.id);
    }
    return out;
  }
};

namespace detail {

// Largest all-`open` axis-aligned square containing each cell; 0 elsewhere.
// Only squares not contained in a larger bottom-right neighbour are painted.
template <class IsOpen>
std::vector<int> max_square_map(const SpaceSpec& spec, IsOpen is_open) {
  const int h = spec.height();
  const int w = spec.width();
  std::vector<int> corner(static_cast<std::size_t>(h) * w, 0);
  auto at = [&](std::vector<int>& g, int r, int c) -> int& {
    return g[static_cast<std::size_t>(r) * w + c];
  };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!is_open(Coord{r, c})) continue;
      const int up = r > 0 ? at(corner, r - 1, c) : 0;
      const int left = c > 0 ? at(corner, r, c - 1) : 0;
      const int diag = r > 0 && c > 0 ? at(corner, r - 1, c - 1) : 0;
      at(corner, r, c) = 1 + std::min({up, left, diag});
    }
  }
  std::vector<int> out(corner.size(), 0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const int k = at(corner, r, c);
      if (k == 0) continue;
      const bool covered = (r + 1 < h && at(corner, r + 1, c) > k) ||
                           (c + 1 < w && at(corner, r, c + 1) > k) ||
                           (r + 1 < h && c + 1 < w && at(corner, r + 1, c + 1) > k);
      if (covered) continue;
      for (int rr = r - k + 1; rr <= r; ++rr) {
        for (int cc = c - k + 1; cc <= c; ++cc) at(out, rr, cc) = std::max(at(out, rr, cc), k);
      }
    }
  }
  return out;
}

// Connected components of traversable cells (aisles and doors).
inline std::vector<int> traversable_components(const Layout& layout) {
  const SpaceSpec& spec = layout.spec();
  std::vector<int> comp(static_cast<std::size_t>(spec.cell_count()), -1);
  std::vector<Coord> stack;
  int next = 0;
  for (std::size_t i = 0; i < comp.size(); ++i) {
    const Coord seed = spec.coord(i);
    if (comp[i] != -1 || !is_traversable(layout.at(seed))) continue;
    comp[i] = next;
    stack.push_back(seed);
    while (!stack.empty()) {
      const Coord p = stack.back();
      stack.pop_back();
      for (const Coord& d : kNeighbours) {
        const Coord n{p.row + d.row, p.col + d.col};
        if (!spec.in_bounds(n) || !is_traversable(layout.at(n))) continue;
        int& slot = comp[spec.index(n)];
        if (slot != -1) continue;
        slot = next;
        stack.push_back(n);
      }
    }
    ++next;
  }
  return comp;
}

}  // namespace detail

// For each aisle cell, the side of the largest all-aisle square containing
// it. Pillars, walls and storage break squares.
inline std::vector<int> clear_width_map(const Layout& layout) {
  return detail::max_square_map(layout.spec(),
                                [&](Coord c) { return layout.at(c) == CellKind::Aisle; });
}

// Same measure with pillars counted as aisle, i.e. the width the corridor
// would have if no pillar stood in it.
inline std::vector<int> pillar_free_width_map(const Layout& layout) {
  return detail::max_square_map(layout.spec(), [&](Coord c) {
    const CellKind k = layout.at(c);
    return k == CellKind::Aisle || k == CellKind::Pillar;
  });
}

// Aisle cells not reachable from `door`, grouped per door.
inline std::vector<std::pair<Coord, std::vector<Coord>>> unreachable_aisles(const Layout& layout) {
  const SpaceSpec& spec = layout.spec();
  std::vector<std::pair<Coord, std::vector<Coord>>> out;
  if (layout.n_aisles() == 0 || spec.door_connections().empty()) return out;
  const std::vector<int> comp = detail::traversable_components(layout);
  for (const Coord& door : spec.door_connections()) {
    if (layout.at(door) != CellKind::DoorConnection) continue;
    const int mine = comp[spec.index(door)];
    std::vector<Coord> missing;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      const Coord c = spec.coord(i);
      if (layout.at(c) == CellKind::Aisle && comp[i] != mine) missing.push_back(c);
    }
    if (!missing.empty()) out.emplace_back(door, std::move(missing));
  }
  return out;
}

namespace detail {

inline void functional_checks(const Layout& layout, ValidationReport& report, bool stop_early) {
  const SpaceSpec& spec = layout.spec();
  const int required = spec.aisle_width();

  std::vector<Coord> bad_storage;
  for (std::size_t i = 0; i < static_cast<std::size_t>(spec.cell_count()); ++i) {
    const Coord c = spec.coord(i);
    const CellKind fixed = spec.fixed_kind(c);
    if (is_storage(layout.at(c)) &&
        (fixed == CellKind::DoorConnection || fixed == CellKind::Reserved)) {
      bad_storage.push_back(c);
    }
  }
  if (!bad_storage.empty()) {
    report.add(ConstraintId::F3_StorageInDoorwayOrReserved,
               "storage placed on a doorway or reserved cell", std::move(bad_storage));
    if (stop_early) return;
  }

  if (layout.n_aisles() > 0) {
    const std::vector<int> width = clear_width_map(layout);
    const bool has_pillars = !spec.pillars().empty();
    const std::vector<int> unobstructed = has_pillars ? pillar_free_width_map(layout) : width;
    std::vector<Coord> narrow;
    std::vector<Coord> blocked;
    for (std::size_t i = 0; i < width.size(); ++i) {
      const Coord c = spec.coord(i);
      if (layout.at(c) != CellKind::Aisle || width[i] >= required) continue;
      if (unobstructed[i] >= required) {
        blocked.push_back(c);
        continue;
      }
      for (const Coord& d : kNeighbours) {
        const Coord n{c.row + d.row, c.col + d.col};
        if (spec.in_bounds(n) && layout.at(n) == CellKind::PickFace) {
          narrow.push_back(c);
          break;
        }
      }
    }
    if (!narrow.empty()) {
      report.add(ConstraintId::F1_AisleTooNarrowAtPickFace,
                 "aisle serving pick faces is narrower than " + std::to_string(required),
                 std::move(narrow));
      if (stop_early) return;
    }
    if (!blocked.empty()) {
      report.add(ConstraintId::F4_PillarBlocksAisle,
                 "pillar narrows aisle below " + std::to_string(required), std::move(blocked));
      if (stop_early) return;
    }
  }

  for (auto& [door, missing] : unreachable_aisles(layout)) {
    report.add(ConstraintId::F2_AisleUnreachableFromDoor,
               "aisle cells unreachable from door " + SpaceSpec::format(door), std::move(missing));
    if (stop_early) return;
  }
}

// Runs of a two-sided store that are served from both ends but hold fewer
// than two rows between them.
inline std::vector<Coord> shallow_two_sided_runs(const Layout& layout, const BlockStoreMap& map,
                                                 int id) {
  const BlockStore& store = map.stores[static_cast<std::size_t>(id)];
  const SpaceSpec& spec = layout.spec();
  std::vector<Coord> out;
  auto is_aisle = [&](Coord c) { return spec.in_bounds(c) && layout.at(c) == CellKind::Aisle; };
  auto scan = [&](bool by_column) {
    const BoundingBox& box = store.bbox;
    const int from = by_column ? box.min_col : box.min_row;
    const int to = by_column ? box.max_col : box.max_row;
    const int along_from = by_column ? box.min_row : box.min_col;
    const int along_to = by_column ? box.max_row : box.max_col;
    auto at = [&](int lane, int pos) { return by_column ? Coord{pos, lane} : Coord{lane, pos}; };
    for (int lane = from; lane <= to; ++lane) {
      int pos = along_from;
      while (pos <= along_to) {
        if (map.label[spec.index(at(lane, pos))] != id) {
          ++pos;
          continue;
        }
        const int start = pos;
        while (pos <= along_to && map.label[spec.index(at(lane, pos))] == id) ++pos;
        if (pos - start < 2 && is_aisle(at(lane, start - 1)) && is_aisle(at(lane, pos))) {
          for (int p = start; p < pos; ++p) out.push_back(at(lane, p));
        }
      }
    }
  };
  if ((store.access_sides & side::N) && (store.access_sides & side::S)) scan(true);
  if ((store.access_sides & side::E) && (store.access_sides & side::W)) scan(false);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline void efficiency_checks(const Layout& layout, const BlockStoreMap& map,
                              ValidationReport& report, bool stop_early) {
  const SpaceSpec& spec = layout.spec();
  const int required = spec.aisle_width();
  if (layout.n_aisles() > 0) {
    const std::vector<int> width = clear_width_map(layout);
    std::vector<Coord> wide;
    for (std::size_t i = 0; i < width.size(); ++i) {
      if (width[i] > required) wide.push_back(spec.coord(i));
    }
    if (!wide.empty()) {
      report.add(ConstraintId::E1_AisleTooWide,
                 "aisle wider than " + std::to_string(required), std::move(wide));
      if (stop_early) return;
    }
  }
  for (std::size_t id = 0; id < map.stores.size(); ++id) {
    const BlockStore& store = map.stores[id];
    if (store.size() < 2) {
      report.add(ConstraintId::E3_SingleItemBlockStore,
                 "block store " + std::to_string(id) + " holds a single item", store.cells);
      if (stop_early) return;
    }
    if (store.two_sided()) {
      std::vector<Coord> shallow = shallow_two_sided_runs(layout, map, static_cast<int>(id));
      if (!shallow.empty()) {
        report.add(ConstraintId::E2_TwoSidedStoreUnderTwoRows,
                   "two-sided block store " + std::to_string(id) + " is one row deep",
                   std::move(shallow));
        if (stop_early) return;
      }
    }
  }
}

}  // namespace detail

inline ValidationReport check_functional(const Layout& layout) {
  ValidationReport report;
  detail::functional_checks(layout, report, false);
  return report;
}

inline ValidationReport check_efficiency(const Layout& layout, const BlockStoreMap& map) {
  ValidationReport report;
  detail::efficiency_checks(layout, map, report, false);
  return report;
}

inline ValidationReport check_efficiency(const Layout& layout) {
  return check_efficiency(layout, map_block_stores(layout));
}

// Full report: functional checks first, then efficiency checks.
inline ValidationReport validate(const Layout& layout, const BlockStoreMap& map) {
  ValidationReport report = check_functional(layout);
  report.merge(check_efficiency(layout, map));
  return report;
}

inline ValidationReport validate(const Layout& layout) {
  return validate(layout, map_block_stores(layout));
}

// Same verdict as validate(), stopping at the first violation.
inline bool is_valid(const Layout& layout, const BlockStoreMap& map) {
  ValidationReport report;
  detail::functional_checks(layout, report, true);
  if (!report.valid) return false;
  detail::efficiency_checks(layout, map, report, true);
  return report.valid;
}

inline bool is_valid(const Layout& layout) { return is_valid(layout, map_block_stores(layout)); }

}  // namespace wlayout
