#pragma once

// Grid data model for warehouse layout search: the physical space, layouts
// (search nodes), block stores, pick faces, aisle carving and child
// enumeration.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "wlayout/error.hpp"

namespace wlayout {

struct Coord {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Coord&, const Coord&) = default;
};

enum class CellKind : std::uint8_t {
  Wall,
  DoorConnection,
  Pillar,
  Reserved,
  Storage,
  Aisle,
  PickFace,
};

constexpr bool is_storage(CellKind kind) {
  return kind == CellKind::Storage || kind == CellKind::PickFace;
}

// Cells a worker can walk through.
constexpr bool is_traversable(CellKind kind) {
  return kind == CellKind::Aisle || kind == CellKind::DoorConnection;
}

enum class Orientation : std::uint8_t { Horizontal, Vertical, Square };

constexpr const char* to_string(Orientation o) {
  switch (o) {
    case Orientation::Horizontal: return "Horizontal";
    case Orientation::Vertical: return "Vertical";
    case Orientation::Square: return "Square";
  }
  return "?";
}

constexpr bool is_opposite(Orientation a, Orientation b) {
  return (a == Orientation::Horizontal && b == Orientation::Vertical) ||
         (a == Orientation::Vertical && b == Orientation::Horizontal);
}

// Bitmask of block-store sides that touch an aisle.
namespace side {
inline constexpr std::uint8_t N = 1;
inline constexpr std::uint8_t S = 2;
inline constexpr std::uint8_t E = 4;
inline constexpr std::uint8_t W = 8;
}  // namespace side

inline constexpr std::array<Coord, 4> kNeighbours{{{-1, 0}, {1, 0}, {0, 1}, {0, -1}}};

// Immutable description of the physical space. Masks are stored sorted and
// de-duplicated so equal specs compare and serialize identically.
class SpaceSpec {
 public:
  SpaceSpec(int width, int height, int aisle_width, std::vector<Coord> walls = {},
            std::vector<Coord> door_connections = {}, std::vector<Coord> pillars = {},
            std::vector<Coord> reserved = {})
      : width_(width),
        height_(height),
        aisle_width_(aisle_width),
        walls_(normalized(std::move(walls))),
        doors_(normalized(std::move(door_connections))),
        pillars_(normalized(std::move(pillars))),
        reserved_(normalized(std::move(reserved))) {
    if (width_ <= 0 || height_ <= 0) {
      throw Error(ErrorCode::InvariantViolation, "grid dimensions must be positive");
    }
    if (aisle_width_ < 1) {
      throw Error(ErrorCode::InvariantViolation, "aisle_width must be >= 1");
    }
    fixed_.assign(static_cast<std::size_t>(width_) * height_, CellKind::Storage);
    paint(walls_, CellKind::Wall, "walls");
    paint(doors_, CellKind::DoorConnection, "door_connections");
    paint(pillars_, CellKind::Pillar, "pillars");
    paint(reserved_, CellKind::Reserved, "reserved");

    for (const Coord& door : doors_) {
      bool touches_open = false;
      for (const Coord& d : kNeighbours) {
        const Coord n{door.row + d.row, door.col + d.col};
        if (in_bounds(n) && fixed_kind(n) == CellKind::Storage) touches_open = true;
      }
      if (!touches_open) {
        throw Error(ErrorCode::InvariantViolation,
                    "door connection " + format(door) + " is not adjacent to an open cell");
      }
    }
    open_area_ = static_cast<int>(std::count(fixed_.begin(), fixed_.end(), CellKind::Storage));
    if (open_area_ == 0) {
      throw Error(ErrorCode::DegenerateSpace, "space has no open cells");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int aisle_width() const noexcept { return aisle_width_; }
  int cell_count() const noexcept { return width_ * height_; }
  const std::vector<Coord>& walls() const noexcept { return walls_; }
  const std::vector<Coord>& door_connections() const noexcept { return doors_; }
  const std::vector<Coord>& pillars() const noexcept { return pillars_; }
  const std::vector<Coord>& reserved() const noexcept { return reserved_; }

  // Cells that can hold storage or aisles: everything except walls, doors,
  // pillars and reserved cells.
  int total_open_area() const noexcept { return open_area_; }

  bool in_bounds(Coord c) const noexcept {
    return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
  }
  std::size_t index(Coord c) const noexcept {
    return static_cast<std::size_t>(c.row) * width_ + c.col;
  }
  Coord coord(std::size_t i) const noexcept {
    return {static_cast<int>(i / width_), static_cast<int>(i % width_)};
  }

  // Mask kind of a cell; open cells report Storage.
  CellKind fixed_kind(Coord c) const noexcept { return fixed_[index(c)]; }
  bool is_open(Coord c) const noexcept { return fixed_kind(c) == CellKind::Storage; }

  friend bool operator==(const SpaceSpec& a, const SpaceSpec& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.aisle_width_ == b.aisle_width_ &&
           a.walls_ == b.walls_ && a.doors_ == b.doors_ && a.pillars_ == b.pillars_ &&
           a.reserved_ == b.reserved_;
  }

  static std::string format(Coord c) {
    return "[" + std::to_string(c.row) + ", " + std::to_string(c.col) + "]";
  }

 private:
  static std::vector<Coord> normalized(std::vector<Coord> cells) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    return cells;
  }

  void paint(const std::vector<Coord>& cells, CellKind kind, const char* mask) {
    for (const Coord& c : cells) {
      if (!in_bounds(c)) {
        throw Error(ErrorCode::InvariantViolation,
                    std::string(mask) + " coordinate " + format(c) + " out of bounds");
      }
      CellKind& slot = fixed_[index(c)];
      if (slot != CellKind::Storage) {
        throw Error(ErrorCode::InvariantViolation,
                    std::string(mask) + " coordinate " + format(c) + " overlaps another mask");
      }
      slot = kind;
    }
  }

  int width_;
  int height_;
  int aisle_width_;
  std::vector<Coord> walls_;
  std::vector<Coord> doors_;
  std::vector<Coord> pillars_;
  std::vector<Coord> reserved_;
  std::vector<CellKind> fixed_;
  int open_area_ = 0;
};

using SpacePtr = std::shared_ptr<const SpaceSpec>;

inline SpacePtr make_space(SpaceSpec spec) {
  return std::make_shared<const SpaceSpec>(std::move(spec));
}

inline Orientation space_orientation(const SpaceSpec& spec) {
  if (spec.width() > spec.height()) return Orientation::Horizontal;
  if (spec.height() > spec.width()) return Orientation::Vertical;
  return Orientation::Square;
}

// Horizontal strips cover aisle_width rows; vertical strips aisle_width
// columns. The offset is relative to the block store's bounding box.
struct CarveAction {
  int block_store_id = 0;
  Orientation orientation = Orientation::Horizontal;
  int offset = 0;

  friend bool operator==(const CarveAction&, const CarveAction&) = default;
};

struct BoundingBox {
  int min_row = 0;
  int min_col = 0;
  int max_row = 0;
  int max_col = 0;

  int rows() const noexcept { return max_row - min_row + 1; }
  int cols() const noexcept { return max_col - min_col + 1; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct BlockStore {
  std::vector<Coord> cells;  // row-major
  BoundingBox bbox;
  int omega = 0;
  std::vector<int> lane_depths;
  Orientation orientation = Orientation::Square;
  std::uint8_t access_sides = 0;

  int max_depth() const {
    return lane_depths.empty() ? 0 : *std::max_element(lane_depths.begin(), lane_depths.end());
  }
  bool two_sided() const noexcept {
    return ((access_sides & side::N) && (access_sides & side::S)) ||
           ((access_sides & side::E) && (access_sides & side::W));
  }
  int size() const noexcept { return static_cast<int>(cells.size()); }
};

class Layout;
Layout derive_pick_faces(const Layout& layout);

// One node of the search tree. Immutable once built.
class Layout {
 public:
  // Builds a layout from raw cell kinds and relabels pick faces.
  static Layout from_cells(SpacePtr spec, std::vector<CellKind> cells,
                           std::vector<CarveAction> history = {}, bool imported = false) {
    Layout layout = unchecked(std::move(spec), std::move(cells), std::move(history), imported);
    layout.relabel_pick_faces();
    return layout;
  }

  // Keeps the given labels verbatim (stale pick faces included). Used for
  // importing and for fault injection in tests.
  static Layout unchecked(SpacePtr spec, std::vector<CellKind> cells,
                          std::vector<CarveAction> history = {}, bool imported = false) {
    if (!spec) throw Error(ErrorCode::InvariantViolation, "layout requires a space");
    if (cells.size() != static_cast<std::size_t>(spec->cell_count())) {
      throw Error(ErrorCode::DimensionMismatch, "cell count does not match space dimensions");
    }
    Layout layout;
    layout.spec_ = std::move(spec);
    layout.cells_ = std::move(cells);
    layout.history_ = std::move(history);
    layout.imported_ = imported;
    layout.recount();
    return layout;
  }

  const SpaceSpec& spec() const noexcept { return *spec_; }
  const SpacePtr& spec_ptr() const noexcept { return spec_; }
  int width() const noexcept { return spec_->width(); }
  int height() const noexcept { return spec_->height(); }

  CellKind at(Coord c) const noexcept { return cells_[spec_->index(c)]; }
  CellKind at(int row, int col) const noexcept { return at(Coord{row, col}); }
  bool in_bounds(Coord c) const noexcept { return spec_->in_bounds(c); }
  std::span<const CellKind> cells() const noexcept { return cells_; }

  const std::vector<CarveAction>& carve_history() const noexcept { return history_; }
  int n_storage() const noexcept { return n_storage_; }
  int n_pick_faces() const noexcept { return n_pick_faces_; }
  int n_aisles() const noexcept { return n_aisles_; }
  bool imported() const noexcept { return imported_; }

  // Grid equality; carve lineage is not compared.
  bool same_cells(const Layout& other) const noexcept { return cells_ == other.cells_; }

 private:
  friend Layout derive_pick_faces(const Layout& layout);

  Layout() = default;

  void recount() {
    n_storage_ = n_pick_faces_ = n_aisles_ = 0;
    for (CellKind k : cells_) {
      n_storage_ += is_storage(k);
      n_pick_faces_ += k == CellKind::PickFace;
      n_aisles_ += k == CellKind::Aisle;
    }
  }

  void relabel_pick_faces() {
    const int h = height();
    const int w = width();
    n_pick_faces_ = 0;
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        CellKind& k = cells_[static_cast<std::size_t>(r) * w + c];
        if (!is_storage(k)) continue;
        bool faces_aisle = false;
        for (const Coord& d : kNeighbours) {
          const Coord n{r + d.row, c + d.col};
          if (spec_->in_bounds(n) && at(n) == CellKind::Aisle) {
            faces_aisle = true;
            break;
          }
        }
        k = faces_aisle ? CellKind::PickFace : CellKind::Storage;
        n_pick_faces_ += faces_aisle;
      }
    }
  }

  SpacePtr spec_;
  std::vector<CellKind> cells_;
  std::vector<CarveAction> history_;
  int n_storage_ = 0;
  int n_pick_faces_ = 0;
  int n_aisles_ = 0;
  bool imported_ = false;
};

// Relabels every storage cell: PickFace iff it has a 4-neighbour Aisle.
inline Layout derive_pick_faces(const Layout& layout) {
  Layout out = layout;
  out.relabel_pick_faces();
  return out;
}

// L_full: every open cell is storage.
inline Layout initial_layout(const SpacePtr& spec) {
  if (!spec) throw Error(ErrorCode::InvariantViolation, "null space");
  if (spec->total_open_area() == 0) {
    throw Error(ErrorCode::DegenerateSpace, "space has no open cells");
  }
  std::vector<CellKind> cells(static_cast<std::size_t>(spec->cell_count()));
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = spec->fixed_kind(spec->coord(i));
  return Layout::from_cells(spec, std::move(cells));
}

// FNV-1a over dimensions and cell kinds. History does not participate.
inline std::uint64_t canonical_hash(const Layout& layout) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::uint64_t byte) {
    h ^= byte;
    h *= 1099511628211ull;
  };
  for (int v : {layout.width(), layout.height()}) {
    for (int shift = 0; shift < 32; shift += 8) mix((static_cast<std::uint32_t>(v) >> shift) & 0xffu);
  }
  for (CellKind k : layout.cells()) mix(static_cast<std::uint64_t>(k));
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

// Block stores together with the per-cell component label (-1 for cells not
// in any store). The label grid lets carving test membership in O(1).
struct BlockStoreMap {
  std::vector<BlockStore> stores;
  std::vector<int> label;
};

namespace detail {

struct LaneScan {
  int accessible_lo = 0;  // lanes with an aisle before their first cell (N or W)
  int accessible_hi = 0;  // lanes with an aisle after their last cell (S or E)
  std::vector<int> depths;
};

// Walks lanes of one store. With by_column, lanes are columns and the access
// faces are N (lo) and S (hi); otherwise lanes are rows with faces W and E.
// A lane may be split into several runs in ragged stores; each run's depth is
// measured from its nearest aisle end, and the lane depth is the deepest run.
inline LaneScan scan_lanes(const Layout& layout, const std::vector<int>& label, int id,
                           const BoundingBox& box, bool by_column) {
  LaneScan scan;
  const SpaceSpec& spec = layout.spec();
  const int lanes_from = by_column ? box.min_col : box.min_row;
  const int lanes_to = by_column ? box.max_col : box.max_row;
  const int along_from = by_column ? box.min_row : box.min_col;
  const int along_to = by_column ? box.max_row : box.max_col;
  auto at = [&](int lane, int pos) { return by_column ? Coord{pos, lane} : Coord{lane, pos}; };
  auto is_aisle = [&](Coord c) { return spec.in_bounds(c) && layout.at(c) == CellKind::Aisle; };

  for (int lane = lanes_from; lane <= lanes_to; ++lane) {
    bool any = false;
    bool lo_access = false;
    bool hi_access = false;
    int depth = 0;
    int pos = along_from;
    while (pos <= along_to) {
      if (label[spec.index(at(lane, pos))] != id) {
        ++pos;
        continue;
      }
      const int start = pos;
      while (pos <= along_to && label[spec.index(at(lane, pos))] == id) ++pos;
      const int end = pos - 1;
      const int len = end - start + 1;
      const bool lo = is_aisle(at(lane, start - 1));
      const bool hi = is_aisle(at(lane, end + 1));
      lo_access |= lo;
      hi_access |= hi;
      depth = std::max(depth, lo && hi ? (len + 1) / 2 : len);
      any = true;
    }
    if (!any) continue;
    scan.accessible_lo += lo_access;
    scan.accessible_hi += hi_access;
    scan.depths.push_back(depth);
  }
  return scan;
}

inline void annotate(const Layout& layout, const std::vector<int>& label, int id, BlockStore& store) {
  const BoundingBox& box = store.bbox;
  if (box.cols() > box.rows()) {
    store.orientation = Orientation::Horizontal;
  } else if (box.rows() > box.cols()) {
    store.orientation = Orientation::Vertical;
  } else {
    store.orientation = Orientation::Square;
  }

  LaneScan columns = scan_lanes(layout, label, id, box, true);
  LaneScan rows = scan_lanes(layout, label, id, box, false);
  store.access_sides = static_cast<std::uint8_t>(
      (columns.accessible_lo ? side::N : 0) | (columns.accessible_hi ? side::S : 0) |
      (rows.accessible_lo ? side::W : 0) | (rows.accessible_hi ? side::E : 0));

  if (store.access_sides == 0) {
    store.omega = std::max(box.rows(), box.cols());
    store.lane_depths.assign(static_cast<std::size_t>(store.omega), std::min(box.rows(), box.cols()));
    return;
  }
  const int column_face = std::max(columns.accessible_lo, columns.accessible_hi);
  const int row_face = std::max(rows.accessible_lo, rows.accessible_hi);
  if (column_face >= row_face) {
    store.omega = column_face;
    store.lane_depths = std::move(columns.depths);
  } else {
    store.omega = row_face;
    store.lane_depths = std::move(rows.depths);
  }
}

}  // namespace detail

// Maximal 4-connected groups of storage cells, ordered by their first cell in
// row-major order.
inline BlockStoreMap map_block_stores(const Layout& layout) {
  const SpaceSpec& spec = layout.spec();
  BlockStoreMap map;
  map.label.assign(static_cast<std::size_t>(spec.cell_count()), -1);
  std::vector<Coord> stack;
  for (int r = 0; r < spec.height(); ++r) {
    for (int c = 0; c < spec.width(); ++c) {
      const Coord seed{r, c};
      if (!is_storage(layout.at(seed)) || map.label[spec.index(seed)] != -1) continue;
      const int id = static_cast<int>(map.stores.size());
      BlockStore store;
      store.bbox = {r, c, r, c};
      map.label[spec.index(seed)] = id;
      stack.push_back(seed);
      while (!stack.empty()) {
        const Coord p = stack.back();
        stack.pop_back();
        store.cells.push_back(p);
        store.bbox.min_row = std::min(store.bbox.min_row, p.row);
        store.bbox.max_row = std::max(store.bbox.max_row, p.row);
        store.bbox.min_col = std::min(store.bbox.min_col, p.col);
        store.bbox.max_col = std::max(store.bbox.max_col, p.col);
        for (const Coord& d : kNeighbours) {
          const Coord n{p.row + d.row, p.col + d.col};
          if (!spec.in_bounds(n) || !is_storage(layout.at(n))) continue;
          int& slot = map.label[spec.index(n)];
          if (slot != -1) continue;
          slot = id;
          stack.push_back(n);
        }
      }
      std::sort(store.cells.begin(), store.cells.end());
      map.stores.push_back(std::move(store));
    }
  }
  for (std::size_t i = 0; i < map.stores.size(); ++i) {
    detail::annotate(layout, map.label, static_cast<int>(i), map.stores[i]);
  }
  return map;
}

inline std::vector<BlockStore> extract_block_stores(const Layout& layout) {
  return map_block_stores(layout).stores;
}

// Number of valid offsets for a strip across `store` in `orientation`.
inline int carve_positions(const BlockStore& store, Orientation orientation, int aisle_width) {
  const int extent = orientation == Orientation::Horizontal ? store.bbox.rows() : store.bbox.cols();
  return std::max(0, extent - aisle_width + 1);
}

namespace detail {

inline Layout carve_mapped(const Layout& layout, const BlockStoreMap& map, const CarveAction& action) {
  if (action.block_store_id < 0 || action.block_store_id >= static_cast<int>(map.stores.size())) {
    throw Error(ErrorCode::UnknownBlockStore,
                "block store " + std::to_string(action.block_store_id) + " does not exist");
  }
  if (action.orientation == Orientation::Square) {
    throw Error(ErrorCode::InvariantViolation, "carve orientation must be Horizontal or Vertical");
  }
  const SpaceSpec& spec = layout.spec();
  const BlockStore& store = map.stores[static_cast<std::size_t>(action.block_store_id)];
  const int aisle = spec.aisle_width();
  if (action.offset < 0 || action.offset >= carve_positions(store, action.orientation, aisle)) {
    throw Error(ErrorCode::OffsetOutOfRange,
                "offset " + std::to_string(action.offset) + " outside block store " +
                    std::to_string(action.block_store_id));
  }

  const BoundingBox& box = store.bbox;
  const bool horizontal = action.orientation == Orientation::Horizontal;
  const int r0 = horizontal ? box.min_row + action.offset : box.min_row;
  const int r1 = horizontal ? r0 + aisle - 1 : box.max_row;
  const int c0 = horizontal ? box.min_col : box.min_col + action.offset;
  const int c1 = horizontal ? box.max_col : c0 + aisle - 1;

  std::vector<CellKind> cells(layout.cells().begin(), layout.cells().end());
  int carved = 0;
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      const std::size_t i = spec.index({r, c});
      if (map.label[i] != action.block_store_id) continue;
      cells[i] = CellKind::Aisle;
      ++carved;
    }
  }
  if (carved == 0) {
    throw Error(ErrorCode::StripNotContainedInBlockStore, "strip contains no cell of the block store");
  }
  std::vector<CarveAction> history = layout.carve_history();
  history.push_back(action);
  return Layout::from_cells(layout.spec_ptr(), std::move(cells), std::move(history), layout.imported());
}

}  // namespace detail

// Turns a full-span strip of the named block store into aisle. Cells inside
// the strip that are not part of the store (pillars, other stores) are left
// untouched.
inline Layout carve(const Layout& layout, const CarveAction& action) {
  return detail::carve_mapped(layout, map_block_stores(layout), action);
}

inline Layout replay(const SpacePtr& spec, std::span<const CarveAction> history) {
  Layout layout = initial_layout(spec);
  for (const CarveAction& action : history) layout = carve(layout, action);
  return layout;
}

// All unique children: block stores in order, horizontal strips before
// vertical, offsets ascending. Grids reached by more than one action keep the
// first action.
inline std::vector<Layout> enumerate_children(const Layout& layout) {
  const BlockStoreMap map = map_block_stores(layout);
  std::vector<Layout> children;
  std::unordered_set<std::uint64_t> seen;
  const int aisle = layout.spec().aisle_width();
  for (std::size_t id = 0; id < map.stores.size(); ++id) {
    for (Orientation o : {Orientation::Horizontal, Orientation::Vertical}) {
      const int positions = carve_positions(map.stores[id], o, aisle);
      for (int offset = 0; offset < positions; ++offset) {
        Layout child = detail::carve_mapped(layout, map, {static_cast<int>(id), o, offset});
        if (seen.insert(canonical_hash(child)).second) children.push_back(std::move(child));
      }
    }
  }
  return children;
}

}  // namespace wlayout
