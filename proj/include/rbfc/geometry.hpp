#pragma once

// Node sets on the unit square: generation (Halton or tensor grid),
// boundary tagging, k-nearest stencils with the block ordering the local
// solvers rely on, fill distance, and CSV import/export.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "rbfc/errors.hpp"

namespace rbfc {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double dist_sq(const Point2& a, const Point2& b) {
  double dx = a.x - b.x;
  double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

enum class BcTag : char { Dirichlet = 'D', OperatorE = 'E', None = '-' };

inline bool on_unit_square_boundary(const Point2& p) {
  return p.x == 0.0 || p.x == 1.0 || p.y == 0.0 || p.y == 1.0;
}

class NodeSet {
 public:
  // Validating constructor; `dedupe` drops exact repeats instead of
  // rejecting them.
  static NodeSet create(std::vector<Point2> pts, std::size_t n_boundary,
                        std::vector<BcTag> tags, std::vector<bool> centers,
                        bool dedupe = false) {
    if (dedupe) {
      std::vector<Point2> fp;
      std::vector<BcTag> ft;
      std::vector<bool> fc;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        bool seen = false;
        for (std::size_t j = 0; j < fp.size() && !seen; ++j)
          seen = fp[j].x == pts[i].x && fp[j].y == pts[i].y;
        if (seen) {
          if (i < n_boundary) --n_boundary;
          continue;
        }
        fp.push_back(pts[i]);
        ft.push_back(tags[i]);
        fc.push_back(centers[i]);
      }
      pts = std::move(fp);
      tags = std::move(ft);
      centers = std::move(fc);
    }
    NodeSet ns;
    ns.pts_ = std::move(pts);
    ns.n_boundary_ = n_boundary;
    ns.tags_ = std::move(tags);
    ns.centers_ = std::move(centers);
    ns.validate();
    ns.index_centers();
    return ns;
  }

  std::size_t n() const { return pts_.size(); }
  std::size_t boundary_count() const { return n_boundary_; }
  std::size_t interior_count() const { return n() - n_boundary_; }
  const Point2& point(std::size_t i) const { return pts_[i]; }
  const std::vector<Point2>& points() const { return pts_; }
  BcTag tag(std::size_t i) const { return tags_[i]; }
  bool is_boundary(std::size_t i) const { return i < n_boundary_; }
  bool is_center(std::size_t i) const { return centers_[i]; }

  // Global node id -> ordinal in the center list (-1 if not a center).
  long center_ordinal(std::size_t i) const { return center_ordinal_[i]; }
  const std::vector<std::size_t>& center_ids() const { return center_ids_; }
  std::size_t center_count() const { return center_ids_.size(); }

 private:
  void validate() const {
    const std::size_t total = pts_.size();
    if (total == 0) throw InvalidLayout("empty node set");
    if (n_boundary_ > total) throw InvalidLayout("boundary count exceeds n");
    if (tags_.size() != total || centers_.size() != total)
      throw InvalidLayout("tag/center arrays must match node count");
    for (std::size_t i = 0; i < total; ++i) {
      const Point2& p = pts_[i];
      if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0))
        throw InvalidLayout("node outside unit square");
      if (i < n_boundary_) {
        if (!on_unit_square_boundary(p))
          throw InvalidLayout("boundary-block node not on the boundary");
        if (tags_[i] == BcTag::None)
          throw InvalidLayout("boundary node lacks a condition tag");
        if (centers_[i]) throw InvalidLayout("boundary node flagged as center");
      } else {
        if (on_unit_square_boundary(p))
          throw InvalidLayout("interior-block node lies on the boundary");
        if (tags_[i] != BcTag::None)
          throw InvalidLayout("interior node carries a boundary tag");
      }
    }
    // Exact-duplicate scan via lexicographic sort.
    std::vector<std::size_t> order(total);
    for (std::size_t i = 0; i < total; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pts_[a].x < pts_[b].x ||
             (pts_[a].x == pts_[b].x && pts_[a].y < pts_[b].y);
    });
    for (std::size_t i = 1; i < total; ++i) {
      const Point2& a = pts_[order[i - 1]];
      const Point2& b = pts_[order[i]];
      if (a.x == b.x && a.y == b.y) throw InvalidLayout("duplicate node");
    }
  }

  void index_centers() {
    center_ordinal_.assign(pts_.size(), -1);
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (centers_[i]) {
        center_ordinal_[i] = static_cast<long>(center_ids_.size());
        center_ids_.push_back(i);
      }
    }
  }

  std::vector<Point2> pts_;
  std::size_t n_boundary_ = 0;
  std::vector<BcTag> tags_;
  std::vector<bool> centers_;
  std::vector<std::size_t> center_ids_;
  std::vector<long> center_ordinal_;
};

// Uniform bucket grid over [0,1]^2 for nearest-neighbour queries.
class SpatialGrid {
 public:
  explicit SpatialGrid(const std::vector<Point2>& pts) : pts_(pts) {
    std::size_t n = std::max<std::size_t>(pts.size(), 1);
    m_ = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::sqrt(static_cast<double>(n) / 2.0)), 1,
        512);
    cell_ = 1.0 / static_cast<double>(m_);
    buckets_.resize(m_ * m_);
    for (std::size_t i = 0; i < pts.size(); ++i)
      buckets_[cell_of(pts[i])].push_back(i);
  }

  // k nearest node ids, sorted by (squared distance, id).
  std::vector<std::size_t> k_nearest(const Point2& q, std::size_t k) const {
    using Cand = std::pair<double, std::size_t>;
    std::priority_queue<Cand> heap;  // max-heap: worst candidate on top
    const long cq = static_cast<long>(std::min(q.x / cell_, double(m_ - 1)));
    const long rq = static_cast<long>(std::min(q.y / cell_, double(m_ - 1)));
    const long rings = static_cast<long>(m_);
    for (long r = 0; r <= rings; ++r) {
      // A point in ring r can sit as close as (r-1)*cell from q, so the
      // search may stop only once the kth candidate beats that bound.
      if (heap.size() == k && r >= 1) {
        double reach = static_cast<double>(r - 1) * cell_;
        if (heap.top().first <= reach * reach) break;
      }
      bool any = false;
      for (long dx = -r; dx <= r; ++dx) {
        for (long dy = -r; dy <= r; ++dy) {
          if (std::max(std::labs(dx), std::labs(dy)) != r) continue;
          long cx = cq + dx, cy = rq + dy;
          if (cx < 0 || cy < 0 || cx >= static_cast<long>(m_) ||
              cy >= static_cast<long>(m_))
            continue;
          any = true;
          for (std::size_t id : buckets_[cy * m_ + cx]) {
            Cand c{dist_sq(q, pts_[id]), id};
            if (heap.size() < k) {
              heap.push(c);
            } else if (c < heap.top()) {
              heap.pop();
              heap.push(c);
            }
          }
        }
      }
      if (!any && r > 0) break;  // ring already fully outside the grid
    }
    std::vector<std::size_t> ids;
    std::vector<Cand> cands;
    while (!heap.empty()) {
      cands.push_back(heap.top());
      heap.pop();
    }
    std::sort(cands.begin(), cands.end());
    for (const Cand& c : cands) ids.push_back(c.second);
    return ids;
  }

  double nearest_distance(const Point2& q) const {
    auto ids = k_nearest(q, 1);
    return std::sqrt(dist_sq(q, pts_[ids[0]]));
  }

 private:
  std::size_t cell_of(const Point2& p) const {
    std::size_t cx = std::min(static_cast<std::size_t>(p.x / cell_), m_ - 1);
    std::size_t cy = std::min(static_cast<std::size_t>(p.y / cell_), m_ - 1);
    return cy * m_ + cx;
  }

  const std::vector<Point2>& pts_;
  std::size_t m_ = 1;
  double cell_ = 1.0;
  std::vector<std::vector<std::size_t>> buckets_;
};

enum class Layout { Halton, Grid };

struct NodeGenOptions {
  unsigned seed = 0;
  bool all_dirichlet = false;   // tag every boundary node Dirichlet
  double dirichlet_ratio = 0.5;  // share of Dirichlet tags when alternating
  std::size_t center_stride = 1;  // 1: every interior node is a center
};

namespace detail {

inline double halton(std::uint64_t index, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

inline std::vector<BcTag> perimeter_tags(std::size_t count,
                                         const NodeGenOptions& opt) {
  std::vector<BcTag> tags(count, BcTag::Dirichlet);
  if (opt.all_dirichlet) return tags;
  double acc = 0.5;  // half-phase so Dirichlet leads
  for (std::size_t i = 0; i < count; ++i) {
    acc += opt.dirichlet_ratio;
    if (acc >= 1.0) {
      acc -= 1.0;
      tags[i] = BcTag::Dirichlet;
    } else {
      tags[i] = BcTag::OperatorE;
    }
  }
  return tags;
}

}  // namespace detail

// Scattered (Halton interior) or tensor-grid nodes; boundary equispaced
// along the perimeter including the four corners.
inline NodeSet generate_nodes(std::size_t n_target, Layout layout,
                              const NodeGenOptions& opt = {}) {
  if (n_target < 9) throw InvalidLayout("need at least 9 nodes");

  std::vector<Point2> pts;
  std::size_t n_b = 0;

  if (layout == Layout::Grid) {
    std::size_t m = std::max<std::size_t>(
        3, static_cast<std::size_t>(
               std::llround(std::sqrt(static_cast<double>(n_target)))));
    const double h = 1.0 / static_cast<double>(m - 1);
    auto at = [&](std::size_t i) {
      return i == m - 1 ? 1.0 : static_cast<double>(i) * h;
    };
    for (std::size_t i = 0; i + 1 < m; ++i) pts.push_back({at(i), 0.0});
    for (std::size_t j = 0; j + 1 < m; ++j) pts.push_back({1.0, at(j)});
    for (std::size_t i = m - 1; i > 0; --i) pts.push_back({at(i), 1.0});
    for (std::size_t j = m - 1; j > 0; --j) pts.push_back({0.0, at(j)});
    n_b = pts.size();
    for (std::size_t j = 1; j + 1 < m; ++j)
      for (std::size_t i = 1; i + 1 < m; ++i) pts.push_back({at(i), at(j)});
  } else {
    // Boundary spacing balanced against interior density: n_b = 4k with
    // k chosen so 4/k ~ 1/sqrt(n - n_b).
    std::size_t k = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::llround(
               (-8.0 + 4.0 * std::sqrt(4.0 + static_cast<double>(n_target))) /
               4.0)));
    n_b = 4 * k;
    if (n_b + 1 > n_target) throw InvalidLayout("too few nodes for boundary ring");
    const double h = 1.0 / static_cast<double>(k);
    auto at = [&](std::size_t i) {
      return i == k ? 1.0 : static_cast<double>(i) * h;
    };
    for (std::size_t i = 0; i < k; ++i) pts.push_back({at(i), 0.0});
    for (std::size_t j = 0; j < k; ++j) pts.push_back({1.0, at(j)});
    for (std::size_t i = k; i > 0; --i) pts.push_back({at(i), 1.0});
    for (std::size_t j = k; j > 0; --j) pts.push_back({0.0, at(j)});

    const double margin = 0.5 * h;  // reject interior points hugging the wall
    std::uint64_t idx = 1 + opt.seed;
    while (pts.size() < n_target) {
      Point2 p{detail::halton(idx, 2), detail::halton(idx, 3)};
      ++idx;
      if (p.x < margin || p.x > 1.0 - margin || p.y < margin ||
          p.y > 1.0 - margin)
        continue;
      pts.push_back(p);
    }
  }

  std::vector<BcTag> tags = detail::perimeter_tags(n_b, opt);
  tags.resize(pts.size(), BcTag::None);
  std::vector<bool> centers(pts.size(), false);
  std::size_t interior_ord = 0;
  for (std::size_t i = n_b; i < pts.size(); ++i, ++interior_ord)
    centers[i] = interior_ord % opt.center_stride == 0;

  return NodeSet::create(std::move(pts), n_b, std::move(tags),
                         std::move(centers));
}

// One stencil: the center plus its nearest neighbours, reordered into the
// block layout [centers | Dirichlet | OperatorE | plain interior].
struct Stencil {
  std::size_t center_index = 0;
  std::vector<std::size_t> member_ids;
  std::size_t n_center = 0;
  std::size_t n_b1 = 0;      // Dirichlet-tagged boundary members
  std::size_t n_b2 = 0;      // OperatorE-tagged boundary members
  std::size_t n_interior = 0;  // non-center interior members
  std::size_t size() const { return member_ids.size(); }
};

// Boundary-tag source for stencil block assignment: the node set's own
// tags for the state pass, all-Dirichlet for the control pass.
enum class StencilTagging { FromNodeSet, AllDirichlet };

inline Stencil build_stencil(const NodeSet& nodes, const SpatialGrid& grid,
                             std::size_t center, std::size_t n_local,
                             StencilTagging tagging = StencilTagging::FromNodeSet) {
  if (n_local < 1 || n_local > nodes.n())
    throw TooFewNodes("stencil size outside [1, n]");
  if (!nodes.is_center(center))
    throw InvalidLayout("stencil center must be a flagged center");

  std::vector<std::size_t> ids = grid.k_nearest(nodes.point(center), n_local);

  auto klass = [&](std::size_t id) -> int {
    if (id == center) return 0;
    if (!nodes.is_boundary(id)) return nodes.is_center(id) ? 1 : 4;
    if (tagging == StencilTagging::AllDirichlet) return 2;
    return nodes.tag(id) == BcTag::Dirichlet ? 2 : 3;
  };
  std::stable_sort(ids.begin(), ids.end(),
                   [&](std::size_t a, std::size_t b) { return klass(a) < klass(b); });

  Stencil st;
  st.center_index = center;
  st.member_ids = std::move(ids);
  for (std::size_t id : st.member_ids) {
    switch (klass(id)) {
      case 0:
      case 1: ++st.n_center; break;
      case 2: ++st.n_b1; break;
      case 3: ++st.n_b2; break;
      default: ++st.n_interior; break;
    }
  }
  return st;
}

inline Stencil build_stencil(const NodeSet& nodes, std::size_t center,
                             std::size_t n_local,
                             StencilTagging tagging = StencilTagging::FromNodeSet) {
  SpatialGrid grid(nodes.points());
  return build_stencil(nodes, grid, center, n_local, tagging);
}

// Largest hole radius, probed on a dense uniform grid.
inline double fill_distance(const NodeSet& nodes, std::size_t probe = 200) {
  if (nodes.n() == 0) throw InvalidLayout("empty node set");
  SpatialGrid grid(nodes.points());
  double h = 0.0;
  for (std::size_t i = 0; i <= probe; ++i) {
    for (std::size_t j = 0; j <= probe; ++j) {
      Point2 q{static_cast<double>(i) / probe, static_cast<double>(j) / probe};
      h = std::max(h, grid.nearest_distance(q));
    }
  }
  return h;
}

inline void write_nodes_csv(const NodeSet& nodes, std::ostream& os) {
  os << "x,y,is_boundary,bc_tag,is_center\n";
  char buf[80];
  for (std::size_t i = 0; i < nodes.n(); ++i) {
    const Point2& p = nodes.point(i);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%c,%d\n", p.x, p.y,
                  nodes.is_boundary(i) ? 1 : 0, static_cast<char>(nodes.tag(i)),
                  nodes.is_center(i) ? 1 : 0);
    os << buf;
  }
}

inline NodeSet read_nodes_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,y,", 0) != 0)
    throw InvalidLayout("node CSV: missing header");
  std::vector<Point2> pts;
  std::vector<BcTag> tags;
  std::vector<bool> centers;
  std::size_t n_b = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    Point2 p;
    int isb = 0, isc = 0;
    char tag = '-';
    if (!(ss >> p.x >> p.y >> isb >> tag >> isc))
      throw InvalidLayout("node CSV: malformed row");
    if (isb) {
      if (pts.size() != n_b)
        throw InvalidLayout("node CSV: boundary rows must come first");
      ++n_b;
    }
    pts.push_back(p);
    tags.push_back(static_cast<BcTag>(tag));
    centers.push_back(isc != 0);
  }
  return NodeSet::create(std::move(pts), n_b, std::move(tags),
                         std::move(centers));
}

}  // namespace rbfc
