#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "rbfc/geometry.hpp"
#include "test_util.hpp"

using rbfc::BcTag;
using rbfc::Layout;
using rbfc::NodeSet;
using rbfc::Point2;
namespace test = rbfc::test;

namespace {

// Independent oracle: full sort by (squared distance, id).
std::vector<std::size_t> brute_knn(const std::vector<Point2>& pts,
                                   const Point2& q, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t i = 0; i < pts.size(); ++i)
    d.emplace_back(rbfc::dist_sq(q, pts[i]), i);
  std::sort(d.begin(), d.end());
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < k; ++i) ids.push_back(d[i].second);
  return ids;
}

void audit(const NodeSet& ns) {
  for (std::size_t i = 0; i < ns.n(); ++i) {
    if (i < ns.boundary_count()) {
      REQUIRE(rbfc::on_unit_square_boundary(ns.point(i)));
      REQUIRE(ns.tag(i) != BcTag::None);
    } else {
      REQUIRE(!rbfc::on_unit_square_boundary(ns.point(i)));
      REQUIRE(ns.tag(i) == BcTag::None);
    }
  }
}

}  // namespace

TEST_CASE("3x3 grid: 8 boundary nodes around one interior node") {
  auto ns = rbfc::generate_nodes(9, Layout::Grid);
  REQUIRE(ns.n() == 9);
  REQUIRE(ns.boundary_count() == 8);
  REQUIRE(ns.point(8).x == 0.5);
  REQUIRE(ns.point(8).y == 0.5);
  REQUIRE(ns.is_center(8));
  audit(ns);
}

TEST_CASE("halton 622 set satisfies every invariant") {
  auto ns = rbfc::generate_nodes(622, Layout::Halton);
  REQUIRE(ns.n() == 622);
  // n_b ~ perimeter / spacing with spacing ~ 1/sqrt(interior count).
  double spacing = 1.0 / std::sqrt(static_cast<double>(ns.interior_count()));
  double expect_nb = 4.0 / spacing;
  REQUIRE(std::fabs(static_cast<double>(ns.boundary_count()) - expect_nb) <
          0.2 * expect_nb);
  audit(ns);
  // Corners present exactly once.
  for (Point2 c : {Point2{0, 0}, Point2{1, 0}, Point2{1, 1}, Point2{0, 1}}) {
    int hits = 0;
    for (std::size_t i = 0; i < ns.boundary_count(); ++i)
      if (ns.point(i).x == c.x && ns.point(i).y == c.y) ++hits;
    REQUIRE(hits == 1);
  }
  // Alternating tags: both kinds present, counts differ by at most 1.
  long d = 0, e = 0;
  for (std::size_t i = 0; i < ns.boundary_count(); ++i)
    (ns.tag(i) == BcTag::Dirichlet ? d : e) += 1;
  REQUIRE(d > 0);
  REQUIRE(e > 0);
  REQUIRE(std::labs(d - e) <= 1);
  // All interior nodes are centers by default.
  REQUIRE(ns.center_count() == ns.interior_count());
}

TEST_CASE("generation is deterministic for a fixed seed") {
  auto a = rbfc::generate_nodes(300, Layout::Halton, {.seed = 7});
  auto b = rbfc::generate_nodes(300, Layout::Halton, {.seed = 7});
  auto c = rbfc::generate_nodes(300, Layout::Halton, {.seed = 8});
  REQUIRE(a.n() == b.n());
  bool identical = true, differs = false;
  for (std::size_t i = 0; i < a.n(); ++i) {
    identical = identical && a.point(i).x == b.point(i).x &&
                a.point(i).y == b.point(i).y;
    differs = differs || a.point(i).x != c.point(i).x;
  }
  REQUIRE(identical);
  REQUIRE(differs);
}

TEST_CASE("duplicate points are dropped when deduplication is requested") {
  std::vector<Point2> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1},
                          {0.5, 0.5}, {0.5, 0.5}, {0.25, 0.75}};
  std::vector<BcTag> tags{BcTag::Dirichlet, BcTag::Dirichlet, BcTag::Dirichlet,
                          BcTag::Dirichlet, BcTag::None, BcTag::None,
                          BcTag::None};
  std::vector<bool> centers{false, false, false, false, true, true, true};
  auto ns = NodeSet::create(pts, 4, tags, centers, /*dedupe=*/true);
  REQUIRE(ns.n() == 6);
  // Strict mode rejects the same input.
  REQUIRE_THROWS_AS(NodeSet::create(pts, 4, tags, centers),
                    rbfc::InvalidLayout);
}

TEST_CASE("stencil of size 1 is just the center") {
  auto ns = rbfc::generate_nodes(25, Layout::Grid);
  std::size_t center = ns.center_ids()[0];
  auto st = rbfc::build_stencil(ns, center, 1);
  REQUIRE(st.member_ids == std::vector<std::size_t>{center});
  REQUIRE(st.n_center == 1);
  REQUIRE(st.n_b1 + st.n_b2 + st.n_interior == 0);
}

TEST_CASE("5-point stencil on a uniform grid picks the axis neighbours") {
  auto ns = rbfc::generate_nodes(25, Layout::Grid);  // 5x5, h = 0.25
  std::size_t center = 0;
  for (std::size_t i = ns.boundary_count(); i < ns.n(); ++i)
    if (ns.point(i).x == 0.5 && ns.point(i).y == 0.5) center = i;
  auto st = rbfc::build_stencil(ns, center, 5);
  REQUIRE(st.member_ids[0] == center);
  REQUIRE(st.size() == 5);
  for (std::size_t id : st.member_ids) {
    double d2 = rbfc::dist_sq(ns.point(id), {0.5, 0.5});
    REQUIRE((d2 == 0.0 || d2 == Catch::Approx(0.0625)));  // h^2
  }
}

TEST_CASE("stencil block ordering and counts on the 622 set") {
  auto ns = rbfc::generate_nodes(622, Layout::Halton);
  rbfc::SpatialGrid grid(ns.points());
  // A center near the corner so the stencil catches boundary nodes.
  std::size_t center = grid.k_nearest({0.05, 0.05}, 1)[0];
  if (!ns.is_center(center)) center = ns.center_ids()[0];
  auto st = rbfc::build_stencil(ns, grid, center, 50);
  REQUIRE(st.size() == 50);
  REQUIRE(st.n_center + st.n_b1 + st.n_b2 + st.n_interior == 50);
  REQUIRE(st.member_ids[0] == center);
  REQUIRE(st.n_b1 > 0);  // corner stencil must see the wall
  // Blocks in order: centers, Dirichlet, OperatorE, non-center interior.
  std::size_t i = 0;
  for (; i < st.n_center; ++i) REQUIRE(ns.is_center(st.member_ids[i]));
  for (; i < st.n_center + st.n_b1; ++i)
    REQUIRE(ns.tag(st.member_ids[i]) == BcTag::Dirichlet);
  for (; i < st.n_center + st.n_b1 + st.n_b2; ++i)
    REQUIRE(ns.tag(st.member_ids[i]) == BcTag::OperatorE);
  for (; i < st.size(); ++i) {
    REQUIRE(!ns.is_boundary(st.member_ids[i]));
    REQUIRE(!ns.is_center(st.member_ids[i]));
  }
  // Same member set as the brute-force oracle.
  auto expect = brute_knn(ns.points(), ns.point(center), 50);
  std::set<std::size_t> got(st.member_ids.begin(), st.member_ids.end());
  REQUIRE(got == std::set<std::size_t>(expect.begin(), expect.end()));
}

TEST_CASE("grid k-nearest equals brute force for 100 random queries") {
  auto ns = rbfc::generate_nodes(500, Layout::Halton, {.seed = 3});
  rbfc::SpatialGrid grid(ns.points());
  auto rng = test::make_rng(11);
  for (int t = 0; t < 100; ++t) {
    Point2 q{test::uniform(rng, 0, 1), test::uniform(rng, 0, 1)};
    std::size_t k = 1 + static_cast<std::size_t>(t % 60);
    REQUIRE(grid.k_nearest(q, k) == brute_knn(ns.points(), q, k));
  }
}

TEST_CASE("stencil size bounds are enforced") {
  auto ns = rbfc::generate_nodes(9, Layout::Grid);
  REQUIRE_THROWS_AS(rbfc::build_stencil(ns, 8, 10), rbfc::TooFewNodes);
  REQUIRE_THROWS_AS(rbfc::build_stencil(ns, 8, 0), rbfc::TooFewNodes);
}

TEST_CASE("fill distance of known configurations") {
  // Single interior node: farthest probe point is a corner.
  auto one = NodeSet::create({{0.5, 0.5}}, 0, {BcTag::None}, {true});
  REQUIRE(rbfc::fill_distance(one) ==
          Catch::Approx(std::sqrt(0.5)).margin(0.01));

  auto grid9 = rbfc::generate_nodes(9, Layout::Grid);
  REQUIRE(rbfc::fill_distance(grid9) ==
          Catch::Approx(std::sqrt(2.0) / 4.0).margin(0.01));

  auto h622 = rbfc::generate_nodes(622, Layout::Halton);
  auto h1244 = rbfc::generate_nodes(1244, Layout::Halton);
  REQUIRE(rbfc::fill_distance(h622) > 0.0);
  REQUIRE(rbfc::fill_distance(h1244) < rbfc::fill_distance(h622));
}

TEST_CASE("node CSV round-trips") {
  auto ns = rbfc::generate_nodes(80, Layout::Halton, {.seed = 2});
  std::stringstream ss;
  rbfc::write_nodes_csv(ns, ss);
  auto back = rbfc::read_nodes_csv(ss);
  REQUIRE(back.n() == ns.n());
  REQUIRE(back.boundary_count() == ns.boundary_count());
  for (std::size_t i = 0; i < ns.n(); ++i) {
    REQUIRE(back.point(i).x == ns.point(i).x);
    REQUIRE(back.point(i).y == ns.point(i).y);
    REQUIRE(back.tag(i) == ns.tag(i));
    REQUIRE(back.is_center(i) == ns.is_center(i));
  }
}

TEST_CASE("center stride keeps a subset of interior nodes") {
  auto ns = rbfc::generate_nodes(100, Layout::Halton, {.center_stride = 3});
  REQUIRE(ns.center_count() == (ns.interior_count() + 2) / 3);
  for (std::size_t id : ns.center_ids()) REQUIRE(!ns.is_boundary(id));
}
