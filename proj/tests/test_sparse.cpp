#include <catch2/catch_amalgamated.hpp>

#include "rbfc/sparse.hpp"
#include "test_util.hpp"

using rbfc::DDouble;
using rbfc::SparseMatrix;
using rbfc::Vector;
namespace test = rbfc::test;

namespace {

SparseMatrix<double> sparse_identity(std::size_t n, double scale = 1.0) {
  SparseMatrix<double> s(n, n);
  for (std::size_t i = 0; i < n; ++i) s.append_row(i, {{i, scale}});
  return s;
}

// Random sparse, strictly diagonally dominant, deterministic.
SparseMatrix<double> random_dominant(std::size_t n, std::mt19937_64& rng) {
  SparseMatrix<double> s(n, n);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::map<std::size_t, double> row;
    double off = 0.0;
    for (int k = 0; k < 6; ++k) {
      std::size_t j = pick(rng);
      if (j == i) continue;
      double v = test::uniform(rng);
      off += std::fabs(v);
      row[j] += v;
    }
    row[i] = off + 1.0 + std::fabs(test::uniform(rng));
    std::vector<std::pair<std::size_t, double>> entries(row.begin(), row.end());
    s.append_row(i, entries);
  }
  return s;
}

}  // namespace

TEST_CASE("identity system returns rhs") {
  auto s = sparse_identity(7);
  Vector<double> b{1, 2, 3, 4, 5, 6, 7};
  REQUIRE(rbfc::sparse_solve(s, b) == b);
}

TEST_CASE("scaled identity") {
  auto s = sparse_identity(5, 2.0);
  Vector<double> b(5, 2.0);
  auto x = rbfc::sparse_solve(s, b);
  for (double v : x) REQUIRE(v == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("manufactured solution on random dominant 500x500") {
  auto rng = test::make_rng(99);
  auto s = random_dominant(500, rng);
  Vector<double> x_true(500);
  for (auto& v : x_true) v = test::uniform(rng);
  Vector<double> b = s * x_true;
  auto x = rbfc::sparse_solve(s, b);
  double err = 0.0;
  for (std::size_t i = 0; i < 500; ++i)
    err = std::max(err, std::fabs(x[i] - x_true[i]));
  REQUIRE(err <= 1e-10);
}

TEST_CASE("strictly increasing column indices enforced") {
  SparseMatrix<double> s(2, 2);
  REQUIRE_THROWS_AS(s.append_row(0, {{1, 1.0}, {1, 2.0}}),
                    rbfc::InconsistentLayout);
}

TEST_CASE("sparse and dense solves agree on a 300x300 system") {
  auto rng = test::make_rng(41);
  auto s = random_dominant(300, rng);
  Vector<double> b(300);
  for (auto& v : b) v = test::uniform(rng);
  auto xs = rbfc::sparse_solve(s, b);
  auto xd = rbfc::lu_solve(rbfc::lu_factor(s.to_dense()), b);
  double rel = 0.0;
  double scale = rbfc::norm_inf(xd);
  for (std::size_t i = 0; i < 300; ++i)
    rel = std::max(rel, std::fabs(xs[i] - xd[i]) / scale);
  REQUIRE(rel <= 1e-10);
}

TEST_CASE("extended precision path reaches tight residuals") {
  auto rng = test::make_rng(3);
  auto sd = random_dominant(120, rng);
  SparseMatrix<DDouble> s(120, 120);
  for (std::size_t i = 0; i < 120; ++i) {
    std::vector<std::pair<std::size_t, DDouble>> row;
    for (std::size_t k = sd.row_begin(i); k < sd.row_end(i); ++k)
      row.emplace_back(sd.col(k), DDouble(sd.value(k)));
    s.append_row(i, row);
  }
  Vector<DDouble> b(120);
  for (auto& v : b) v = DDouble(test::uniform(rng));
  rbfc::SparseSolveOptions opts;
  opts.tol = 1e-25;
  auto x = rbfc::sparse_solve(s, b, opts);
  auto r = s * x;
  for (std::size_t i = 0; i < 120; ++i) r[i] = b[i] - r[i];
  REQUIRE(rbfc::to_double(rbfc::norm_2(r) / rbfc::norm_2(b)) <= 1e-25);
}

TEST_CASE("zero rhs short-circuits to zero") {
  auto s = sparse_identity(4);
  auto x = rbfc::sparse_solve(s, Vector<double>(4, 0.0));
  for (double v : x) REQUIRE(v == 0.0);
}
