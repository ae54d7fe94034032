#include <catch2/catch_amalgamated.hpp>

#include "rbfc/lu.hpp"
#include "test_util.hpp"

using rbfc::DDouble;
using rbfc::DenseMatrix;
using rbfc::Vector;
namespace test = rbfc::test;

TEST_CASE("lu of identity is trivial") {
  auto id = DenseMatrix<double>::identity(3);
  auto f = rbfc::lu_factor(id);
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(f.perm[i] == i);
    for (std::size_t j = 0; j < 3; ++j)
      REQUIRE(f.lu(i, j) == (i == j ? 1.0 : 0.0));
  }
}

TEST_CASE("lu pivots an antidiagonal") {
  DenseMatrix<double> a(2, 2);
  a(0, 1) = 1.0;
  a(1, 0) = 1.0;
  auto f = rbfc::lu_factor(a);
  REQUIRE(f.perm[0] == 1);
  REQUIRE(f.perm[1] == 0);
  auto x = rbfc::lu_solve(f, Vector<double>{2.0, 3.0});
  REQUIRE(x[0] == Catch::Approx(3.0));
  REQUIRE(x[1] == Catch::Approx(2.0));
}

TEST_CASE("lu reports exact singularity") {
  DenseMatrix<double> a(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 2.0;
  a(1, 0) = 2.0;
  a(1, 1) = 4.0;
  REQUIRE_THROWS_AS(rbfc::lu_factor(a), rbfc::SingularMatrix);
}

TEST_CASE("random 20x20 reconstruction residual, double") {
  auto rng = test::make_rng(17);
  auto a = test::random_matrix<double>(20, rng);
  auto f = rbfc::lu_factor(a);
  REQUIRE(test::lu_reconstruction_residual(a, f) <= 1e-13);
}

TEST_CASE("reconstruction residual bound over 100 random matrices, both precisions") {
  auto rng = test::make_rng(23);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 4 + static_cast<std::size_t>(t % 13);
    auto ad = test::random_matrix<double>(n, rng);
    auto fd = rbfc::lu_factor(ad);
    REQUIRE(test::lu_reconstruction_residual(ad, fd) <=
            100 * rbfc::scalar_traits<double>::unit_roundoff());

    DenseMatrix<DDouble> ax(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) ax(i, j) = DDouble(ad(i, j));
    auto fx = rbfc::lu_factor(ax);
    REQUIRE(test::lu_reconstruction_residual(ax, fx) <=
            100 * rbfc::scalar_traits<DDouble>::unit_roundoff());
  }
}

TEST_CASE("lu_solve trivial cases") {
  auto f = rbfc::lu_factor(DenseMatrix<double>::identity(4));
  Vector<double> b{1, 2, 3, 4};
  REQUIRE(rbfc::lu_solve(f, b) == b);

  DenseMatrix<double> d(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 4.0;
  auto x = rbfc::lu_solve(rbfc::lu_factor(d), Vector<double>{2.0, 4.0});
  REQUIRE(x[0] == 1.0);
  REQUIRE(x[1] == 1.0);
}

TEST_CASE("hilbert 6x6 solve recovers ones within kappa*u") {
  auto h = test::hilbert<double>(6);
  Vector<double> ones(6, 1.0);
  Vector<double> b = h * ones;
  auto x = rbfc::lu_solve(rbfc::lu_factor(h), b);
  for (double xi : x) REQUIRE(xi == Catch::Approx(1.0).margin(1e-7));

  auto hx = test::hilbert<DDouble>(6);
  Vector<DDouble> onesx(6, DDouble(1.0));
  auto xx = rbfc::lu_solve(rbfc::lu_factor(hx), hx * onesx);
  for (const auto& xi : xx)
    REQUIRE(std::fabs(rbfc::to_double(xi - DDouble(1.0))) < 1e-20);
}

TEST_CASE("transposed solve matches solving the transposed matrix") {
  auto rng = test::make_rng(5);
  auto a = test::random_matrix<double>(12, rng);
  Vector<double> b(12);
  for (auto& v : b) v = test::uniform(rng);
  auto f = rbfc::lu_factor(a);
  auto x = rbfc::lu_solve_transposed(f, b);
  // Oracle: explicitly transpose and factor.
  DenseMatrix<double> at(12, 12);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) at(i, j) = a(j, i);
  auto y = rbfc::lu_solve(rbfc::lu_factor(at), b);
  for (std::size_t i = 0; i < 12; ++i)
    REQUIRE(x[i] == Catch::Approx(y[i]).margin(1e-12));
}

TEST_CASE("inverse basics and round-trip residual") {
  auto inv_id = rbfc::inverse(DenseMatrix<double>::identity(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      REQUIRE(inv_id(i, j) == (i == j ? 1.0 : 0.0));

  DenseMatrix<double> two(1, 1);
  two(0, 0) = 2.0;
  REQUIRE(rbfc::inverse(two)(0, 0) == 0.5);

  auto rng = test::make_rng(31);
  auto a = test::random_matrix<double>(10, rng);
  for (std::size_t i = 0; i < 10; ++i) a(i, i) += 10.0;  // well conditioned
  auto ainv = rbfc::inverse(a);
  auto prod = a * ainv;
  for (std::size_t i = 0; i < 10; ++i) prod(i, i) -= 1.0;
  REQUIRE(rbfc::to_double(rbfc::norm_1(prod)) <= 1e-12);
}

TEST_CASE("cond_1 exact values") {
  REQUIRE(rbfc::cond_1(DenseMatrix<double>::identity(5)).kappa == 1.0);

  DenseMatrix<double> d(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-6;
  auto c = rbfc::cond_1(d);
  REQUIRE(!c.estimated);
  REQUIRE(c.kappa == Catch::Approx(1e6).epsilon(1e-12));
}

TEST_CASE("cond_1 of diag(10^k) is exact in extended mode") {
  for (int k : {5, 10, 15, 20}) {
    std::size_t n = 4;
    DenseMatrix<DDouble> d(n, n);
    d(0, 0) = DDouble(1.0);
    d(1, 1) = DDouble(3.0);
    d(2, 2) = DDouble(7.0);
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= 10.0;
    d(3, 3) = DDouble(p);
    auto c = rbfc::cond_1(d);
    REQUIRE(c.kappa == DDouble(p));
  }
}

TEST_CASE("cond_1 flags singular input with infinity") {
  DenseMatrix<double> z(3, 3);
  auto c = rbfc::cond_1(z);
  REQUIRE(std::isinf(rbfc::to_double(c.kappa)));
}

TEST_CASE("cond_1 estimator tracks the exact value on big diagonally scaled matrices") {
  // 400 > kExactCondLimit forces the Hager path.
  std::size_t n = 400;
  auto rng = test::make_rng(7);
  DenseMatrix<double> a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.01 * test::uniform(rng);
    a(i, i) = 1.0 + static_cast<double>(i) / 10.0;
  }
  auto est = rbfc::cond_1(a);
  REQUIRE(est.estimated);
  // Oracle: exact 1-norm condition number via explicit inverse.
  double exact = rbfc::to_double(rbfc::norm_1(a)) *
                 rbfc::to_double(rbfc::norm_1(rbfc::inverse(a)));
  REQUIRE(rbfc::to_double(est.kappa) >= 0.1 * exact);
  REQUIRE(rbfc::to_double(est.kappa) <= 1.001 * exact);
}
