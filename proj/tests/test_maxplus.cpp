#include <doctest.h>

#include <random>

#include "mplv/maxplus.hpp"
#include "oracles.hpp"

using namespace mplv;

namespace {

constexpr Ticks U = 1'000'000;

Matrix railway() { return Matrix::from_units({{2, 5}, {3, 3}}); }

Matrix random_matrix(std::mt19937_64& rng, std::size_t n, double eps_prob, bool regular) {
  std::uniform_int_distribution<Ticks> val(-5, 12);
  std::bernoulli_distribution eps(eps_prob);
  for (;;) {
    Matrix a(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!eps(rng)) a(i, j) = MaxPlus::finite(val(rng) * U);
    if (!regular || is_regular(a)) return a;
  }
}

Matrix random_irreducible(std::mt19937_64& rng, std::size_t n, double eps_prob) {
  for (;;) {
    Matrix a = random_matrix(rng, n, eps_prob, true);
    if (is_irreducible(a)) return a;
  }
}

bool grid_equal(const oracle::Grid& g, const Matrix& a) { return g == oracle::grid_of(a); }

}  // namespace

TEST_CASE("scalar rules") {
  const MaxPlus e = MaxPlus::epsilon(), three = MaxPlus::finite(3);
  CHECK(oplus(e, three) == three);
  CHECK(oplus(three, e) == three);
  CHECK(otimes(e, three).is_epsilon());
  CHECK(otimes(three, three) == MaxPlus::finite(6));
  CHECK(oplus(MaxPlus::finite(-2), three) == three);
  CHECK_THROWS_AS(e.value(), Error);
}

TEST_CASE("multiplication examples") {
  const Matrix a = railway();
  CHECK(multiply(a, a) == Matrix::from_units({{8, 8}, {6, 8}}));
  CHECK(multiply(a, Matrix::identity(2)) == a);
  CHECK(multiply(Matrix(2), a) == Matrix(2));
  CHECK_THROWS_AS(multiply(a, Matrix(3)), Error);
}

TEST_CASE("mat_vec examples") {
  const Matrix a = railway();
  CHECK(mat_vec(a, Point{0, 0}) == Point{5 * U, 3 * U});
  CHECK(mat_vec(a, Point{0, -10 * U}) == Point{2 * U, 3 * U});
  Matrix bad(2);
  bad(0, 0) = MaxPlus::finite(1);
  CHECK_THROWS_AS(mat_vec(bad, Point{0, 0}), Error);
}

TEST_CASE("irreducibility") {
  CHECK(is_irreducible(railway()));
  CHECK_FALSE(is_irreducible(Matrix::from_units({{1, std::nullopt}, {std::nullopt, 1}})));
  CHECK(is_irreducible(Matrix::from_units({{std::nullopt, 1}, {1, std::nullopt}})));
  CHECK(is_irreducible(Matrix::from_units({{0}})));
  CHECK_FALSE(is_irreducible(Matrix(1)));
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    const Matrix a = random_matrix(rng, 2 + t % 4, 0.6, false);
    CHECK(is_irreducible(a) == oracle::strongly_connected_with_cycle(oracle::grid_of(a)));
  }
}

TEST_CASE("eigenvalue examples and cycle-enumeration oracle") {
  CHECK(eigenvalue(railway()) == Rational(4 * U, 1));
  CHECK(eigenvalue(Matrix::from_units({{7}})) == Rational(7 * U, 1));
  CHECK(eigenvalue(Matrix::from_units({{std::nullopt, 1}, {1, std::nullopt}})) == Rational(U, 1));
  CHECK_THROWS_AS(eigenvalue(Matrix::from_units({{1, std::nullopt}, {std::nullopt, 1}})), Error);
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    const Matrix a = random_irreducible(rng, 2 + t % 4, 0.5);
    const auto [w, len] = oracle::max_cycle_mean(oracle::grid_of(a));
    CHECK(eigenvalue(a) == Rational(w, len));
  }
}

TEST_CASE("transient and cyclicity of the railway matrix") {
  const SpectralProfile sp = transient_cyclicity(railway());
  CHECK(sp.lambda == Rational(4 * U, 1));
  CHECK(sp.transient == 2);
  CHECK(sp.cyclicity == 2);
  const Matrix a2 = power(railway(), 2), a4 = power(railway(), 4);
  CHECK(a4 == Matrix::from_units({{16, 16}, {14, 16}}));
  CHECK(a4 == shift(a2, 8 * U));
  const SpectralProfile one = transient_cyclicity(Matrix::from_units({{0}}));
  CHECK(one.transient == 1);
  CHECK(one.cyclicity == 1);
  CHECK(one.lambda == Rational(0, 1));
}

TEST_CASE("associativity and homogeneity on random matrices") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<Ticks> coord(-20 * U, 20 * U);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 3 + t % 3;
    const Matrix a = random_matrix(rng, n, 0.3, true), b = random_matrix(rng, n, 0.3, true),
                 c = random_matrix(rng, n, 0.3, true);
    CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
    CHECK(grid_equal(oracle::mul(oracle::grid_of(a), oracle::grid_of(b)), multiply(a, b)));
    Point x(n);
    for (auto& v : x) v = coord(rng);
    const Ticks alpha = coord(rng);
    Point shifted = x;
    for (auto& v : shifted) v += alpha;
    Point y = mat_vec(a, x);
    for (auto& v : y) v += alpha;
    CHECK(mat_vec(a, shifted) == y);
  }
}

TEST_CASE("transient identity holds from k0 on and is minimal") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 60; ++t) {
    const Matrix a = random_irreducible(rng, 2 + t % 4, 0.4);
    const SpectralProfile sp = transient_cyclicity(a);
    const oracle::Grid g = oracle::grid_of(a);
    const std::size_t horizon = sp.transient + 12 * sp.cyclicity + 12;
    std::vector<oracle::Grid> pw{g};  // pw[k-1] = A^k
    while (pw.size() < horizon + 64) pw.push_back(oracle::mul(pw.back(), g));
    const Rational lc(sp.lambda.num() * static_cast<Ticks>(sp.cyclicity), sp.lambda.den());
    REQUIRE(lc.is_integer());
    auto holds = [&](std::size_t k, std::size_t c, Ticks delta) {
      const auto& lo = pw[k - 1];
      const auto& hi = pw[k + c - 1];
      for (std::size_t i = 0; i < lo.size(); ++i)
        for (std::size_t j = 0; j < lo.size(); ++j) {
          if (lo[i][j].has_value() != hi[i][j].has_value()) return false;
          if (lo[i][j] && *hi[i][j] != *lo[i][j] + delta) return false;
        }
      return true;
    };
    for (std::size_t k = sp.transient; k <= horizon; ++k) CHECK(holds(k, sp.cyclicity, lc.num()));
    if (sp.transient > 1) CHECK_FALSE(holds(sp.transient - 1, sp.cyclicity, lc.num()));
    for (std::size_t c = 1; c < sp.cyclicity; ++c) {
      const Rational l2(sp.lambda.num() * static_cast<Ticks>(c), sp.lambda.den());
      if (!l2.is_integer()) continue;
      for (std::size_t k = 1; k <= horizon; ++k) CHECK_FALSE(holds(k, c, l2.num()));
    }
    // limit slope
    const std::size_t k = sp.transient + 10 * sp.cyclicity;
    const Point x(a.dim(), 0);
    Point y = x;
    for (std::size_t s = 0; s < k + sp.cyclicity; ++s) {
      if (s == k) {
        const Point yk = y;
        Point yc = y;
        for (std::size_t r = 0; r < sp.cyclicity; ++r) yc = mat_vec(a, yc);
        for (std::size_t i = 0; i < a.dim(); ++i) CHECK(yc[i] - yk[i] == lc.num());
        break;
      }
      y = mat_vec(a, y);
    }
  }
}

TEST_CASE("transient search limits are reported") {
  // slow convergence: two circuits with close means
  const Matrix a = Matrix::from_units({{0, 0}, {-100, 1}});
  CHECK_FALSE(is_irreducible(Matrix::from_units({{0, std::nullopt}, {0, 1}})));
  CHECK_THROWS_AS(transient_cyclicity(a, TransientLimits{5, 64}), Error);
  CHECK_NOTHROW(transient_cyclicity(a));
}
