#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <random>

#include "mplv/error.hpp"
#include "mplv/model_io.hpp"

using namespace mplv;

namespace {

constexpr Ticks U = 1'000'000;

std::size_t finite_count(const Matrix& a) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) n += a(i, j).is_finite();
  return n;
}

std::string error_of(std::string_view text) {
  try {
    parse_model(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("loading models") {
  const Model m = parse_model(R"j({"matrix":[[2,5],[3,3]],"spec":"F G (t1 <= 5)"})j");
  CHECK(m.matrix == Matrix::from_units({{2, 5}, {3, 3}}));
  CHECK(m.spec == "F G (t1 <= 5)");
  CHECK_FALSE(m.initial);

  const Model r = parse_model(R"j({"matrix":[[1,null],[null,1]]})j");
  CHECK(is_regular(r.matrix));
  CHECK_FALSE(is_irreducible(r.matrix));

  const Model f = parse_model(R"j({"matrix":[[0.25, -1.5e1],[1e-3, 2]]})j");
  CHECK(f.matrix(0, 0).value() == U / 4);
  CHECK(f.matrix(0, 1).value() == -15 * U);
  CHECK(f.matrix(1, 0).value() == 1000);

  const Model x = parse_model(R"j({"matrix":[[2,5],[3,3]],"initial":["x1 - x2 >= 3","x2 - x1 > -7"]})j");
  REQUIRE(x.initial);
  CHECK(x.initial->at(1, 0) == Bound::le(-3 * U));
  CHECK(x.initial->at(0, 1) == Bound::lt(7 * U));
}

TEST_CASE("model errors carry context") {
  CHECK(error_of(R"j({"matrix":[[null,null],[1,2]]})j").find("row 1") != std::string::npos);
  CHECK(error_of(R"j({"matrix":[[null,null],[1,2]]})j").find("not regular") != std::string::npos);
  CHECK(error_of(R"j({"matrix":[[1,2],[3]]})j").find("square") != std::string::npos);
  CHECK(error_of(R"j({"matrix":[]})j") != "");
  CHECK(error_of(R"j({"matrix":[[1,"a"],[3,4]]})j").find("matrix") != std::string::npos);
  CHECK(error_of(R"j({"matrix":[[1,2],[3,4]],"initial":["x1 - x3 <= 1"]})j").find("initial") != std::string::npos);
  CHECK(error_of(R"j({"matrix":[[1,2],[3,4]],"initial":["x1 - x2 <= 1","x2 - x1 < -1"]})j") != "");
  CHECK(error_of(R"j({"matrix":[[1,2],[3,4]],"spec":3})j").find("spec") != std::string::npos);
  CHECK(error_of(R"j({"matrix":[[1,2],[3,4]])j") != "");
  CHECK(error_of(R"j({"matrix":[[1.0000001,2],[3,4]]})j") != "");
  CHECK(error_of("[1,2]") != "");
  CHECK_THROWS_AS(load_model("/nonexistent/model.json"), Error);
}

TEST_CASE("constraints") {
  Dbm d = Dbm::universe(3);
  add_constraint(d, "x1 - x2 < 3");
  add_constraint(d, "x3-x1>=-2.5");
  add_constraint(d, "x2 - x3 = 1");
  CHECK(d.at(0, 1) == Bound::lt(3 * U));
  CHECK(d.at(0, 2) == Bound::le(5 * U / 2));
  CHECK(d.at(1, 2) == Bound::le(U));
  CHECK(d.at(2, 1) == Bound::le(-U));
  CHECK_THROWS_AS(add_constraint(d, "x1 + x2 < 3"), Error);
  CHECK_THROWS_AS(add_constraint(d, "x1 - x1 < 3"), Error);
  CHECK_THROWS_AS(add_constraint(d, "x0 - x1 < 3"), Error);
  CHECK_THROWS_AS(add_constraint(d, "x1 - x2 != 3"), Error);
  CHECK_THROWS_AS(parse_constraints({"x1 - x2 < 0", "x2 - x1 < 0"}, 2), Error);
  const Dbm c = parse_constraints({"x1 - x2 <= 2", "x2 - x3 <= 2"}, 3);
  CHECK(c.at(0, 2) == Bound::le(4 * U));
}

TEST_CASE("save and load round trip") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 6;
    Model m{random_mpl(n, RandomConfig{1 + rng() % n, -20, 20}, rng), std::nullopt, std::nullopt};
    if (t % 2) {
      Dbm d = Dbm::universe(n);
      for (int k = 0; k < 3 && n > 1; ++k) {
        const std::size_t i = rng() % n, j = rng() % n;
        if (i == j) continue;
        d.constrain(i, j, rng() % 2 ? Bound::le(static_cast<Ticks>(rng() % 20000) * 1000)
                                     : Bound::lt(static_cast<Ticks>(rng() % 20000) * 1000));
      }
      m.initial = canonicalize(d);
    }
    if (t % 3 == 0) m.spec = "G F (t1 > 3)";
    const Model back = parse_model(save_model(m));
    CHECK(back == m);
  }
  const auto path = std::filesystem::temp_directory_path() / "mplv_roundtrip.json";
  const Model m{Matrix::from_units({{2, 5}, {3, 3}}), parse_constraints({"x1 - x2 <= 2"}, 2), "F (t1 <= 5)"};
  write_model(path.string(), m);
  CHECK(load_model(path.string()) == m);
  std::filesystem::remove(path);
}

TEST_CASE("random matrices") {
  CHECK(random_mpl(3, RandomConfig{2, 1, 10}, 7) == random_mpl(3, RandomConfig{2, 1, 10}, 7));
  CHECK(finite_count(random_mpl(5, RandomConfig{2, 1, 10}, 11)) == 10);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Matrix a = random_mpl(3, RandomConfig{3, 1, 10}, s);
    CHECK(finite_count(a) == 9);
    CHECK(is_irreducible(a));
    const Matrix b = random_mpl(6, RandomConfig{2, 1, 10}, s);
    for (std::size_t i = 0; i < 6; ++i) {
      std::size_t row = 0;
      for (std::size_t j = 0; j < 6; ++j) {
        if (!b(i, j).is_finite()) continue;
        ++row;
        CHECK(b(i, j).value() % U == 0);
        CHECK(b(i, j).value() >= U);
        CHECK(b(i, j).value() <= 10 * U);
      }
      CHECK(row == 2);
    }
  }
  CHECK_THROWS_AS(random_mpl(2, RandomConfig{3, 1, 10}, 1), Error);
  CHECK_THROWS_AS(random_mpl(2, RandomConfig{1, 5, 1}, 1), Error);
}

TEST_CASE("column choice is uniform") {
  // each column should hold a finite entry of a row with probability m/n
  std::mt19937_64 rng(3);
  std::vector<int> hits(5, 0);
  const int rounds = 4000;
  for (int t = 0; t < rounds; ++t) {
    const Matrix a = random_mpl(5, RandomConfig{2, 1, 10}, rng);
    for (std::size_t j = 0; j < 5; ++j) hits[j] += a(0, j).is_finite();
  }
  for (int h : hits) CHECK(std::abs(h - rounds * 2 / 5) < 150);
}

TEST_CASE("seed from the environment") {
  ::setenv("MPLVERIFY_SEED", "1234", 1);
  CHECK(default_seed() == 1234);
  ::unsetenv("MPLVERIFY_SEED");
  CHECK(default_seed() == 20240611);
}
