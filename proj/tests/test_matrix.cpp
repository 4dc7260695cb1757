#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <vector>

#include "cul/adam.hpp"
#include "cul/gradcheck.hpp"
#include "cul/matrix.hpp"
#include "cul/rng.hpp"

using namespace cul;

TEST_CASE("matrix basics") {
  Matrix<double> m = Matrix<double>::from({{1, 2, 3}, {4, 5, 6}});
  REQUIRE(m.rows == 2);
  REQUIRE(m.cols == 3);
  REQUIRE(m.at(1, 2) == 6.0);
  REQUIRE(Matrix<double>::identity(3).at(2, 2) == 1.0);
  REQUIRE(Matrix<double>::identity(3).at(0, 2) == 0.0);
  REQUIRE(Matrix<double>(2, 2).at(0, 0) == 0.0);
  REQUIRE_THROWS_AS(Matrix<double>::from({{1, 2}, {3}}), ShapeError);
}

TEST_CASE("matmul matches hand result") {
  Matrix<double> a = Matrix<double>::from({{1, 2, 3}, {4, 5, 6}});
  Matrix<double> b = Matrix<double>::from({{7, 8}, {9, 10}, {11, 12}});
  Matrix<double> c = matmul(a, b);
  REQUIRE(c.rows == 2);
  REQUIRE(c.cols == 2);
  CHECK(c.at(0, 0) == 58.0);
  CHECK(c.at(0, 1) == 64.0);
  CHECK(c.at(1, 0) == 139.0);
  CHECK(c.at(1, 1) == 154.0);
  REQUIRE_THROWS_AS(matmul(a, a), ShapeError);
}

TEST_CASE("matmul is bitwise deterministic") {
  Rng rng(3);
  Matrix<double> a = glorot_init<double>(17, 23, rng);
  Matrix<double> b = glorot_init<double>(23, 9, rng);
  Matrix<double> c1 = matmul(a, b);
  Matrix<double> c2 = matmul(a, b);
  REQUIRE(std::memcmp(c1.data.data(), c2.data.data(), c1.data.size() * sizeof(double)) == 0);
}

TEST_CASE("transpose products agree with explicit transpose") {
  Rng rng(11);
  Matrix<double> a = glorot_init<double>(6, 4, rng);
  Matrix<double> b = glorot_init<double>(6, 5, rng);
  Matrix<double> tn = matmul_tn(a, b);  // aᵀ·b
  Matrix<double> ref = matmul(transpose(a), b);
  REQUIRE(tn.same_shape(ref));
  for (std::size_t i = 0; i < ref.data.size(); ++i) CHECK(tn.data[i] == Catch::Approx(ref.data[i]).epsilon(1e-14));

  Matrix<double> c = glorot_init<double>(4, 5, rng);
  Matrix<double> nt = matmul_nt(b, c);  // b·cᵀ: (6×5)·(5×4)
  Matrix<double> ref2 = matmul(b, transpose(c));
  REQUIRE(nt.same_shape(ref2));
  for (std::size_t i = 0; i < ref2.data.size(); ++i) CHECK(nt.data[i] == Catch::Approx(ref2.data[i]).epsilon(1e-14));
}

TEST_CASE("finiteness checks") {
  Matrix<double> m = Matrix<double>::from({{1, 2}, {3, 4}});
  REQUIRE(all_finite(m));
  m.at(1, 1) = std::nan("");
  REQUIRE_FALSE(all_finite(m));
  REQUIRE_THROWS_AS(assert_finite(m, "test"), NumericError);
  m.at(1, 1) = std::numeric_limits<double>::infinity();
  REQUIRE_FALSE(all_finite(m));
}

TEST_CASE("leaky relu forward and backward") {
  Matrix<double> x = Matrix<double>::from({{-2, 0, 3}});
  Matrix<double> y = leaky_relu(x, 0.2);
  CHECK(y.at(0, 0) == Catch::Approx(-0.4));
  CHECK(y.at(0, 1) == 0.0);
  CHECK(y.at(0, 2) == 3.0);
  Matrix<double> g = Matrix<double>::from({{1, 1, 1}});
  Matrix<double> dx = leaky_relu_backward(x, g, 0.2);
  CHECK(dx.at(0, 0) == Catch::Approx(0.2));
  CHECK(dx.at(0, 1) == 1.0);  // derivative at zero taken as 1
  CHECK(dx.at(0, 2) == 1.0);
  REQUIRE_THROWS_AS(leaky_relu(x, -0.1), NumericError);
}

TEST_CASE("l2 norm and normalize") {
  std::vector<double> v = {3.0, 4.0};
  REQUIRE(l2_norm(v) == Catch::Approx(5.0));
  std::vector<double> u = l2_normalize(v);
  CHECK(u[0] == Catch::Approx(0.6));
  CHECK(u[1] == Catch::Approx(0.8));
  std::vector<double> z = {0.0, 0.0};
  REQUIRE_THROWS_AS(l2_normalize(z), ZeroNormError);
  std::vector<double> tiny = {1e-13, 0.0};  // below the norm guard
  REQUIRE_THROWS_AS(l2_normalize(tiny), ZeroNormError);
}

TEST_CASE("glorot init bounds and determinism") {
  Rng rng(5);
  Matrix<double> w = glorot_init<double>(30, 50, rng);
  const double bound = std::sqrt(6.0 / (30 + 50));
  for (double v : w.data) {
    CHECK(v >= -bound);
    CHECK(v <= bound);
  }
  Rng rng2(5);
  Matrix<double> w2 = glorot_init<double>(30, 50, rng2);
  REQUIRE(std::memcmp(w.data.data(), w2.data.data(), w.data.size() * sizeof(double)) == 0);
  Rng rng3(6);
  Matrix<double> w3 = glorot_init<double>(30, 50, rng3);
  REQUIRE(std::memcmp(w.data.data(), w3.data.data(), w.data.size() * sizeof(double)) != 0);
}

TEST_CASE("rng reproduces reference stream") {
  // Reference values from an independent implementation of
  // splitmix64-seeded xoshiro256++.
  Rng r(42);
  CHECK(r.next_u64() == 0xd0764d4f4476689full);
  CHECK(r.next_u64() == 0x519e4174576f3791ull);
  CHECK(r.next_u64() == 0xfbe07cfb0c24ed8cull);
  CHECK(r.next_u64() == 0xb37d9f600cd835b8ull);
  CHECK(r.next_u64() == 0xcb231c3874846a73ull);
  Rng r0(0);
  CHECK(r0.next_u64() == 0x53175d61490b23dfull);
  CHECK(r0.next_u64() == 0x61da6f3dc380d507ull);
  CHECK(r0.next_u64() == 0x5c0fdf91ec9a7bfcull);
  Rng rs = Rng(42).split(7);
  CHECK(rs.next_u64() == 0x995617268179c87cull);
  CHECK(rs.next_u64() == 0xe8c79dadf23a58e5ull);
  CHECK(rs.next_u64() == 0x949b6b8ff87895f5ull);
  Rng u(123);
  CHECK(u.uniform() == Catch::Approx(0.6458487040291082).epsilon(1e-15));
  CHECK(u.uniform() == Catch::Approx(0.8381542123147958).epsilon(1e-15));
  CHECK(u.uniform() == Catch::Approx(0.665849804579045).epsilon(1e-15));
  CHECK(u.uniform() == Catch::Approx(0.5243655062127367).epsilon(1e-15));
}

TEST_CASE("rng uniform properties") {
  Rng r(99);
  for (int i = 0; i < 10000; ++i) {
    const double v = r.uniform();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }
  const double lo = -2.5, hi = 7.5;
  for (int i = 0; i < 1000; ++i) {
    const double v = r.uniform(lo, hi);
    REQUIRE(v >= lo);
    REQUIRE(v < hi);
  }
}

TEST_CASE("rng uniform_int is in range and roughly uniform") {
  Rng r(7);
  REQUIRE_THROWS_AS(r.uniform_int(0), NumericError);
  std::vector<int> counts(6, 0);
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) {
    const std::uint64_t v = r.uniform_int(6);
    REQUIRE(v < 6);
    ++counts[static_cast<std::size_t>(v)];
  }
  for (int c : counts) {
    CHECK(c > draws / 6 - 600);
    CHECK(c < draws / 6 + 600);
  }
  // Power-of-two fast path stays in range too.
  for (int i = 0; i < 1000; ++i) REQUIRE(r.uniform_int(8) < 8);
}

TEST_CASE("rng split streams are independent and deterministic") {
  Rng a = Rng(1).split(1);
  Rng b = Rng(1).split(2);
  Rng a2 = Rng(1).split(1);
  bool any_diff = false;
  for (int i = 0; i < 16; ++i) {
    const std::uint64_t va = a.next_u64();
    REQUIRE(va == a2.next_u64());
    if (va != b.next_u64()) any_diff = true;
  }
  REQUIRE(any_diff);
}

TEST_CASE("adam first step has magnitude close to lr") {
  Matrix<double> p(1, 3);
  Matrix<double> g = Matrix<double>::from({{0.5, -2.0, 1e-3}});
  AdamState<double> st = AdamState<double>::like(p, 1e-3);
  Matrix<double> before = p;
  adam_step(p, g, st);
  REQUIRE(st.t == 1);
  for (std::int64_t j = 0; j < 3; ++j) {
    const double step = std::abs(p.at(0, j) - before.at(0, j));
    // bias-corrected first step is lr·g/(|g| + eps') ≈ lr
    CHECK(step == Catch::Approx(1e-3).epsilon(1e-4));
    CHECK(((g.at(0, j) > 0) ? before.at(0, j) - p.at(0, j) : p.at(0, j) - before.at(0, j)) > 0);
  }
}

TEST_CASE("adam shape mismatch throws") {
  Matrix<double> p(2, 2);
  Matrix<double> g(2, 3);
  AdamState<double> st = AdamState<double>::like(p, 1e-3);
  REQUIRE_THROWS_AS(adam_step(p, g, st), ShapeError);
}

TEST_CASE("adam minimizes a quadratic") {
  Matrix<double> p = Matrix<double>::from({{10.0}});
  AdamState<double> st = AdamState<double>::like(p, 0.05);
  for (int i = 0; i < 2000; ++i) {
    Matrix<double> g(1, 1);
    g.at(0, 0) = 2.0 * (p.at(0, 0) - 3.0);
    adam_step(p, g, st);
  }
  CHECK(p.at(0, 0) == Catch::Approx(3.0).margin(1e-3));
}

TEST_CASE("finite difference check validates analytic gradients") {
  std::vector<double> x = {0.3, -0.7, 1.2, 0.0};
  auto f = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (double t : v) s += std::sin(t);
    return s;
  };
  std::vector<double> good(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) good[i] = std::cos(x[i]);
  CHECK(finite_diff_check(f, x, good, 1e-6) < 1e-8);

  std::vector<double> bad = good;
  bad[1] += 0.5;
  CHECK(finite_diff_check(f, x, bad, 1e-6) > 0.1);

  std::vector<double> wrong_len(3, 0.0);
  REQUIRE_THROWS_AS(finite_diff_check(f, x, wrong_len, 1e-6), ShapeError);
  REQUIRE_THROWS_AS(finite_diff_check(f, x, good, 0.0), NumericError);
}
