#include <catch2/catch_amalgamated.hpp>

#include "rlab/geometry.hpp"
#include "rlab/rng.hpp"

using namespace rlab;

TEST_CASE("direction_of closed form") {
  // omega = 0 -> e_n
  Vec g = direction_of({0.0});
  CHECK(g[0] == Catch::Approx(0.0).margin(1e-15));
  CHECK(g[1] == Catch::Approx(1.0));

  // n = 2, omega = 1/2 -> (-1, 1)/sqrt(2)
  g = direction_of({0.5});
  CHECK(g[0] == Catch::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(g[1] == Catch::Approx(1.0 / std::sqrt(2.0)));

  // n = 3, omega = (1/2, 0) -> (-1, 0, 1)/sqrt(2)
  g = direction_of({0.5, 0.0});
  CHECK(g[0] == Catch::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(g[1] == Catch::Approx(0.0).margin(1e-15));
  CHECK(g[2] == Catch::Approx(1.0 / std::sqrt(2.0)));

  Rng rng(7);
  for (int t = 0; t < 10000; ++t) {
    Vec w = {rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)};
    Vec gg = direction_of(w);
    double nn = std::sqrt(4.0 * norm2(w) + 1.0);
    CHECK(std::fabs(gg[0] - (-2.0 * w[0] / nn)) < 1e-12);
    CHECK(std::fabs(gg[1] - (-2.0 * w[1] / nn)) < 1e-12);
    CHECK(std::fabs(gg[2] - 1.0 / nn) < 1e-12);
    CHECK(gg[2] > 0.0);
    CHECK(std::fabs(norm(gg) - 1.0) < 1e-12);

    Vec xi = frequency_of(w);
    CHECK(xi[0] == w[0]);
    CHECK(xi[1] == w[1]);
    CHECK(std::fabs(xi[2] - norm2(w)) < 1e-15);
  }
}

TEST_CASE("frequency_of examples") {
  Vec xi = frequency_of({0.5});
  CHECK(xi[0] == 0.5);
  CHECK(xi[1] == Catch::Approx(0.25));
  xi = frequency_of({0.6, 0.8});
  CHECK(xi[2] == Catch::Approx(1.0));
}

TEST_CASE("tube membership is the sheared inequality") {
  // axis points always inside
  Cap cap({0.0}, 0.1);
  Tube t(cap, {0.0}, 100.0, 0.1);
  for (double xn : {-100.0, -50.0, 0.0, 50.0, 100.0}) CHECK(tube_contains(t, {0.0, xn}));

  // outside radius at xn = 0
  double w = std::pow(100.0, 0.6);
  CHECK_FALSE(tube_contains(t, {2.0 * w, 0.0}));

  // hand evaluation: n=2, R=100, delta=0.1, omega=0.5, v=0, x=(-50,50)
  Cap cap2({0.5}, 0.1);
  Tube t2(cap2, {0.0}, 100.0, 0.1);
  CHECK(tube_contains(t2, {-50.0, 50.0}));  // |-50 + 2*50*0.5| = 0
  // and just outside
  CHECK_FALSE(tube_contains(t2, {-50.0 + w + 1.0, 50.0}));
}

TEST_CASE("angle to subspace") {
  Subspace V = Subspace::span_of({{1.0, 0.0, 0.0}});
  CHECK(angle_to_subspace({1.0, 0.0, 0.0}, V) == Catch::Approx(0.0).margin(1e-12));
  CHECK(angle_to_subspace({0.0, 1.0, 0.0}, V) == Catch::Approx(M_PI / 2));
  Vec g = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0};
  CHECK(angle_to_subspace(g, V) == Catch::Approx(M_PI / 4));
}

TEST_CASE("angle invariant under orthogonal change of basis") {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    // random 2-subspace of R^4 with two different orthonormal bases
    std::vector<Vec> sp;
    for (int i = 0; i < 2; ++i) sp.push_back(rng.gaussian_vector(4));
    Subspace V = Subspace::span_of(sp);
    // rotate the basis inside the subspace
    double c = std::cos(rng.uniform(0, 6.28)), s = std::sin(rng.uniform(0, 6.28));
    std::vector<Vec> sp2 = {axpy(s, V.basis[1], scale(V.basis[0], c)),
                            axpy(c, V.basis[1], scale(V.basis[0], -s))};
    Subspace V2 = Subspace::span_of(sp2);
    Vec g = normalized(rng.gaussian_vector(4));
    CHECK(std::fabs(angle_to_subspace(g, V) - angle_to_subspace(g, V2)) < 1e-10);
  }
}

TEST_CASE("largest principal angle separates equal from distinct subspaces") {
  Subspace U = Subspace::span_of({{1, 0, 0}, {0, 1, 0}});
  Subspace W = Subspace::span_of({{0, 1, 0}, {1, 0, 0}});
  CHECK(largest_principal_angle(U, W) < 1e-6);
  Subspace X = Subspace::span_of({{1, 0, 0}, {0, 0, 1}});
  CHECK(largest_principal_angle(U, X) > 1.0);
}

TEST_CASE("delta hierarchy schedule") {
  auto h = build_delta_hierarchy(0.1, 3);
  REQUIRE(h.delta_m.size() == 3);
  CHECK(h.delta_m[0] == Catch::Approx(1e-2));
  CHECK(h.delta_m[1] == Catch::Approx(1e-4));
  CHECK(h.delta_m[2] == Catch::Approx(1e-6));
  CHECK(h.delta == Catch::Approx(1e-8));
  CHECK(h.valid());
  CHECK(build_delta_hierarchy(0.09, 3).strongly_separated());

  // paper relation delta_m < eps*delta_{m-1} on several eps
  for (double eps : {0.05, 0.1, 0.2, 0.3, 0.4}) {
    auto hh = build_delta_hierarchy(eps, 4);
    for (std::size_t m = 1; m < hh.delta_m.size(); ++m)
      CHECK(hh.delta_m[m] < eps * hh.delta_m[m - 1]);
  }

  // eps = 0.4, n = 2: strictly decreasing positive sequence
  auto h2 = build_delta_hierarchy(0.4, 2);
  CHECK(h2.delta_m[0] > h2.delta_m[1]);
  CHECK(h2.delta_m[1] > h2.delta);
  CHECK(h2.delta > 0.0);

  CHECK_THROWS(build_delta_hierarchy(0.6, 2));
  CHECK_THROWS(build_delta_hierarchy(0.0, 2));
}
