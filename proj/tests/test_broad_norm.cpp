#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "rlab/broad_norm.hpp"

using namespace rlab;
using namespace rlab_test;

namespace {

// brute-force mu over the candidate family, independent of mu_broad's loop
double mu_oracle(const CoarseFieldBundle& bundle, std::size_t ball, const BroadParams& params,
                 const std::vector<Subspace>& cands) {
  const auto& per_tau = bundle.integrals_for(params.p)[ball];
  if (params.A == 0) {
    double m = 0.0;
    for (double v : per_tau) m = std::max(m, v);
    return m;
  }
  // enumerate tuples recursively
  double best = 1e300;
  std::vector<std::size_t> tuple(static_cast<std::size_t>(params.A), 0);
  for (;;) {
    double m = 0.0;
    for (std::size_t t = 0; t < per_tau.size(); ++t) {
      bool excl = false;
      for (auto c : tuple)
        if (angle_to_subspace(direction_of(bundle.caps.caps[t].center), cands[c]) <= 1.0 / params.K)
          excl = true;
      if (!excl) m = std::max(m, per_tau[t]);
    }
    best = std::min(best, m);
    int a = params.A - 1;
    for (; a >= 0; --a) {
      if (++tuple[static_cast<std::size_t>(a)] < cands.size()) break;
      tuple[static_cast<std::size_t>(a)] = 0;
    }
    if (a < 0) break;
  }
  return best;
}

DensityFunction broad_test_density(double R, Rng rng) { return random_smooth_density(2, R, rng); }

}  // namespace

TEST_CASE("ball cover tiles and covers B_R") {
  auto cover = make_ball_cover(64.0, 8.0, 2);
  CHECK(cover.side == 64.0);
  CHECK(cover.size() == 9);  // 3x3 cubes intersect B_64
  auto cover2 = make_ball_cover(128.0, 8.0, 2);
  CHECK(cover2.size() == 21);
  // every cube touches the ball, and the union covers it
  for (const auto& c : cover2.centers) {
    double nearest = std::hypot(std::max(0.0, std::fabs(c[0]) - 32.0),
                                std::max(0.0, std::fabs(c[1]) - 32.0));
    CHECK(nearest <= 128.0 + 1e-9);
  }
  Rng cr(3);
  for (int t = 0; t < 200; ++t) {
    Vec x = {cr.uniform(-128.0, 128.0), cr.uniform(-128.0, 128.0)};
    if (norm(x) > 128.0) continue;
    bool inside = false;
    for (const auto& c : cover2.centers)
      if (std::fabs(x[0] - c[0]) <= 32.0 && std::fabs(x[1] - c[1]) <= 32.0) inside = true;
    CHECK(inside);
  }
}

TEST_CASE("coarse caps tile the frequency ball") {
  auto caps = make_coarse_caps(8.0, 2);
  CHECK(caps.caps.size() >= 8);
  // sharp tiling: every omega maps to exactly one nearest cap
  for (double w : {-0.9, -0.3, 0.0, 0.4, 0.77}) {
    int t = caps.index_of({w});
    CHECK(t >= 0);
    CHECK(std::fabs(caps.caps[static_cast<std::size_t>(t)].center[0] - w) <= caps.spacing / 2 + 1e-12);
  }
}

TEST_CASE("mu_broad: A = 0 is the plain max and exclusion empties to zero") {
  const double R = 128.0, K = 8.0;
  Rng rng(101);
  auto f = broad_test_density(R, rng);
  BroadParams p0{2, 0, K, 2.0};
  auto bundle = make_bundle(f, R, p0, {2.0});
  auto cands = candidate_subspaces(bundle.caps, 2, 2);
  REQUIRE_FALSE(cands.empty());
  for (std::size_t b = 0; b < bundle.cover.size(); ++b) {
    double m0 = mu_broad(bundle, b, p0, cands);
    CHECK(m0 == Catch::Approx(mu_oracle(bundle, b, p0, cands)));
    double mx = 0.0;
    for (double v : bundle.integrals_for(2.0)[b]) mx = std::max(mx, v);
    CHECK(m0 == Catch::Approx(mx));
  }
}

TEST_CASE("mu_broad matches brute-force oracle for A = 1, 2") {
  const double R = 128.0, K = 4.0;
  Rng rng(103);
  auto f = broad_test_density(R, rng);
  for (int A : {1, 2}) {
    BroadParams pp{2, A, K, 3.0};
    auto bundle = make_bundle(f, R, pp, {3.0});
    auto cands = candidate_subspaces(bundle.caps, 2, 2);
    for (std::size_t b = 0; b < bundle.cover.size(); ++b)
      CHECK(mu_broad(bundle, b, pp, cands) == Catch::Approx(mu_oracle(bundle, b, pp, cands)));
  }
}

TEST_CASE("single-cap density is killed by one aligned candidate") {
  const double R = 64.0, K = 8.0;
  // density supported in one tau
  DensityFunction f(2, {symmetric_axis(1.0, 8 * 64 + 1)});
  auto caps = make_coarse_caps(K, 2);
  const Vec tau_center = caps.caps[caps.caps.size() / 2].center;
  f.fill([&](const Vec& w) -> cplx {
    double t = (w[0] - tau_center[0]) / (0.9 / K);
    return std::fabs(t) < 1.0 ? cplx(bump(t), 0.0) : cplx(0.0, 0.0);
  });
  BroadParams pp{2, 1, K, 2.0};
  auto bundle = make_bundle(f, R, pp, {2.0});
  std::vector<Subspace> cands = {Subspace::span_of({direction_of(tau_center)})};
  double total = 0.0;
  for (std::size_t b = 0; b < bundle.cover.size(); ++b) total += mu_broad(bundle, b, pp, cands);
  CHECK(total <= 1e-20);
  // bl_norm is zero despite nonzero field
  CHECK(bl_norm_from_bundle(bundle, pp, cands) <= 1e-10);
  BroadParams p0{2, 0, K, 2.0};
  CHECK(bl_norm_from_bundle(bundle, p0, cands) > 0.0);
}

TEST_CASE("candidate family properties") {
  auto caps = make_coarse_caps(8.0, 2);
  auto cands = candidate_subspaces(caps, 2, 2);
  CHECK(cands.size() <= caps.caps.size());
  for (const auto& c : cands) CHECK(c.dim() == 1);
  // enlarging the family never increases mu
  const double R = 64.0;
  Rng rng(107);
  auto f = broad_test_density(R, rng);
  BroadParams pp{2, 1, 8.0, 2.0};
  auto bundle = make_bundle(f, R, pp, {2.0});
  auto small = std::vector<Subspace>(cands.begin(), cands.begin() + cands.size() / 2);
  for (std::size_t b = 0; b < bundle.cover.size(); ++b)
    CHECK(mu_broad(bundle, b, pp, cands) <= mu_broad(bundle, b, pp, small) * (1.0 + 1e-12));
  // n = 4, k = 3, 10 caps -> at most 45 two-planes
  CoarseCaps ten;
  Rng r4(5);
  ten.spacing = 0.25;
  for (int i = 0; i < 10; ++i) {
    Vec c = {r4.uniform(-0.6, 0.6), r4.uniform(-0.6, 0.6), r4.uniform(-0.6, 0.6)};
    ten.caps.emplace_back(std::move(c), 0.125, ScaleTag::coarse);
  }
  auto two_planes = candidate_subspaces(ten, 4, 3);
  CHECK(two_planes.size() <= 45);
}

TEST_CASE("A-monotonicity of mu_broad") {
  const double R = 128.0, K = 8.0;
  Rng rng(109);
  auto f = broad_test_density(R, rng);
  BroadParams base{2, 0, K, 3.0};
  auto bundle = make_bundle(f, R, base, {3.0});
  auto cands = candidate_subspaces(bundle.caps, 2, 2);
  for (std::size_t b = 0; b < bundle.cover.size(); ++b) {
    double prev = 1e300;
    for (int A = 0; A <= 3; ++A) {
      BroadParams pp{2, A, K, 3.0};
      double m = mu_broad(bundle, b, pp, cands);
      CHECK(m <= prev * (1.0 + 1e-12));
      prev = m;
    }
  }
}

TEST_CASE("bl_norm homogeneity and sanity bound") {
  const double R = 64.0, K = 8.0;
  Rng rng(113);
  auto f = broad_test_density(R, rng);
  BroadParams pp{2, 0, K, 2.0};
  auto cands = candidate_subspaces(make_coarse_caps(K, 2), 2, 2);
  double n1 = bl_norm(f, R, pp, cands);
  DensityFunction g = f;
  g *= cplx(3.0, 0.0);
  double n3 = bl_norm(g, R, pp, cands);
  CHECK(n3 == Catch::Approx(3.0 * n1).epsilon(1e-9));

  // p=2, A=0 sanity: bl_norm <= ||Ef||_{L^2} over the same cube grid
  auto bundle = make_bundle(f, R, pp, {2.0});
  double l2_grid = 0.0;
  for (std::size_t b = 0; b < bundle.cover.size(); ++b) {
    // |Ef|^2 summed over the cube: evaluate on the union of midpoints
    auto pts = cube_midpoints(bundle.cover.centers[b], bundle.cover.side);
    auto field = evaluate_extension(f, pts, R);
    for (auto v : field.values) l2_grid += std::norm(v);
  }
  CHECK(std::pow(bl_norm_from_bundle(bundle, pp, cands), 2.0) <= l2_grid * (1.0 + 1e-9));
}

TEST_CASE("triangle inequality never violated on seeded trials") {
  const double R = 64.0, K = 8.0;
  Rng rng(127);
  BroadParams pp{2, 2, K, 3.0};
  auto cands = candidate_subspaces(make_coarse_caps(K, 2), 2, 2);
  int violations = 0;
  double worst = 0.0;
  for (int t = 0; t < 12; ++t) {
    auto g = broad_test_density(R, rng.derive(2 * t));
    auto h = broad_test_density(R, rng.derive(2 * t + 1));
    double ratio = 0.0;
    if (!check_triangle(g, h, R, pp, cands, &ratio)) ++violations;
    worst = std::max(worst, ratio);
  }
  CHECK(violations == 0);
  CHECK(worst <= 1.0);

  // h = 0 and g = h degenerate cases
  auto g = broad_test_density(R, rng.derive("deg"));
  DensityFunction zero(2, g.axes());
  CHECK(check_triangle(g, zero, R, pp, cands));
  CHECK(check_triangle(g, g, R, pp, cands));
}

TEST_CASE("Holder inequality never violated on seeded trials") {
  const double R = 64.0, K = 8.0;
  auto cands = candidate_subspaces(make_coarse_caps(K, 2), 2, 2);
  Rng rng(131);
  int violations = 0;
  for (int t = 0; t < 12; ++t) {
    auto f = broad_test_density(R, rng.derive(t));
    double ratio = 0.0;
    // (p1, p2, p) = (2, 6, 3), alpha = (1/2, 1/2)
    if (!check_holder(f, R, 2, K, 1, 1, Rational(2), Rational(6), Rational(1, 2), Rational(1, 2),
                      cands, &ratio))
      ++violations;
    CHECK(ratio <= 1.0 + 1e-9);
  }
  CHECK(violations == 0);

  // exact-relation violation is rejected
  auto f = broad_test_density(R, rng.derive("x"));
  CHECK_THROWS_AS(check_holder(f, R, 2, K, 1, 1, Rational(2), Rational(6), Rational(1, 2),
                               Rational(1, 3), cands),
                  ExponentRelationViolated);
}

TEST_CASE("narrow cap count obeys K^{k-2} with constant <= 10") {
  // k = 2: count <= 10 for any line; k = 3 (n = 3): count <= 10 K
  for (double K : {4.0, 8.0, 16.0}) {
    auto caps2 = make_coarse_caps(K, 2);
    Rng rng(137);
    for (int t = 0; t < 40; ++t) {
      Vec dir = normalized(rng.gaussian_vector(2));
      int c = narrow_cap_count(caps2, Subspace::span_of({dir}), K);
      CHECK(c <= 10);
    }
    // adversarial: lines through actual cap directions
    for (const auto& cap : caps2.caps) {
      int c = narrow_cap_count(caps2, Subspace::span_of({direction_of(cap.center)}), K);
      CHECK(c <= 10);
    }
    auto caps3 = make_coarse_caps(K, 3);
    for (int t = 0; t < 10; ++t) {
      std::vector<Vec> span = {rng.gaussian_vector(3), rng.gaussian_vector(3)};
      int c = narrow_cap_count(caps3, Subspace::span_of(span), K);
      CHECK(c <= 10.0 * K);
    }
  }
}
