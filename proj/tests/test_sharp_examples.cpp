#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "rlab/sharp_examples.hpp"

using namespace rlab;
using namespace rlab_test;

namespace {

// normalized ||Ef||^2 over the disk B_R on a unit grid, subsampled rows
double field_l2sq_disk(const DensityFunction& f, double R, int row_step = 2) {
  double mass = 0.0;
  const int half = static_cast<int>(R);
  AxisGrid xg{-static_cast<double>(half), 1.0, 2 * half + 1};
  for (int row = 0; row <= 2 * half; row += row_step) {
    const double xn = -static_cast<double>(half) + row;
    auto vals = evaluate_extension_row(f, xg, xn);
    for (int i = 0; i < xg.count; ++i) {
      const double x1 = xg.point(i);
      if (x1 * x1 + xn * xn <= R * R) mass += std::norm(vals[static_cast<std::size_t>(i)]);
    }
  }
  return mass * row_step / (2.0 * M_PI);
}

}  // namespace

TEST_CASE("slab example: packets fill B_R for k = n = 2") {
  const double R = 128.0;
  auto ex = build_slab_example(2, 2, R, 3);
  REQUIRE_FALSE(ex.packets.empty());
  CHECK(std::fabs(ex.density.l2_norm() - 1.0) < 1e-12);
  // tubes meet B_R and (trivially, k = n) the whole-space slab
  for (const auto& pk : ex.packets) {
    Cap cap(pk.omega, 1.0 / std::sqrt(R));
    Tube t(cap, pk.v, R, ex.delta);
    bool meets = false;
    for (int i = 0; i <= 16; ++i)
      if (norm(t.axis_point(-R + 2.0 * R * i / 16.0)) <= R) meets = true;
    CHECK(meets);
  }
}

TEST_CASE("slab example: tube containment for k < n") {
  const double R = 64.0;
  auto ex = build_slab_example(3, 2, R, 5);
  REQUIRE_FALSE(ex.packets.empty());
  // every packet tube stays in the slab around span(e1, e3): |x2| small
  for (const auto& pk : ex.packets) {
    Cap cap(pk.omega, 1.0 / std::sqrt(R));
    Tube t(cap, pk.v, R, ex.delta);
    for (int i = 0; i <= 24; ++i) {
      Vec x = t.axis_point(-R + 2.0 * R * i / 24.0);
      if (norm(x) > R) continue;
      CHECK(std::fabs(x[1]) <= 2.0 * std::pow(R, 0.5 + ex.delta) + 1e-9);
      CHECK(tube_contains(t, x));
    }
  }
}

TEST_CASE("slab field is roughly constant and has the right L2 mass") {
  const double R = 128.0;
  auto ex = build_slab_example(2, 2, R, 7);
  // |Ef| statistics over the slab grid (interior of B_R, spacing 4)
  std::vector<double> mags;
  AxisGrid xg{-0.9 * R, 4.0, static_cast<int>(0.45 * R)};
  for (int row = 0; row < xg.count; ++row) {
    const double xn = xg.point(row);
    auto vals = evaluate_extension_row(ex.density, xg, xn);
    for (int i = 0; i < xg.count; ++i) {
      Vec x = {xg.point(i), xn};
      if (norm(x) <= 0.9 * R) mags.push_back(std::abs(vals[static_cast<std::size_t>(i)]));
    }
  }
  REQUIRE(mags.size() > 100);
  double mean = 0.0;
  for (double m : mags) mean += m;
  mean /= static_cast<double>(mags.size());
  double var = 0.0;
  for (double m : mags) var += (m - mean) * (m - mean);
  var /= static_cast<double>(mags.size());
  const double cov = std::sqrt(var) / mean;
  INFO("coefficient of variation " << cov);
  CHECK(cov <= 1.0);

  // ||Ef||^2_{L2(B_R)} / (R ||f||^2) in [1/4, 4]
  const double ratio = field_l2sq_disk(ex.density, R) / R;
  INFO("L2 ratio " << ratio);
  CHECK(ratio >= 0.25);
  CHECK(ratio <= 4.0);
}

TEST_CASE("random-sign L2 stability across seeds") {
  const double R = 128.0;
  std::vector<double> norms;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto ex = build_slab_example(2, 2, R, seed);
    norms.push_back(std::sqrt(field_l2sq_disk(ex.density, R, 4)));
  }
  const double mx = *std::max_element(norms.begin(), norms.end());
  const double mn = *std::min_element(norms.begin(), norms.end());
  INFO("spread " << mn << " .. " << mx);
  CHECK(mx / mn <= 1.25);
}

TEST_CASE("scaling experiment fits the predicted slab exponents") {
  // K = 4 so the K^2-cube tiling resolves B_R across the whole R range
  const std::vector<double> Rs = {64.0, 128.0, 512.0};
  auto run4 = scaling_experiment(2, 2, Rs, 4.0, 4.0, 0, 101);
  INFO("slope at p=4: " << run4.slope << " residual " << run4.residual);
  CHECK(std::fabs(run4.slope - 0.0) <= 0.1);
  auto run3 = scaling_experiment(2, 2, Rs, 3.0, 4.0, 0, 101);
  INFO("slope at p=3: " << run3.slope << " residual " << run3.residual);
  CHECK(std::fabs(run3.slope - 1.0 / 6.0) <= 0.08);
}

TEST_CASE("scaling run preconditions") {
  ScalingRun run;
  run.R_values = {64.0, 128.0};
  run.ratios = {1.0, 1.0};
  CHECK_THROWS(run.fit());
  run.R_values = {64.0, 128.0, 256.0};
  run.ratios = {1.0, 1.0, 1.0};
  CHECK_THROWS(run.fit());  // span only 4x
  run.R_values = {64.0, 128.0, 512.0};
  run.fit();
  CHECK(run.slope == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("quadric line family through (R,0,0,0)") {
  const double R = 64.0;
  auto lines = quadric_line_family(R, {R, 0.0, 0.0, 0.0}, 32);
  REQUIRE(lines.size() == 32);
  auto Q = quadric_polynomial(R);
  for (const auto& l : lines) {
    // direction has the cone structure (0, a, b, c) with a^2 = b^2 + c^2
    CHECK(std::fabs(l.direction[0]) < 1e-10);
    CHECK(std::fabs(l.direction[1] * l.direction[1] - l.direction[2] * l.direction[2] -
                    l.direction[3] * l.direction[3]) < 1e-10);
    // the whole line lies in the quadric
    for (int s = 1; s <= 10; ++s) {
      const double t = -2.0 * R + 4.0 * R * s / 10.0;
      Vec x = axpy(t, l.direction, l.point);
      CHECK(std::fabs(Q.eval(x)) <= 1e-6);
    }
    // tangency: direction orthogonal to the gradient
    CHECK(std::fabs(dot(l.direction, Q.gradient(l.point))) < 1e-9);
  }
  // distinct angles give independent directions
  CHECK(norm(sub(lines[0].direction, lines[8].direction)) > 0.1);
}

TEST_CASE("quadric line family off the axis point") {
  const double R = 32.0;
  // z = (R cosh? ...) take z = (R*5/4, 0, R*3/4, 0): (5/4)^2 - (3/4)^2 = 1
  Vec z = {R * 1.25, 0.0, R * 0.75, 0.0};
  auto lines = quadric_line_family(R, z, 16);
  auto Q = quadric_polynomial(R);
  for (const auto& l : lines)
    for (int s = 0; s <= 10; ++s) {
      const double t = -R + 2.0 * R * s / 10.0;
      CHECK(std::fabs(Q.eval(axpy(t, l.direction, l.point))) <= 1e-6);
    }
  CHECK_THROWS_AS(quadric_line_family(R, {R, R, R, R}), NotOnQuadric);
}

TEST_CASE("broadness probe: cone is broad, collapsed family is not") {
  const double R = 64.0;
  auto lines = quadric_line_family(R, {R, 0.0, 0.0, 0.0}, 64);
  std::vector<Vec> dirs;
  for (const auto& l : lines) dirs.push_back(l.direction);
  for (double K : {8.0, 16.0}) {
    auto probe = direction_broadness(dirs, K);
    INFO("K " << K << " max fraction " << probe.max_fraction);
    CHECK(probe.max_fraction <= 0.5);
  }
  // fractions decrease as K increases
  CHECK(direction_broadness(dirs, 16.0).max_fraction <=
        direction_broadness(dirs, 8.0).max_fraction + 1e-12);

  // negative control: directions collapsed into a plane
  std::vector<Vec> flat;
  for (int i = 0; i < 64; ++i) {
    const double phi = 2.0 * M_PI * i / 64.0;
    flat.push_back({0.0, std::cos(phi), std::sin(phi), 0.0});
  }
  auto probe = direction_broadness(flat, 8.0);
  CHECK(probe.max_fraction >= 0.99);
}

TEST_CASE("quadric broadness probe over sampled points") {
  auto probe = quadric_broadness_probe(48.0, 6, 8.0, 11, 48);
  INFO("max fraction " << probe.max_fraction);
  CHECK(probe.max_fraction <= 0.5);
  CHECK(probe.planes_checked > 0);
}

TEST_CASE("predicted slab exponent consistency with the slab experiment") {
  // the analytic exponent at p = 4 and p = 3 for n = k = 2
  CHECK(predicted_slab_exponent(2, 2, Rational(4)) == Rational(0));
  CHECK(predicted_slab_exponent(2, 2, Rational(3)) == Rational(1, 6));
}
