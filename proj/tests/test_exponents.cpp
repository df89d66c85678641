#include <catch2/catch_amalgamated.hpp>

#include "rlab/exponents.hpp"

using rlab::broad_e;
using rlab::choose_k;
using rlab::critical_exponent;
using rlab::predicted_slab_exponent;
using rlab::Rational;
using rlab::regular_lower_bound;
using rlab::theorem1_exponent;

TEST_CASE("rational arithmetic basics") {
  Rational a(14, 5);
  CHECK(a.str() == "14/5");
  CHECK(a.to_double() == Catch::Approx(2.8));
  CHECK(Rational(4, 2) == Rational(2));
  CHECK(Rational(-3, -6) == Rational(1, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2) * Rational(3, 4) == Rational(3, 2));
  CHECK((Rational(1) / Rational(2, 3)) == Rational(3, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("critical exponent formula") {
  CHECK(critical_exponent(3, 4) == Rational(14, 5));
  for (int n = 2; n <= 12; ++n) {
    CHECK(critical_exponent(n, n) == Rational(2 * n, n - 1));
    CHECK(critical_exponent(2, n) == Rational(2 * (n + 2), n));
  }
  CHECK_THROWS(critical_exponent(1, 4));
  CHECK_THROWS(critical_exponent(5, 4));
}

TEST_CASE("critical exponent strictly decreasing in k and n") {
  for (int n = 2; n <= 12; ++n)
    for (int k = 2; k <= n; ++k) {
      if (k + 1 <= n) CHECK(critical_exponent(k + 1, n) < critical_exponent(k, n));
      if (n + 1 <= 12) CHECK(critical_exponent(k, n + 1) < critical_exponent(k, n));
    }
}

TEST_CASE("theorem 1 exponent per parity") {
  CHECK(theorem1_exponent(4) == Rational(14, 5));
  CHECK(theorem1_exponent(3) == Rational(10, 3));
  CHECK(theorem1_exponent(2) == Rational(4));
  // cross-check against the critical exponent at the parity-chosen k
  for (int n = 2; n <= 12; ++n) CHECK(theorem1_exponent(n) == critical_exponent(choose_k(n), n));
}

TEST_CASE("broad_e identities") {
  CHECK(broad_e(2, 3, Rational(2)) == Rational(0));
  CHECK(broad_e(2, 3, Rational(4)) == Rational(5, 8));
  for (int n = 2; n <= 12; ++n)
    for (int k = 2; k <= n; ++k) CHECK(broad_e(k, n, critical_exponent(k, n)) == Rational(1, 2));
  CHECK_THROWS(broad_e(2, 3, Rational(1)));
}

TEST_CASE("regular lower bound and choice of k") {
  CHECK(regular_lower_bound(3, 4) == Rational(14, 5));
  CHECK(regular_lower_bound(2, 3) == Rational(3));
  CHECK(choose_k(5) == 3);
  CHECK(choose_k(4) == 3);
  CHECK(choose_k(6) == 4);
  for (int n = 2; n <= 12; n += 2)
    CHECK(regular_lower_bound(choose_k(n), n) == critical_exponent(choose_k(n), n));
  // for odd n the critical exponent is strictly bigger
  for (int n = 3; n <= 11; n += 2)
    CHECK(regular_lower_bound(choose_k(n), n) < critical_exponent(choose_k(n), n));
}

TEST_CASE("predicted slab exponent") {
  CHECK(predicted_slab_exponent(2, 2, Rational(4)) == Rational(0));
  CHECK(predicted_slab_exponent(2, 2, Rational(3)) == Rational(1, 6));
  for (int n = 2; n <= 8; ++n)
    for (int k = 2; k <= n; ++k)
      CHECK(predicted_slab_exponent(n, k, critical_exponent(k, n)) == Rational(0));
  CHECK(predicted_slab_exponent(3, 2, critical_exponent(2, 3)) == Rational(0));
}

TEST_CASE("rescaling relation solve_rho") {
  const double R = 1024.0, dm = 0.02, dl = 0.05;
  const double rho = rlab::solve_rho(R, dm, dl);
  CHECK(std::fabs(std::pow(rho, 0.5 + dl) - std::pow(R, 0.5 + dm)) <
        1e-9 * std::pow(R, 0.5 + dm));
}
