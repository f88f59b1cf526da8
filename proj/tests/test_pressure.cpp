#include <cmath>

#include "doctest.h"
#include "nemflow/pressure.hpp"

using namespace nemflow;

TEST_SUITE("pressure law") {

TEST_CASE("isentropic law and its derivative") {
  const PressureLaw law = PressureLaw::isentropic(0.5, 1.4);
  CHECK(law.eval_p(0.0) == 0.0);
  CHECK(law.eval_p(2.0) == doctest::Approx(0.5 * std::pow(2.0, 1.4)).epsilon(1e-15));
  CHECK(law.eval_dp(2.0) ==
        doctest::Approx(0.5 * 1.4 * std::pow(2.0, 0.4)).epsilon(1e-15));
  CHECK(law.eval_dp(0.0) == 0.0);  // gamma > 1: slope vanishes at vacuum
}

TEST_CASE("isentropic admissibility is enforced") {
  CHECK_THROWS(PressureLaw::isentropic(0.0, 1.4));
  CHECK_THROWS(PressureLaw::isentropic(-1.0, 1.4));
  CHECK_THROWS(PressureLaw::isentropic(1.0, 1.0));
  CHECK_THROWS(PressureLaw::isentropic(1.0, 0.9));
}

TEST_CASE("tabulated law interpolates and extrapolates with the last slope") {
  const PressureLaw law = PressureLaw::tabulated({0.0, 1.0, 2.0}, {0.0, 2.0, 3.0});
  CHECK(law.eval_p(0.0) == 0.0);
  CHECK(law.eval_p(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(law.eval_p(1.5) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(law.eval_p(3.0) == doctest::Approx(4.0).epsilon(1e-15));  // slope 1 past 2
  CHECK(law.eval_dp(0.5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(law.eval_dp(1.5) == doctest::Approx(1.0).epsilon(1e-15));
  // right derivative at the kink
  CHECK(law.eval_dp(1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tabulated law must start at the vacuum state") {
  CHECK_THROWS(PressureLaw::tabulated({0.5, 1.0}, {0.0, 1.0}));
  CHECK_THROWS(PressureLaw::tabulated({0.0, 1.0}, {0.1, 1.0}));
  CHECK_THROWS(PressureLaw::tabulated({0.0, 1.0, 0.5}, {0.0, 1.0, 2.0}));
  CHECK_THROWS(PressureLaw::tabulated({0.0}, {0.0}));
}

TEST_CASE("lipschitz bound is monotone in the density ceiling") {
  const PressureLaw iso = PressureLaw::isentropic(1.0, 1.4);
  CHECK(iso.lipschitz_bound(1.0) == doctest::Approx(1.4).epsilon(1e-15));
  CHECK(iso.lipschitz_bound(2.0) ==
        doctest::Approx(1.4 * std::pow(2.0, 0.4)).epsilon(1e-15));
  CHECK(iso.lipschitz_bound(2.0) >= iso.lipschitz_bound(1.0));

  // steep early segment dominates later flat ones
  const PressureLaw tab = PressureLaw::tabulated({0.0, 0.5, 2.0}, {0.0, 5.0, 5.5});
  CHECK(tab.lipschitz_bound(0.25) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(tab.lipschitz_bound(2.0) == doctest::Approx(10.0).epsilon(1e-15));
  double prev = 0.0;
  for (double r = 0.1; r < 3.0; r += 0.1) {
    const double b = tab.lipschitz_bound(r);
    CHECK(b >= prev);
    prev = b;
  }
}

TEST_CASE("field evaluation matches the pointwise law") {
  const Grid g = Grid::make(1, {8, 1, 1}, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0},
                            {AxisBc::Periodic, AxisBc::Periodic, AxisBc::Periodic});
  ScalarField rho(g);
  for (std::size_t i = 0; i < rho.size(); ++i)
    rho[i] = 0.25 * static_cast<double>(i);
  const PressureLaw law = PressureLaw::isentropic(2.0, 1.4);
  const ScalarField p = law.eval_p(rho);
  for (std::size_t i = 0; i < rho.size(); ++i)
    CHECK(p[i] == law.eval_p(rho[i]));
}

}  // TEST_SUITE
