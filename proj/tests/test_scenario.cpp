#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nemflow/scenario.hpp"

using namespace nemflow;

namespace {

constexpr double pi = std::numbers::pi;

Grid periodic1d(int n, double length = 2.0 * pi) {
  return Grid::make(1, {n, 1, 1}, {length, 1.0, 1.0}, {0.0, 0.0, 0.0},
                    {AxisBc::Periodic, AxisBc::Periodic, AxisBc::Periodic});
}

double director_norm_defect(const DirectorField& d) {
  double worst = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double m = std::sqrt(d.comp[0][i] * d.comp[0][i] +
                               d.comp[1][i] * d.comp[1][i] +
                               d.comp[2][i] * d.comp[2][i]);
    worst = std::fmax(worst, std::fabs(m - 1.0));
  }
  return worst;
}

}  // namespace

TEST_SUITE("scenarios") {

TEST_CASE("the catalogue names every builtin") {
  const std::vector<std::string> names = scenario_names();
  for (const char* want :
       {"equilibrium", "acoustic-1d", "director-heat-1d", "vacuum-bump",
        "winding-defect", "shear-navier-slip"})
    CHECK(std::find(names.begin(), names.end(), want) != names.end());
  for (const auto& n : names) CHECK(scenario_traits(n).known);
  CHECK(!scenario_traits("no-such-thing").known);
}

TEST_CASE("equilibrium is the constant state") {
  const Grid g = periodic1d(16);
  const State s = make_scenario("equilibrium", g, {}, 0);
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    CHECK(s.rho[i] == 1.0);
    CHECK(s.u.comp[0][i] == 0.0);
    CHECK(s.d.comp[2][i] == 1.0);
  }
}

TEST_CASE("acoustic wave respects amplitude and wavenumber") {
  const Grid g = periodic1d(64);
  const State s =
      make_scenario("acoustic-1d", g, {{"amplitude", 0.25}, {"wavenumber", 2.0}}, 0);
  double lo = 2.0, hi = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    lo = std::fmin(lo, s.rho[i]);
    hi = std::fmax(hi, s.rho[i]);
  }
  CHECK(lo == doctest::Approx(0.75).epsilon(5e-3));
  CHECK(hi == doctest::Approx(1.25).epsilon(5e-3));
  CHECK(director_norm_defect(s.d) <= 1e-15);
}

TEST_CASE("overdriven acoustic amplitude is rejected") {
  const Grid g = periodic1d(64);
  CHECK_THROWS(make_scenario("acoustic-1d", g, {{"amplitude", 1.5}}, 0));
}

TEST_CASE("seeded noise is reproducible and seed-sensitive") {
  const Grid g = periodic1d(32);
  const ScenarioParams p = {{"amplitude", 0.1}, {"noise", 0.01}};
  const State a = make_scenario("acoustic-1d", g, p, 7);
  const State b = make_scenario("acoustic-1d", g, p, 7);
  const State c = make_scenario("acoustic-1d", g, p, 8);
  bool saw_difference = false;
  for (std::size_t i = 0; i < a.rho.size(); ++i) {
    CHECK(a.rho[i] == b.rho[i]);
    saw_difference = saw_difference || a.rho[i] != c.rho[i];
  }
  CHECK(saw_difference);
}

TEST_CASE("director heater carries a unit planar profile and quiet flow") {
  const Grid g = periodic1d(128);
  const State s = make_scenario("director-heat-1d", g, {{"amplitude", 0.5}}, 0);
  CHECK(director_norm_defect(s.d) <= 1e-15);
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    CHECK(s.rho[i] == 1.0);
    CHECK(s.u.comp[0][i] == 0.0);
    CHECK(s.d.comp[2][i] == 0.0);  // planar
  }
  const ScenarioTraits t = scenario_traits("director-heat-1d");
  REQUIRE(t.transport.has_value());
  REQUIRE(t.momentum.has_value());
  REQUIRE(t.director.has_value());
  CHECK(!*t.transport);
  CHECK(!*t.momentum);
  CHECK(*t.director);
}

TEST_CASE("vacuum bump is compactly supported and nonnegative") {
  const Grid g = periodic1d(128);
  const State s =
      make_scenario("vacuum-bump", g, {{"peak", 2.0}, {"radius", 0.5}}, 0);
  double hi = 0.0;
  std::size_t vacuum_cells = 0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    CHECK(s.rho[i] >= 0.0);
    hi = std::fmax(hi, s.rho[i]);
    if (s.rho[i] == 0.0) ++vacuum_cells;
  }
  // cell centers straddle the apex: close to the peak, never past it
  CHECK(hi > 1.9);
  CHECK(hi <= 2.0);
  // radius 0.5 out of 2 pi: most of the box is vacuum
  CHECK(vacuum_cells > s.rho.size() / 2);
}

TEST_CASE("winding defect wraps the requested number of turns") {
  const Grid g = periodic1d(256);
  const State s = make_scenario("winding-defect", g, {{"winding", 4.0}}, 0);
  CHECK(director_norm_defect(s.d) <= 1e-15);
  // accumulate the phase along the axis; it must wrap 4 full turns
  double total = 0.0;
  for (int i = 0; i < g.extents[0]; ++i) {
    const std::size_t j = static_cast<std::size_t>(i);
    const std::size_t jn = static_cast<std::size_t>((i + 1) % g.extents[0]);
    const double a0 = std::atan2(s.d.comp[1][j], s.d.comp[0][j]);
    const double a1 = std::atan2(s.d.comp[1][jn], s.d.comp[0][jn]);
    double da = a1 - a0;
    while (da > pi) da -= 2.0 * pi;
    while (da < -pi) da += 2.0 * pi;
    total += da;
  }
  CHECK(total == doctest::Approx(4.0 * 2.0 * pi).epsilon(1e-10));
}

TEST_CASE("shear profile needs walls and two dimensions") {
  const ScenarioTraits t = scenario_traits("shear-navier-slip");
  CHECK(t.required_dim == 2);
  REQUIRE(t.required_bc.has_value());
  CHECK(*t.required_bc == VelocityBc::NavierSlip);

  const Grid g1 = periodic1d(16);
  CHECK_THROWS(make_scenario("shear-navier-slip", g1, {}, 0));

  const Grid g2 = Grid::make(2, {16, 16, 1}, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0},
                             {AxisBc::Periodic, AxisBc::Wall, AxisBc::Periodic});
  const State s = make_scenario("shear-navier-slip", g2, {{"u_max", 2.0}}, 0);
  double peak = 0.0;
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    peak = std::fmax(peak, std::fabs(s.u.comp[0][i]));
    CHECK(s.u.comp[1][i] == 0.0);
  }
  CHECK(peak <= 2.0 + 1e-12);
  CHECK(peak > 1.9);
}

TEST_CASE("unknown scenarios are rejected by name") {
  const Grid g = periodic1d(16);
  CHECK_THROWS_WITH_AS(make_scenario("warp-core-breach", g, {}, 0),
                       "unknown scenario \"warp-core-breach\"",
                       std::invalid_argument);
}

}  // TEST_SUITE
