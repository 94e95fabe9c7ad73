#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "qmachine/epsilon_machine.hpp"
#include "qmachine/spin.hpp"

using namespace qmachine;
using namespace qmachine::testing;

namespace {

double dist(const SpinState& a, const SpinState& b) {
  return std::sqrt(std::norm(a.c1 - b.c1) + std::norm(a.c2 - b.c2));
}

}  // namespace

TEST_CASE("spin states") {
  SpinState s = spin_state(UnitVector::north());
  CHECK(s.c1 == Complex(1.0, 0.0));
  CHECK(std::abs(s.c2) == 0.0);
  s = spin_state(UnitVector::normalized(1, 0, 0));
  CHECK(std::abs(s.c1 - Complex(std::sqrt(0.5), 0)) <= 1e-15);
  CHECK(std::abs(s.c2 - Complex(std::sqrt(0.5), 0)) <= 1e-15);
  Gen g(71);
  for (int i = 0; i < 100; ++i) {
    const SpinState v = spin_state(g.direction());
    CHECK(std::norm(inner_product(v, v)) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("spin operators") {
  const SpinObservable h = spin_operator(UnitVector::north());
  CHECK(h.m[0][0] == Complex(0.5, 0));
  CHECK(h.m[1][1] == Complex(-0.5, 0));
  CHECK(std::abs(h.m[0][1]) == 0.0);
  Gen g(72);
  for (int i = 0; i < 200; ++i) {
    const UnitVector u = g.direction();
    const SpinObservable hu = spin_operator(u);
    const auto ev = hu.eigenvalues();
    CHECK(std::abs(ev[0] - 0.5) <= 1e-12);
    CHECK(std::abs(ev[1] + 0.5) <= 1e-12);
    const SpinState psi = spin_state(u);
    const SpinState out = hu.apply(psi);
    CHECK(dist(out, SpinState{0.5 * psi.c1, 0.5 * psi.c2}) <= 1e-12);
    const SpinState down = spin_state(-u);
    const SpinState out2 = hu.apply(down);
    CHECK(dist(out2, SpinState{-0.5 * down.c1, -0.5 * down.c2}) <= 1e-12);
  }
}

TEST_CASE("transition probabilities") {
  const UnitVector u = UnitVector::north();
  CHECK(transition_probability(u, UnitVector::normalized(0, 1, 0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(transition_probability(u, u) == doctest::Approx(1.0).epsilon(1e-15));
  for (int k = 0; k <= 180; ++k) {
    const double theta = kPi * k / 180.0;
    const UnitVector v = UnitVector::from_spherical(theta, 0.7);
    CHECK(std::abs(transition_probability(u, v) - std::pow(std::cos(theta / 2), 2)) <= 1e-12);
  }
}

TEST_CASE("transition probability matches the quantum machine, symmetric, complementary") {
  Gen g(73);
  for (int i = 0; i < 500; ++i) {
    const UnitVector u = g.direction(), v = g.direction();
    const double p = transition_probability(u, v);
    const double machine = outcome_probabilities(EpsilonExperiment::make(u, 1.0, 0.0), v).p1;
    CHECK(std::abs(p - machine) <= 1e-12);
    CHECK(std::abs(p - transition_probability(v, u)) <= 1e-12);
    CHECK(std::abs(p + transition_probability(-u, v) - 1.0) <= 1e-12);
  }
}
