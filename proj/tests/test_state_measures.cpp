#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "qmachine/cap_integral.hpp"
#include "qmachine/errors.hpp"
#include "qmachine/state_measures.hpp"

using namespace qmachine;
using namespace qmachine::testing;

namespace {

const UnitVector kU = UnitVector::from_spherical(0.9, 0.4);

MixedState random_state(Gen& g) {
  switch (g.index(3)) {
    case 0:
      return MixedState::uniform();
    case 1:
      return MixedState::cap_uniform(SectorCap::make(g.direction(), g.real(0.2, kPi)));
    default: {
      const double w = g.real(0.1, 0.9);
      return MixedState::mixture({{w, MixedState::uniform()},
                                  {1.0 - w, MixedState::cap_uniform(SectorCap::make(g.direction(), g.real(0.2, 2.0)))}});
    }
  }
}

}  // namespace

TEST_CASE("eigenstate sets") {
  Region r = eig_set(EpsilonExperiment::make(kU, 1.0, 0.0), OutcomeSet::O1);
  REQUIRE(r.kind() == Region::Kind::Cap);
  CHECK(r.sector().half_angle == 0.0);
  CHECK(r.sector().center == kU);
  CHECK(r.contains(kU));

  r = eig_set(EpsilonExperiment::make(kU, 0.0, 0.0), OutcomeSet::O1);
  CHECK(r.sector().half_angle == doctest::Approx(kPi / 2));
  CHECK(r.sector().boundary == Boundary::Open);

  r = eig_set(EpsilonExperiment::make(kU, std::sqrt(2.0) / 2, 0.0), OutcomeSet::O1);
  CHECK(r.sector().half_angle == doctest::Approx(kPi / 4));
  CHECK(r.sector().boundary == Boundary::Closed);
}

TEST_CASE("possibility sets") {
  Region r = pos_set(EpsilonExperiment::make(kU, 1.0, 0.0), OutcomeSet::O1);
  CHECK(r.sector().half_angle == doctest::Approx(kPi));
  CHECK(r.sector().boundary == Boundary::Open);
  CHECK(r.contains(UnitVector::from_spherical(2.0, 1.0)));

  r = pos_set(EpsilonExperiment::make(kU, 0.0, 0.3), OutcomeSet::O1);
  CHECK(std::cos(r.sector().half_angle) == doctest::Approx(0.3));
  CHECK(r.sector().boundary == Boundary::Closed);
}

TEST_CASE("eig is inside pos as cap radii") {
  for (int i = 0; i <= 20; ++i) {
    const double eps = i / 20.0;
    for (int j = 0; j <= 20; ++j) {
      const double d = (1.0 - eps) * (-1.0 + j / 10.0);
      const auto e = EpsilonExperiment::make(kU, eps, d);
      for (OutcomeSet a : {OutcomeSet::O1, OutcomeSet::O2}) {
        CHECK(eig_set(e, a).sector().half_angle <= pos_set(e, a).sector().half_angle + 1e-15);
      }
    }
  }
}

TEST_CASE("measures under the uniform state") {
  const MixedState uni = MixedState::uniform();
  CHECK(measure_of(uni, eig_set(EpsilonExperiment::make(kU, 1.0, 0.0), OutcomeSet::O1)).value == 0.0);
  CHECK(measure_of(uni, pos_set(EpsilonExperiment::make(kU, 1.0, 0.0), OutcomeSet::O1)).value ==
        doctest::Approx(1.0).epsilon(1e-15));
  for (double d : {-0.6, 0.0, 0.3}) {
    const auto e = EpsilonExperiment::make(kU, 0.0, d);
    CHECK(measure_of(uni, eig_set(e, OutcomeSet::O1)).value == doctest::Approx((1 - d) / 2).epsilon(1e-14));
  }
}

TEST_CASE("outcome probability under the uniform state is (1 - d)/2") {
  const MixedState uni = MixedState::uniform();
  CHECK(outcome_probability_mixed(EpsilonExperiment::make(kU, 1.0, 0.0), OutcomeSet::O1, uni) ==
        doctest::Approx(0.5).epsilon(1e-15));
  for (int i = 0; i <= 20; ++i) {
    const double eps = i / 20.0;
    for (int j = 0; j <= 20; ++j) {
      const double d = (1.0 - eps) * (-1.0 + j / 10.0);
      const auto e = EpsilonExperiment::make(kU, eps, d);
      CHECK(std::abs(outcome_probability_mixed(e, OutcomeSet::O1, uni) - (1 - d) / 2) <= 1e-12);
      // Quadrature route: the whole sphere as a cap-uniform state.
      const MixedState whole = MixedState::cap_uniform(SectorCap::make(kU, kPi));
      CHECK(std::abs(outcome_probability_mixed(e, OutcomeSet::O1, whole, 1e-10) - (1 - d) / 2) <= 1e-8);
    }
  }
}

TEST_CASE("outcome probability under the uniform state: Monte Carlo oracle") {
  Gen g(21);
  for (int i = 0; i < 20; ++i) {
    const auto e = g.experiment();
    RandomStream s = RandomStream::substream(21, i);
    const int n = 100'000;
    int hits = 0;
    for (int k = 0; k < n; ++k) hits += run_trial(e, sample_uniform_sphere(s), s).outcome == Outcome::O1;
    const double exact = (1 - e.d()) / 2;
    CHECK(within_sigma(double(hits) / n, exact, binomial_se(exact, n)));
  }
}

TEST_CASE("sandwich worked examples") {
  const MixedState uni = MixedState::uniform();
  Sandwich s = sandwich_check(EpsilonExperiment::make(kU, 1.0, 0.0), OutcomeSet::O1, uni);
  CHECK(s.lower == 0.0);
  CHECK(s.mid == 0.5);
  CHECK(s.upper == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.holds);
  for (double d : {-0.4, 0.0, 0.25}) {
    s = sandwich_check(EpsilonExperiment::make(kU, 0.0, d), OutcomeSet::O1, uni);
    CHECK(std::abs(s.lower - (1 - d) / 2) <= 1e-9);
    CHECK(std::abs(s.mid - (1 - d) / 2) <= 1e-9);
    CHECK(std::abs(s.upper - (1 - d) / 2) <= 1e-9);
  }
  s = sandwich_check(EpsilonExperiment::make(kU, 0.5, 0.0), OutcomeSet::Neither, uni);
  CHECK(s.lower == 0.0);
  CHECK(s.mid == 0.0);
  CHECK(s.upper == 0.0);
}

TEST_CASE("sandwich inequality on random instances") {
  Gen g(31);
  for (int i = 0; i < 200; ++i) {
    const auto e = g.experiment();
    const MixedState mu = random_state(g);
    const OutcomeSet a = g.index(2) == 0 ? OutcomeSet::O1 : OutcomeSet::O2;
    const Sandwich s = sandwich_check(e, a, mu);
    CHECK(s.holds);
    CHECK(s.lower <= s.mid + 1e-9);
    CHECK(s.mid <= s.upper + 1e-9);
  }
}

TEST_CASE("classical experiments collapse the sandwich") {
  Gen g(32);
  for (int i = 0; i < 50; ++i) {
    const double d = g.real(-0.9, 0.9);
    const auto e = EpsilonExperiment::make(g.direction(), 0.0, d);
    const MixedState mu = random_state(g);
    const Sandwich s = sandwich_check(e, OutcomeSet::O1, mu);
    CHECK(std::abs(s.lower - s.upper) <= 1e-9);
    CHECK(std::abs(s.mid - s.upper) <= 1e-9);
  }
}

TEST_CASE("is_classical") {
  const MixedState uni = MixedState::uniform();
  CHECK(is_classical(EpsilonExperiment::make(kU, 0.0, 0.0), uni));
  CHECK_FALSE(is_classical(EpsilonExperiment::make(kU, 1.0, 0.0), uni));
  CHECK_FALSE(is_classical(EpsilonExperiment::make(kU, 0.5, 0.0), uni));
}

TEST_CASE("conditioning") {
  const MixedState uni = MixedState::uniform();
  const UnitVector w = UnitVector::north();
  const auto f = EpsilonExperiment::make(w, std::sqrt(2.0) / 2, 0.0);
  const MixedState c = condition(uni, f, OutcomeSet::O1);
  REQUIRE(c.kind() == MixedState::Kind::CapUniform);
  REQUIRE(c.caps().size() == 1);
  CHECK(c.caps()[0].center == w);
  CHECK(c.caps()[0].half_angle == doctest::Approx(kPi / 4));
  CHECK(condition(c, f, OutcomeSet::O1) == c);
  CHECK_THROWS_AS(condition(uni, EpsilonExperiment::make(w, 1.0, 0.0), OutcomeSet::O1), ConditioningError);
  CHECK_THROWS_AS(condition(uni, f, OutcomeSet::Neither), ConditioningError);
  CHECK(condition(uni, f, OutcomeSet::Both) == uni);

  const MixedState mix = MixedState::mixture({{0.5, uni}, {0.5, MixedState::cap_uniform(SectorCap::make(w, 0.5))}});
  const MixedState cm = condition(mix, f, OutcomeSet::O1);
  CHECK(condition(cm, f, OutcomeSet::O1) == cm);
  CHECK(measure_of(cm, eig_set(f, OutcomeSet::O1)).value == doctest::Approx(1.0));
}

TEST_CASE("conditioning on a second cap makes an intersection state") {
  const MixedState uni = MixedState::uniform();
  const auto f = EpsilonExperiment::make(UnitVector::north(), 0.5, 0.0);
  const auto g = EpsilonExperiment::make(UnitVector::from_spherical(0.8, 0.0), 0.5, 0.0);
  const MixedState c = condition(condition(uni, f, OutcomeSet::O1), g, OutcomeSet::O1);
  CHECK(c.caps().size() == 2);
  RandomStream s(4);
  for (int i = 0; i < 1000; ++i) {
    const UnitVector v = c.sample(s);
    CHECK(c.caps()[0].contains(v));
    CHECK(c.caps()[1].contains(v));
  }
}

TEST_CASE("Bayes formula holds for classical experiments") {
  Gen g(41);
  const MixedState uni = MixedState::uniform();
  for (int i = 0; i < 30; ++i) {
    const auto e = EpsilonExperiment::make(g.direction(), 0.0, g.real(-0.8, 0.8));
    const auto f = EpsilonExperiment::make(g.direction(), 0.0, g.real(-0.8, 0.8));
    const OutcomeSet ae = g.index(2) ? OutcomeSet::O1 : OutcomeSet::O2;
    const OutcomeSet af = g.index(2) ? OutcomeSet::O1 : OutcomeSet::O2;
    const double mf = measure_of(uni, eig_set(f, af)).value;
    const double lhs = outcome_probability_mixed(e, ae, condition(uni, f, af), 1e-10) * mf;
    const SectorCap both[2] = {eig_set(e, ae).sector(), eig_set(f, af).sector()};
    const double rhs = integrate_over_caps(both, std::nullopt, 1e-11).value;
    CHECK(std::abs(lhs - rhs) <= 1e-6);
  }
}

TEST_CASE("mixture validation") {
  CHECK_THROWS_AS(MixedState::mixture({{0.3, MixedState::uniform()}}), DomainError);
  CHECK_THROWS_AS(MixedState::mixture({}), DomainError);
  CHECK_THROWS_AS(MixedState::cap_uniform(SectorCap::make(kU, 0.0)), DomainError);
}
