// Acceptance suite: one PASS/FAIL line per criterion, exit status = failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qmachine/conditional.hpp"
#include "qmachine/embeddability.hpp"
#include "qmachine/epsilon_machine.hpp"
#include "qmachine/random.hpp"
#include "qmachine/spin.hpp"
#include "qmachine/state_measures.hpp"
#include "qmachine/survey.hpp"

using namespace qmachine;

namespace {

const double kRoot2Half = std::sqrt(2.0) / 2.0;

struct Outcome_ {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome_(std::ostream&)> body;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double binomial_se(double p, std::uint64_t n) { return std::sqrt(p * (1 - p) / static_cast<double>(n)); }

UnitVector state_at(const UnitVector& axis, double x) {
  const auto [e1, e2] = axis.orthonormal_complement();
  (void)e2;
  const double s = std::sqrt(std::max(0.0, 1 - x * x));
  return UnitVector::normalized(x * axis.x() + s * e1.x(), x * axis.y() + s * e1.y(), x * axis.z() + s * e1.z());
}

Outcome_ quantum_law(std::ostream&) {
  const UnitVector u = UnitVector::north();
  const auto e = EpsilonExperiment::make(u, 1.0, 0.0);
  double worst = 0.0;
  for (int k = 0; k <= 180; ++k) {
    const double theta = kPi * k / 180.0;
    worst = std::max(worst, std::abs(outcome_probabilities(e, UnitVector::from_spherical(theta, 0.0)).p1 -
                                     std::pow(std::cos(theta / 2), 2)));
  }
  const double theta = kPi / 3;
  const auto mc = estimate_probability_mc(e, UnitVector::from_spherical(theta, 0.0), 1'000'000, 20240601);
  const double exact = std::pow(std::cos(theta / 2), 2);
  const double z = std::abs(mc.estimate - exact) / binomial_se(exact, 1'000'000);
  return {worst <= 1e-12 && z <= 4.0, fmt("max grid error %.2e, MC %.5f vs %.5f (%.2f sigma)", worst, mc.estimate, exact, z)};
}

Outcome_ band_law(std::ostream&) {
  RandomStream g(2);
  double worst_z = 0.0;
  bool ok = true;
  for (int i = 0; i < 100; ++i) {
    const double eps = g.uniform(0.01, 1.0);
    const double d = g.uniform(-(1 - eps), 1 - eps);
    const double x = g.uniform(d - eps, d + eps);
    const UnitVector u = sample_uniform_sphere(g);
    const auto e = EpsilonExperiment::make(u, eps, d);
    const UnitVector v = state_at(u, x);
    const double law = (v.dot(u) - d + eps) / (2 * eps);
    ok = ok && std::abs(outcome_probabilities(e, v).p1 - std::clamp(law, 0.0, 1.0)) <= 1e-12;
    const auto mc = estimate_probability_mc(e, v, 100'000, 1000 + i);
    const double se = std::max(binomial_se(law, 100'000), 1e-12);
    worst_z = std::max(worst_z, std::abs(mc.estimate - law) / se);
  }
  return {ok && worst_z <= 4.0, fmt("100 instances, worst deviation %.2f sigma", worst_z)};
}

Outcome_ sandwich(std::ostream&) {
  RandomStream g(3);
  int held = 0;
  for (int i = 0; i < 200; ++i) {
    const double eps = g.uniform01();
    const auto e = EpsilonExperiment::make(sample_uniform_sphere(g), eps, g.uniform(-(1 - eps), 1 - eps));
    MixedState mu = MixedState::uniform();
    const double pick = g.uniform01();
    if (pick < 1.0 / 3) {
      mu = MixedState::cap_uniform(SectorCap::make(sample_uniform_sphere(g), g.uniform(0.2, kPi)));
    } else if (pick < 2.0 / 3) {
      const double w = g.uniform(0.1, 0.9);
      mu = MixedState::mixture(
          {{w, MixedState::uniform()},
           {1 - w, MixedState::cap_uniform(SectorCap::make(sample_uniform_sphere(g), g.uniform(0.2, 2.0)))}});
    }
    held += sandwich_check(e, g.coin() ? OutcomeSet::O1 : OutcomeSet::O2, mu).holds;
  }
  const UnitVector u = UnitVector::north();
  const Sandwich q = sandwich_check(EpsilonExperiment::make(u, 1.0, 0.0), OutcomeSet::O1, MixedState::uniform());
  const bool quantum = q.lower == 0.0 && q.mid == 0.5 && std::abs(q.upper - 1.0) <= 1e-15;
  double worst = 0.0;
  for (double d : {-0.5, 0.0, 0.3}) {
    const Sandwich c = sandwich_check(EpsilonExperiment::make(u, 0.0, d), OutcomeSet::O1, MixedState::uniform());
    for (double v : {c.lower, c.mid, c.upper}) worst = std::max(worst, std::abs(v - (1 - d) / 2));
  }
  return {held == 200 && quantum && worst <= 1e-9,
          fmt("%.0f/200 hold; eps=1 triple (%.17g, %.17g, %.17g)", held, q.lower, q.mid, q.upper) +
              fmt("; eps=0 collapse error %.1e", worst)};
}

Outcome_ eps_independence(std::ostream&) {
  const UnitVector u = UnitVector::from_spherical(0.8, 0.3);
  const MixedState uni = MixedState::uniform();
  const MixedState whole = MixedState::cap_uniform(SectorCap::make(u, kPi));
  double worst_closed = 0.0, worst_quad = 0.0, worst_z = 0.0;
  int k = 0;
  for (int i = 0; i <= 20; ++i) {
    const double eps = i / 20.0;
    for (int j = 0; j <= 20; ++j) {
      const double d = (1 - eps) * (-1 + j / 10.0);
      const auto e = EpsilonExperiment::make(u, eps, d);
      const double want = (1 - d) / 2;
      worst_closed = std::max(worst_closed, std::abs(outcome_probability_mixed(e, OutcomeSet::O1, uni) - want));
      worst_quad = std::max(worst_quad, std::abs(outcome_probability_mixed(e, OutcomeSet::O1, whole, 1e-10) - want));
      if ((i + j) % 4 == 0) {
        RandomStream s = RandomStream::substream(4, k++);
        const int n = 20'000;
        int hits = 0;
        for (int t = 0; t < n; ++t) hits += run_trial(e, sample_uniform_sphere(s), s).outcome == qmachine::Outcome::O1;
        worst_z = std::max(worst_z, std::abs(double(hits) / n - want) / std::max(binomial_se(want, n), 1e-12));
      }
    }
  }
  return {worst_closed <= 1e-8 && worst_quad <= 1e-8 && worst_z <= 4.0,
          fmt("441 points: analytic %.1e, quadrature %.1e, MC worst %.2f sigma", worst_closed, worst_quad, worst_z)};
}

Outcome_ conditional_limits(std::ostream&) {
  double worst_c = 0.0, worst_q = 0.0;
  for (int k = 0; k <= 90; ++k) {
    const double a = kPi * k / 90.0;
    worst_c = std::max(worst_c,
                       std::abs(conditional_quad(ConditionalQuery::coplanar(1e-6, a)).value - (1 - a / kPi)));
    worst_q = std::max(worst_q, std::abs(conditional_quad(ConditionalQuery::coplanar(1.0, a)).value -
                                         std::pow(std::cos(a / 2), 2)));
  }
  return {worst_c <= 1e-3 && worst_q <= 1e-6,
          fmt("max |p - (1 - a/pi)| at eps=1e-6: %.2e; max |p - cos^2(a/2)| at eps=1: %.2e", worst_c, worst_q)};
}

Outcome_ theorem_values(std::ostream& log) {
  const double p60 = conditional_quad(ConditionalQuery::coplanar(kRoot2Half, kPi / 3)).value;
  const double p120 = conditional_quad(ConditionalQuery::coplanar(kRoot2Half, 2 * kPi / 3)).value;
  log << "    geometry: w, v, u coplanar at 0, pi/3, 2pi/3 (adjacent axes pi/3 apart, u and w 2pi/3 apart).\n"
         "    With all three pairs at 2pi/3 the adjacent value would be p(2pi/3) = 0.218, which cannot\n"
         "    produce 0.78; the pi/3 spacing is the only coplanar placement consistent with 0.78/0.22/0.22.\n"
      << fmt("    P(v,w) = p(pi/3) = %.10f, P(u,w) = p(2pi/3) = %.10f, P(-u,v) = %.10f\n", p60,
             p120, conditional_quad(ConditionalQuery::make(
                                        EpsilonExperiment::make(-UnitVector::from_spherical(2 * kPi / 3, 0), kRoot2Half, 0),
                                        EpsilonExperiment::make(UnitVector::from_spherical(kPi / 3, 0), kRoot2Half, 0)))
                       .value);
  return {std::abs(p60 - 0.78) <= 0.01 && std::abs(p120 - 0.22) <= 0.01,
          fmt("p(pi/3) = %.4f (0.78 +- 0.01), p(2pi/3) = %.4f (0.22 +- 0.01)", p60, p120)};
}

Outcome_ kolmogorov(std::ostream&) {
  const TriadData t = TriadData::chain(parse_rational("0.78"), parse_rational("0.22"), parse_rational("0.22"));
  const auto v = check_kolmogorov(t);
  const bool ok = !v.feasible && v.certificate && v.certificate->lower == Rational(28, 100) &&
                  v.certificate->upper == Rational(11, 100);
  std::string detail = v.feasible ? "feasible (unexpected)" : "infeasible";
  if (v.certificate) {
    detail += "; " + format_rational(v.certificate->lower) + " <= " + v.certificate->expression +
              " <= " + format_rational(v.certificate->upper);
  }
  return {ok, detail};
}

Outcome_ hilbert(std::ostream&) {
  const auto h = check_hilbert2d(parse_rational("0.78"));
  const bool value = h.required_cosine == Rational(-14, 11) && !h.feasible &&
                     std::round(to_double(h.required_cosine) * 100) / 100 == -1.27;
  const Rational b(3, 4), step(1, 1000000);
  const bool boundary = check_hilbert2d(b).feasible && check_hilbert2d(b).required_cosine == -1 &&
                        check_hilbert2d(b - step).feasible && !check_hilbert2d(b + step).feasible;
  return {value && boundary, "required_cosine = " + format_rational(h.required_cosine) +
                                 fmt(" = %.4f, infeasible; boundary at 3/4 ", to_double(h.required_cosine)) +
                                 (boundary ? "confirmed" : "NOT confirmed")};
}

Outcome_ spin(std::ostream&) {
  RandomStream g(9);
  double worst_t = 0.0, worst_e = 0.0;
  for (int i = 0; i < 500; ++i) {
    const UnitVector u = sample_uniform_sphere(g), v = sample_uniform_sphere(g);
    const double amp = std::norm(inner_product(spin_state(u), spin_state(v)));
    worst_t = std::max(worst_t, std::abs(amp - outcome_probabilities(EpsilonExperiment::make(u, 1.0, 0.0), v).p1));
    const SpinState psi = spin_state(u);
    const SpinState h = spin_operator(u).apply(psi);
    worst_e = std::max(worst_e, std::sqrt(std::norm(h.c1 - 0.5 * psi.c1) + std::norm(h.c2 - 0.5 * psi.c2)));
  }
  return {worst_t <= 1e-12 && worst_e <= 1e-12,
          fmt("500 pairs: max |<psi_u,psi_v>|^2 - p1| = %.1e; max |H_u psi_u - psi_u/2| = %.1e", worst_t, worst_e)};
}

std::vector<QuestionStats> questions(double pre) {
  return {{"u", 0.5, pre, pre}, {"v", 0.5, pre, pre}, {"w", 0.5, pre, pre}};
}

Outcome_ survey(std::ostream& log) {
  const std::vector<double> default_angles = {0.0, kPi / 3, 2 * kPi / 3};
  const SurveyModel fitted = SurveyModel::build(questions(0.15), default_angles);
  const FittedQuestion f = fitted.questions[0].fit;
  const bool fit_ok = std::abs(f.epsilon - 0.70) <= 1e-12 && std::abs(f.d) <= 1e-12;

  const SurveyModel forced = SurveyModel::build(questions(0.15), default_angles, kRoot2Half);
  const RegionCensus census = region_census(forced, 1'000'000, 20240601);
  const SurveyClassification verdict = classify_survey(forced);

  const std::vector<double> narrow = {0.0, kPi / 6, kPi / 3};
  const SurveyClassification pre = classify_survey(SurveyModel::build(questions(0.5), narrow));
  const SurveyClassification pre_default = classify_survey(SurveyModel::build(questions(0.5), default_angles));
  log << "    all-predetermined survey at 0/30/60 deg: " << to_string(pre.classification)
      << " (gamma^2 = " << format_rational(pre.gamma2) << ")\n"
      << "    all-predetermined survey at 0/60/120 deg: " << to_string(pre_default.classification)
      << " (Kolmogorov " << (pre_default.kolmogorov.feasible ? "feasible" : "infeasible")
      << ", gamma^2 = " << format_rational(pre_default.gamma2)
      << " <= 3/4 so a 2-D Hilbert model also exists)\n";
  const bool ok = fit_ok && census.nonempty() == 13 && verdict.classification == Classification::Neither &&
                  pre.classification == Classification::Kolmogorovian && pre_default.kolmogorov.feasible;
  return {ok, fmt("fit eps = %.2f d = %.2f; ", f.epsilon, f.d) + "forced eps=sqrt2/2: " +
                  to_string(verdict.classification) + fmt(", census %.0f regions; ", census.nonempty()) +
                  "all-predetermined: " + to_string(pre.classification)};
}

Outcome_ triangulation(std::ostream& log) {
  RandomStream g(11);
  double worst_z = 0.0, worst_cf = 0.0;
  int valid = 0, diagnosed = 0;
  for (int i = 0; i < 30; ++i) {
    const double eps = g.uniform(0.02, 0.98);
    const double alpha = g.uniform(0.0, kPi);
    const ConditionalQuery q = ConditionalQuery::coplanar(eps, alpha);
    const double quad = conditional_quad(q).value;
    const auto mc = conditional_mc(q, 100'000, 700 + i);
    worst_z = std::max(worst_z, std::abs(mc.value - quad) / std::max(binomial_se(quad, 100'000), 1e-9));
    const auto cf = conditional_closed_form(eps, alpha);
    if (cf.validity == Validity::Valid) {
      ++valid;
      worst_cf = std::max(worst_cf, std::abs(cf.value - quad));
      continue;
    }
    ++diagnosed;
    const auto& d = cf.diagnostics;
    log << fmt("    eps=%.4f alpha=%.4f ", eps, alpha) << to_string(cf.validity)
        << fmt(": H args (%.4f, %.4f, %.4f, %.4f)", d.h1_arg, d.h2a_arg, d.h2b_arg, d.h3_arg)
        << fmt(" radicands u %.4f, -u %.4f", d.radicand_u, d.radicand_minus_u) << "\n";
    for (const auto& v : d.domain_violations) log << "      " << v << "\n";
  }
  return {worst_z <= 4.0 && worst_cf <= 1e-4,
          fmt("30 queries: MC worst %.2f sigma; closed form valid on %.0f, max |cf - quad| = %.1e; %.0f diagnosed",
              worst_z, valid, worst_cf, diagnosed)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "quantum machine law", 5, quantum_law},
      {2, "epsilon-band law", 20, band_law},
      {3, "sandwich theorem", 60, sandwich},
      {4, "epsilon-independence", 60, eps_independence},
      {5, "conditional limits", 30, conditional_limits},
      {6, "0.78 / 0.22 values", 5, theorem_values},
      {7, "Kolmogorov impossibility", 1, kolmogorov},
      {8, "Hilbert impossibility", 1, hilbert},
      {9, "spin crosscheck", 10, spin},
      {10, "survey pipeline", 10, survey},
      {11, "oracle triangulation", 60, triangulation},
  };
  int failures = 0;
  double total = 0.0;
  for (const auto& c : criteria) {
    std::ostringstream log;
    const auto start = std::chrono::steady_clock::now();
    Outcome_ r{false, ""};
    try {
      r = c.body(log);
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    total += secs;
    const bool in_time = secs <= c.budget_s;
    const bool pass = r.pass && in_time;
    failures += !pass;
    std::printf("[%s] %2d %-26s %7.2fs  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.title, secs, r.detail.c_str(),
                in_time ? "" : " (over time budget)");
    std::fputs(log.str().c_str(), stdout);
  }
  std::printf("%d/%zu criteria passed in %.1fs\n", static_cast<int>(criteria.size()) - failures, criteria.size(),
              total);
  return failures;
}
