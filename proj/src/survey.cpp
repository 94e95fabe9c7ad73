#include "qmachine/survey.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "qmachine/conditional.hpp"
#include "qmachine/errors.hpp"
#include "qmachine/state_measures.hpp"

namespace qmachine {

namespace {

constexpr double kYesSlack = 0.01;
constexpr double kSharedEpsilonSlack = 1e-9;
constexpr std::uint64_t kCensusChunk = 1u << 16;

std::size_t region_index(const std::array<Opinion, 3>& o) {
  return static_cast<std::size_t>(o[0]) * 9 + static_cast<std::size_t>(o[1]) * 3 +
         static_cast<std::size_t>(o[2]);
}

}  // namespace

FittedQuestion fit_epsilon_model(const QuestionStats& q) {
  const double a = q.predetermined_yes;
  const double b = q.predetermined_no;
  for (double v : {q.yes_fraction, a, b}) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("poll fractions must lie in [0, 1]");
  }
  const double eps = 1.0 - a - b;
  const double d = b - a;
  if (eps < -1e-12 || eps > 1.0) {
    throw DomainError("inconsistent data for '" + q.label + "': predetermined fractions exceed 1");
  }
  FittedQuestion f{std::clamp(eps, 0.0, 1.0), d, 0.0, false};
  sector_angles(f.epsilon, f.d);
  f.predicted_yes = 0.5 * (1.0 - f.d);
  f.yes_mismatch = std::abs(f.predicted_yes - q.yes_fraction) > kYesSlack;
  return f;
}

SurveyModel SurveyModel::build(const std::vector<QuestionStats>& stats,
                               const std::vector<double>& axis_angles,
                               std::optional<double> force_epsilon) {
  if (stats.empty()) throw UsageError("survey needs at least one question");
  if (axis_angles.size() != stats.size()) {
    throw UsageError("need one axis angle per question");
  }
  SurveyModel m;
  std::vector<FittedQuestion> fits;
  for (const auto& q : stats) {
    fits.push_back(fit_epsilon_model(q));
    if (fits.back().yes_mismatch) {
      std::ostringstream os;
      os << "question '" << q.label << "': observed yes-rate " << q.yes_fraction
         << " differs from the fitted prediction " << fits.back().predicted_yes;
      m.warnings.push_back(os.str());
    }
  }
  if (force_epsilon) {
    m.epsilon = *force_epsilon;
  } else {
    const auto [lo, hi] = std::minmax_element(fits.begin(), fits.end(), [](const auto& x, const auto& y) {
      return x.epsilon < y.epsilon;
    });
    m.epsilon = std::accumulate(fits.begin(), fits.end(), 0.0,
                                [](double acc, const auto& f) { return acc + f.epsilon; }) /
                static_cast<double>(fits.size());
    if (hi->epsilon - lo->epsilon > kSharedEpsilonSlack) {
      m.warnings.push_back("fitted epsilons differ; using their mean " + std::to_string(m.epsilon));
    }
  }
  for (std::size_t i = 0; i < stats.size(); ++i) {
    double d = fits[i].d;
    const double bound = 1.0 - m.epsilon;
    if (std::abs(d) > bound) {
      m.warnings.push_back("question '" + stats[i].label + "': d clamped into [-1 + eps, 1 - eps]");
      d = std::clamp(d, -bound, bound);
    }
    const UnitVector axis = UnitVector::from_spherical(axis_angles[i], 0.0);
    m.questions.push_back({stats[i].label, EpsilonExperiment::make(axis, m.epsilon, d), fits[i]});
  }
  return m;
}

double SurveyModel::axis_angle(std::size_t i, std::size_t j) const {
  return angle_between(questions.at(i).experiment.axis(), questions.at(j).experiment.axis());
}

std::vector<PairConditionals> predict_conditionals(const SurveyModel& m, double tol) {
  std::vector<PairConditionals> out;
  for (std::size_t j = 0; j < m.questions.size(); ++j) {
    for (std::size_t i = 0; i < m.questions.size(); ++i) {
      if (i == j) continue;
      const EpsilonExperiment& target = m.questions[i].experiment;
      const EpsilonExperiment& cond = m.questions[j].experiment;
      auto p = [&](Outcome given) {
        return conditional_quad(ConditionalQuery::make(target, cond, Outcome::O1, given), tol).value;
      };
      const double yy = p(Outcome::O1);
      const double yn = p(Outcome::O2);
      out.push_back({i, j, m.axis_angle(i, j), yy, 1.0 - yy, yn, 1.0 - yn});
    }
  }
  return out;
}

std::string to_string(Opinion o) {
  switch (o) {
    case Opinion::Yes:
      return "yes";
    case Opinion::No:
      return "no";
    case Opinion::Open:
      return "open";
  }
  return "?";
}

std::size_t RegionCensus::nonempty() const {
  return static_cast<std::size_t>(
      std::count_if(regions.begin(), regions.end(), [](const CensusRegion& r) { return r.count > 0; }));
}

RegionCensus region_census(const SurveyModel& m, std::uint64_t n, std::uint64_t seed, unsigned threads) {
  if (m.questions.size() != 3) throw UsageError("the region census needs exactly three questions");
  if (n == 0) throw UsageError("census sample count must be positive");

  std::array<Region, 3> yes{Region::empty(), Region::empty(), Region::empty()};
  std::array<Region, 3> no = yes;
  for (std::size_t q = 0; q < 3; ++q) {
    yes[q] = eig_set(m.questions[q].experiment, OutcomeSet::O1);
    no[q] = eig_set(m.questions[q].experiment, OutcomeSet::O2);
  }
  // Zero-radius eigenstate caps hold a single point, which uniform draws never hit.
  auto member = [](const Region& r, const UnitVector& v) {
    return r.kind() == Region::Kind::Cap && r.sector().half_angle > 0.0 && r.contains(v);
  };

  const std::uint64_t chunks = (n + kCensusChunk - 1) / kCensusChunk;
  std::vector<std::array<std::uint64_t, 27>> tallies(chunks);
  auto run_chunk = [&](std::uint64_t c) {
    RandomStream stream = RandomStream::substream(seed, c);
    const std::uint64_t begin = c * kCensusChunk;
    const std::uint64_t end = std::min(n, begin + kCensusChunk);
    auto& tally = tallies[c];
    tally.fill(0);
    for (std::uint64_t i = begin; i < end; ++i) {
      const UnitVector v = sample_uniform_sphere(stream);
      std::array<Opinion, 3> code{};
      for (std::size_t q = 0; q < 3; ++q) {
        code[q] = member(yes[q], v) ? Opinion::Yes : member(no[q], v) ? Opinion::No : Opinion::Open;
      }
      ++tally[region_index(code)];
    }
  };

  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      try {
        run_chunk(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  RegionCensus census{{}, n, seed};
  const double total = static_cast<double>(n);
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      for (std::size_t c = 0; c < 3; ++c) {
        const std::array<Opinion, 3> code{Opinion(a), Opinion(b), Opinion(c)};
        std::uint64_t count = 0;
        for (const auto& t : tallies) count += t[region_index(code)];
        const double f = static_cast<double>(count) / total;
        census.regions.push_back({code, count, f, std::sqrt(f * (1.0 - f) / total)});
      }
    }
  }
  return census;
}

SurveyClassification classify_survey(const SurveyModel& m, double rational_tol) {
  if (m.questions.size() != 3) throw UsageError("classification needs exactly three questions");
  const auto& u = m.questions[0].experiment;
  const auto& v = m.questions[1].experiment;
  const auto& w = m.questions[2].experiment;
  auto exact = [&](double p) { return simplest_rational_within(p, rational_tol); };
  auto cond = [&](const EpsilonExperiment& t, Outcome to, const EpsilonExperiment& c) {
    return exact(conditional_quad(ConditionalQuery::make(t, c, to, Outcome::O1), rational_tol).value);
  };

  SurveyClassification out;
  const Rational v_given_w = cond(v, Outcome::O1, w);
  out.triad.marginals = {
      {Event::U, exact(outcome_probability_mixed(u, OutcomeSet::O1, MixedState::uniform()))},
      {Event::V, exact(outcome_probability_mixed(v, OutcomeSet::O1, MixedState::uniform()))},
      {Event::W, exact(outcome_probability_mixed(w, OutcomeSet::O1, MixedState::uniform()))}};
  out.triad.conditionals = {{{Event::V, false}, {Event::W, false}, v_given_w},
                            {{Event::U, false}, {Event::W, false}, cond(u, Outcome::O1, w)},
                            {{Event::U, true}, {Event::V, false}, cond(u, Outcome::O2, v)}};
  out.gamma2 = v_given_w;
  out.kolmogorov = check_kolmogorov(out.triad);
  if (out.gamma2 > 0 && out.gamma2 < 1) {
    out.hilbert = check_hilbert2d(out.gamma2);
    out.classification = classify(out.kolmogorov, *out.hilbert);
  } else {
    out.classification = out.kolmogorov.feasible ? Classification::Kolmogorovian : Classification::Neither;
  }
  return out;
}

}  // namespace qmachine
